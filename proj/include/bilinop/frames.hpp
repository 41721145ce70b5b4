#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bilinop/grid.hpp"

namespace bilinop {

/// Polynomial transition rho: [0,1] -> [0,1] with rho(0)=0, rho(1)=1 and
/// exact complementarity rho(t) + rho(1-t) = 1. `smoothOrder` derivatives
/// vanish at both endpoints, so gluing against constants is C^smoothOrder.
/// The default (order 3) is t^4 (35 - 84 t + 70 t^2 - 20 t^3).
class BumpProfile {
public:
  explicit BumpProfile(int smoothOrder = 3);

  double operator()(double t) const;
  int smoothOrder() const { return order_; }

private:
  int order_;
  std::vector<double> coeffs_;
};

/// Dyadic Littlewood-Paley bank on a grid: a low-pass PhiHat supported in
/// {|xi| <= 1} (identically 1 on {|xi| <= 1/2}) and the telescoped band
/// generator PsiHat(xi) = PhiHat(xi/2) - PhiHat(xi), supported in
/// {1/2 <= |xi| <= 2}. By construction
///   PhiHat(xi) + sum_{k=0}^{kMax} PsiHat(2^-k xi) = PhiHat(2^-(kMax+1) xi),
/// which equals 1 for |xi| <= 2^kMax.
class LPFrame {
public:
  LPFrame() = default;

  const GridSpec& grid() const { return grid_; }
  const BumpProfile& profile() const { return profile_; }
  int kMax() const { return kMax_; }

  double phiHat(double xi) const;
  double psiHat(double xi) const { return phiHat(0.5 * xi) - phiHat(xi); }
  /// PsiHat(2^-k xi); negative k dilates toward low frequency.
  double psiHatLevel(int k, double xi) const { return psiHat(std::ldexp(1.0, -k) * xi); }
  double partitionValue(double xi) const;

  /// PhiHat over the lattice, index slot m + N/2.
  std::span<const double> phiHatLattice() const { return phiLattice_; }

  friend LPFrame buildLPFrame(const GridSpec& grid, const BumpProfile& profile);

private:
  GridSpec grid_;
  BumpProfile profile_{};
  int kMax_ = 0;
  std::vector<double> phiLattice_;
};

LPFrame buildLPFrame(const GridSpec& grid, const BumpProfile& profile = BumpProfile());

/// Multiply f's coefficients by filterHat(m/L) and resynthesize.
SampledFunction bandProject(const SampledFunction& f,
                            const std::function<double(double)>& filterHat);
SpectralCoefficients bandProject(const SpectralCoefficients& coeffs,
                                 const std::function<double(double)>& filterHat);

/// Half-line cutoff: ThetaHat = 0 on (-inf, 1], 1 on [2, inf), monotone
/// transition in between.
class ThetaProfile {
public:
  ThetaProfile() = default;
  explicit ThetaProfile(BumpProfile profile) : profile_(std::move(profile)) {}

  double operator()(double omega) const {
    if (omega <= 1.0) return 0.0;
    if (omega >= 2.0) return 1.0;
    return profile_(omega - 1.0);
  }

  const BumpProfile& profile() const { return profile_; }

private:
  BumpProfile profile_{};
};

ThetaProfile buildTheta(const BumpProfile& profile = BumpProfile());

/// Even annular cutoff: 0 outside (innerZero, outerZero) in |w|, 1 on
/// [innerOne, outerOne], monotone ramps in between.
std::function<double(double)> annularCutoff(double innerZero, double innerOne, double outerOne,
                                            double outerZero, const BumpProfile& profile);

/// One-sided band: 1 on [0, plateauEnd], ramp to 0 at supportEnd, 0 for w < 0.
std::function<double(double)> rampDownCutoff(double plateauEnd, double supportEnd,
                                             const BumpProfile& profile);

/// Unit-translate partition bump: chi(v) = rho(1 - |v|), supported in
/// (-1, 1) with sum_l chi(v + l) = 1 exactly.
std::function<double(double)> translationWindow(const BumpProfile& profile);

}  // namespace bilinop
