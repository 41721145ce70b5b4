#pragma once

#include <optional>

#include "bilinop/frames.hpp"
#include "bilinop/grid.hpp"
#include "bilinop/symbols.hpp"

namespace bilinop {

/// Exponents with 1/p + 1/q = 1/t (checked to 1e-12).
struct ExponentTriple {
  double p = 4.0;
  double q = 4.0;
  double t = 2.0;

  ExponentTriple() = default;
  ExponentTriple(double p_, double q_, double t_);
};

struct SobolevParams {
  double s = 0.0;
  double p = 2.0;
};

enum class EvalStrategy {
  Auto,
  DenseAccumulate,
  SparseAccumulate,
  DiagonalConvolution,
  PerPointQuadrature,
};

struct ApplyOptions {
  EvalStrategy strategy = EvalStrategy::Auto;
  AliasingPolicy aliasing = AliasingPolicy::Raise;
  /// DiagonalConvolution: quadrature radius in samples (auto if unset) and
  /// the admissible truncated L^1 tail fraction.
  std::optional<std::int64_t> truncationRadius;
  double truncationTolerance = 1e-10;
};

/// T_sigma(f, g)(x) = sum_{xi, eta} sigma(x, xi, eta) c^f_xi c^g_eta e^{i x (xi + eta)}.
///
/// Strategy notes: Dense/Sparse accumulate output coefficients over the
/// lattice; for structured symbols (separable terms) the same strategies run
/// per term with the x-profile folded back in afterwards. PerPointQuadrature
/// evaluates the double sum at each grid point and works for any symbol.
SampledFunction applyBilinear(const Symbol& sigma, const SampledFunction& f,
                              const SampledFunction& g, const ApplyOptions& options = {});

/// Coefficient-level variant for x-independent or pure-modulation structured
/// symbols; avoids materializing inputs on the grid.
SpectralCoefficients applyBilinearSpectral(const Symbol& sigma, const SpectralCoefficients& cf,
                                           const SpectralCoefficients& cg,
                                           const ApplyOptions& options = {});

/// Quadrature evaluation of a diagonal kernel: with sigma(xi, eta) = m(xi - eta),
///   T(f, g)(x) = integral mHat(y) f(x - y) g(x + y) dy,
/// where mHat comes from a dense inverse transform of the kernel samples and
/// the y-sum is truncated at the configured radius.
SampledFunction applyDiagonalConvolution(const Symbol& sigma, const SampledFunction& f,
                                         const SampledFunction& g,
                                         std::optional<std::int64_t> truncationRadius = {},
                                         double truncationTolerance = 1e-10);

/// || Phi * f ||_p + || ( sum_k 4^{ks} |Psi_k * f|^2 )^{1/2} ||_p over the
/// frame's levels.
double sobolevNorm(const SampledFunction& f, const LPFrame& frame, double s, double p);
double sobolevNorm(const SampledFunction& f, const LPFrame& frame, const SobolevParams& params);

struct ParaproductDetail {
  SampledFunction result;
  int kLow = 0;
  int kHigh = 0;
  double truncatedMassB = 0.0;   ///< spectral mass of b outside covered shells
};

/// Pi_b(f) = sum_k lowpass_k(f) * band_k(b): the low-pass keeps |eta| below
/// a quarter of the band's inner radius, so every retained pair satisfies
/// |eta| <= |xi| / 2. Levels that the lattice cannot resolve are dropped.
SampledFunction classicalParaproduct(const SampledFunction& b, const SampledFunction& f,
                                     const LPFrame& frame);
ParaproductDetail classicalParaproductDetailed(const SampledFunction& b,
                                               const SampledFunction& f, const LPFrame& frame);

/// Multiplier ThetaHat(xi-eta) ThetaHat(xi+eta) + ThetaHat(eta-xi) ThetaHat(-xi-eta)
/// applied to (b, f); xi is b's frequency variable.
SampledFunction improvedParaproduct(const SampledFunction& b, const SampledFunction& f,
                                    const ThetaProfile& theta);
Symbol improvedParaproductSymbol(const ThetaProfile& theta);

/// D(f, g) = fg - Pi~_f(g) - Pi~_g(f), computed as the pointwise difference.
/// Equals applyBilinear with multiplicationDefectSymbol(theta) on (f, g).
SampledFunction multiplicationDefect(const SampledFunction& f, const SampledFunction& g,
                                     const ThetaProfile& theta);
Symbol multiplicationDefectSymbol(const ThetaProfile& theta);

/// Bilinear pairing h * sum_n u(x_n) v(x_n), no conjugation.
Complex pairing(const SampledFunction& u, const SampledFunction& v);

}  // namespace bilinop
