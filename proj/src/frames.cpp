#include "bilinop/frames.hpp"

#include <cmath>

namespace bilinop {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

BumpProfile::BumpProfile(int smoothOrder) : order_(smoothOrder) {
  require(smoothOrder >= 1 && smoothOrder <= 15, ErrorCode::InvalidArgument,
          "transition smoothness order must be in [1, 15]");
  // S_R(t) = t^{R+1} sum_k C(R+k,k) C(2R+1,R-k) (-t)^k
  coeffs_.resize(static_cast<std::size_t>(order_) + 1);
  for (int k = 0; k <= order_; ++k) {
    const double c = binomial(order_ + k, k) * binomial(2 * order_ + 1, order_ - k);
    coeffs_[static_cast<std::size_t>(k)] = (k % 2 == 0) ? c : -c;
  }
}

double BumpProfile::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double poly = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) poly = poly * t + coeffs_[k];
  return std::pow(t, order_ + 1) * poly;
}

double LPFrame::phiHat(double xi) const {
  const double a = std::abs(xi);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return profile_(2.0 * (1.0 - a));
}

double LPFrame::partitionValue(double xi) const {
  double sum = phiHat(xi);
  for (int k = 0; k <= kMax_; ++k) sum += psiHatLevel(k, xi);
  return sum;
}

LPFrame buildLPFrame(const GridSpec& grid, const BumpProfile& profile) {
  LPFrame frame;
  frame.grid_ = grid;
  frame.profile_ = profile;
  const int kMax = static_cast<int>(std::floor(std::log2(grid.nyquist()))) - 1;
  require(kMax >= 2, ErrorCode::GridTooSmall,
          "grid resolves fewer than three dyadic levels; increase N or reduce L");
  frame.kMax_ = kMax;
  frame.phiLattice_.resize(static_cast<std::size_t>(grid.n));
  for (std::int64_t m = grid.minIndex(); m <= grid.maxIndex(); ++m) {
    frame.phiLattice_[static_cast<std::size_t>(m + grid.n / 2)] =
        frame.phiHat(grid.frequency(m));
  }
  return frame;
}

SpectralCoefficients bandProject(const SpectralCoefficients& coeffs,
                                 const std::function<double(double)>& filterHat) {
  SpectralCoefficients out = SpectralCoefficients::zero(coeffs.grid());
  coeffs.forEachNonzero([&](std::int64_t m, Complex v) {
    const double w = filterHat(coeffs.grid().frequency(m));
    if (w != 0.0) out.set(m, w * v);
  });
  return out;
}

SampledFunction bandProject(const SampledFunction& f,
                            const std::function<double(double)>& filterHat) {
  return synthesize(bandProject(f.spectrum(), filterHat));
}

ThetaProfile buildTheta(const BumpProfile& profile) { return ThetaProfile(profile); }

std::function<double(double)> annularCutoff(double innerZero, double innerOne, double outerOne,
                                            double outerZero, const BumpProfile& profile) {
  require(0.0 < innerZero && innerZero < innerOne && innerOne < outerOne &&
              outerOne < outerZero,
          ErrorCode::BadCutoffSpec, "annular cutoff breakpoints must be increasing");
  return [=](double w) {
    const double a = std::abs(w);
    if (a <= innerZero || a >= outerZero) return 0.0;
    if (a < innerOne) return profile((a - innerZero) / (innerOne - innerZero));
    if (a <= outerOne) return 1.0;
    return profile((outerZero - a) / (outerZero - outerOne));
  };
}

std::function<double(double)> rampDownCutoff(double plateauEnd, double supportEnd,
                                             const BumpProfile& profile) {
  require(0.0 < plateauEnd && plateauEnd < supportEnd, ErrorCode::BadCutoffSpec,
          "plateau must end strictly before the support does");
  return [=](double w) {
    if (w < 0.0 || w >= supportEnd) return 0.0;
    if (w <= plateauEnd) return 1.0;
    return profile((supportEnd - w) / (supportEnd - plateauEnd));
  };
}

std::function<double(double)> translationWindow(const BumpProfile& profile) {
  return [=](double v) {
    const double t = 1.0 - std::abs(v);
    if (t <= 0.0) return 0.0;
    return profile(t);
  };
}

}  // namespace bilinop
