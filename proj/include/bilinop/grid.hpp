#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "bilinop/errors.hpp"

namespace bilinop {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniform grid on a circle of circumference 2*pi*L. Physical frequencies
/// live on the lattice {m/L : -N/2 <= m < N/2}.
struct GridSpec {
  std::int64_t n = 0;
  double scaleL = 1.0;

  GridSpec() = default;
  GridSpec(std::int64_t sampleCount, double scale);

  double period() const { return kTwoPi * scaleL; }
  double spacing() const { return period() / static_cast<double>(n); }
  double nyquist() const { return static_cast<double>(n) / (2.0 * scaleL); }
  std::int64_t minIndex() const { return -n / 2; }
  std::int64_t maxIndex() const { return n / 2 - 1; }
  double frequency(std::int64_t m) const { return static_cast<double>(m) / scaleL; }
  double point(std::int64_t i) const { return spacing() * static_cast<double>(i); }
  bool containsIndex(std::int64_t m) const { return m >= minIndex() && m <= maxIndex(); }

  bool operator==(const GridSpec&) const = default;
};

/// Fourier coefficients c_m with f(x) = sum_m c_m e^{i x m / L}.
/// Dense storage covers the whole lattice; sparse storage keeps an ordered
/// index -> coefficient map.
class SpectralCoefficients {
public:
  enum class Storage { Dense, Sparse };

  SpectralCoefficients() = default;

  static SpectralCoefficients zero(const GridSpec& grid);
  static SpectralCoefficients dense(const GridSpec& grid, std::vector<Complex> values);
  static SpectralCoefficients sparse(const GridSpec& grid,
                                     std::map<std::int64_t, Complex> entries);

  const GridSpec& grid() const { return grid_; }
  Storage storage() const;

  Complex at(std::int64_t m) const;
  void set(std::int64_t m, Complex value);
  void add(std::int64_t m, Complex value);

  std::int64_t nnz() const;

  /// Visit nonzero entries in ascending index order: f(m, c_m).
  void forEachNonzero(const std::function<void(std::int64_t, Complex)>& f) const;
  std::vector<std::pair<std::int64_t, Complex>> nonzeroEntries() const;

  /// [min index, max index] over nonzero entries; empty for the zero element.
  std::optional<std::pair<std::int64_t, std::int64_t>> supportBounds() const;

  SpectralCoefficients toDense() const;

  /// Drops entries below `relativeTol * max|c|`.
  SpectralCoefficients toSparse(double relativeTol = 0.0) const;

private:
  GridSpec grid_;
  std::variant<std::vector<Complex>, std::map<std::int64_t, Complex>> data_ =
      std::map<std::int64_t, Complex>{};
};

/// Complex-valued samples at x_i = i*h. Functions produced by `synthesize`
/// remember their coefficients, so spectral consumers see exact supports.
class SampledFunction {
public:
  SampledFunction() = default;
  SampledFunction(GridSpec grid, std::vector<Complex> values);
  SampledFunction(GridSpec grid, std::vector<Complex> values,
                  std::shared_ptr<const SpectralCoefficients> knownSpectrum);

  const GridSpec& grid() const { return grid_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  std::span<const Complex> values() const { return values_; }
  Complex value(std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }

  /// Invalidates any attached spectrum.
  std::vector<Complex>& mutableValues();

  bool hasKnownSpectrum() const { return spectrum_ != nullptr; }

  /// Known coefficients if attached, otherwise a fresh analysis (not cached).
  SpectralCoefficients spectrum() const;

private:
  GridSpec grid_;
  std::vector<Complex> values_;
  std::shared_ptr<const SpectralCoefficients> spectrum_;
};

/// Forward transform: recovers {c_m} with f(x_i) = sum_m c_m e^{i x_i m/L}.
SpectralCoefficients analyze(const SampledFunction& f);

/// Inverse of analyze; accepts sparse input and attaches it to the result.
SampledFunction synthesize(const SpectralCoefficients& coeffs);

/// Discrete L^p norm (h-weighted Riemann sum); p = infinity gives max |f|.
double lebesgueNorm(const SampledFunction& f, double p);

enum class AliasingPolicy {
  Raise,      ///< error out when the product support can exceed the lattice
  Upsample,   ///< zero-pad both factors onto a 2x grid first
};

/// Exact pointwise product. When both factors carry known spectra the
/// combined support is checked against the lattice; the result of the
/// Upsample policy lives on the doubled grid.
SampledFunction pointwiseProduct(const SampledFunction& f, const SampledFunction& g,
                                 AliasingPolicy policy = AliasingPolicy::Raise);

}  // namespace bilinop
