#include "bilinop/grid.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"

namespace bilinop {

namespace {

bool isPowerOfTwo(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

std::size_t denseSlot(const GridSpec& grid, std::int64_t m) {
  return static_cast<std::size_t>(m + grid.n / 2);
}

}  // namespace

GridSpec::GridSpec(std::int64_t sampleCount, double scale) : n(sampleCount), scaleL(scale) {
  require(isPowerOfTwo(sampleCount) && sampleCount >= 8, ErrorCode::InvalidArgument,
          "sample count must be a power of two >= 8");
  require(scale > 0.0 && std::isfinite(scale), ErrorCode::InvalidArgument,
          "scale factor must be positive and finite");
}

SpectralCoefficients SpectralCoefficients::zero(const GridSpec& grid) {
  SpectralCoefficients c;
  c.grid_ = grid;
  c.data_ = std::map<std::int64_t, Complex>{};
  return c;
}

SpectralCoefficients SpectralCoefficients::dense(const GridSpec& grid,
                                                 std::vector<Complex> values) {
  require(static_cast<std::int64_t>(values.size()) == grid.n, ErrorCode::InvalidArgument,
          "dense coefficient array must have one entry per lattice point");
  SpectralCoefficients c;
  c.grid_ = grid;
  c.data_ = std::move(values);
  return c;
}

SpectralCoefficients SpectralCoefficients::sparse(const GridSpec& grid,
                                                  std::map<std::int64_t, Complex> entries) {
  for (const auto& [m, v] : entries) {
    (void)v;
    require(grid.containsIndex(m), ErrorCode::IndexOutOfRange,
            "coefficient index " + std::to_string(m) + " outside the lattice");
  }
  SpectralCoefficients c;
  c.grid_ = grid;
  c.data_ = std::move(entries);
  return c;
}

SpectralCoefficients::Storage SpectralCoefficients::storage() const {
  return std::holds_alternative<std::vector<Complex>>(data_) ? Storage::Dense : Storage::Sparse;
}

Complex SpectralCoefficients::at(std::int64_t m) const {
  if (!grid_.containsIndex(m)) return {0.0, 0.0};
  if (const auto* dense = std::get_if<std::vector<Complex>>(&data_)) {
    return (*dense)[denseSlot(grid_, m)];
  }
  const auto& entries = std::get<std::map<std::int64_t, Complex>>(data_);
  auto it = entries.find(m);
  return it == entries.end() ? Complex{0.0, 0.0} : it->second;
}

void SpectralCoefficients::set(std::int64_t m, Complex value) {
  require(grid_.containsIndex(m), ErrorCode::IndexOutOfRange,
          "coefficient index " + std::to_string(m) + " outside the lattice");
  if (auto* dense = std::get_if<std::vector<Complex>>(&data_)) {
    (*dense)[denseSlot(grid_, m)] = value;
  } else {
    std::get<std::map<std::int64_t, Complex>>(data_)[m] = value;
  }
}

void SpectralCoefficients::add(std::int64_t m, Complex value) {
  require(grid_.containsIndex(m), ErrorCode::IndexOutOfRange,
          "coefficient index " + std::to_string(m) + " outside the lattice");
  if (auto* dense = std::get_if<std::vector<Complex>>(&data_)) {
    (*dense)[denseSlot(grid_, m)] += value;
  } else {
    std::get<std::map<std::int64_t, Complex>>(data_)[m] += value;
  }
}

std::int64_t SpectralCoefficients::nnz() const {
  std::int64_t count = 0;
  forEachNonzero([&](std::int64_t, Complex) { ++count; });
  return count;
}

void SpectralCoefficients::forEachNonzero(
    const std::function<void(std::int64_t, Complex)>& f) const {
  if (const auto* dense = std::get_if<std::vector<Complex>>(&data_)) {
    for (std::int64_t m = grid_.minIndex(); m <= grid_.maxIndex(); ++m) {
      const Complex v = (*dense)[denseSlot(grid_, m)];
      if (v != Complex{0.0, 0.0}) f(m, v);
    }
    return;
  }
  for (const auto& [m, v] : std::get<std::map<std::int64_t, Complex>>(data_)) {
    if (v != Complex{0.0, 0.0}) f(m, v);
  }
}

std::vector<std::pair<std::int64_t, Complex>> SpectralCoefficients::nonzeroEntries() const {
  std::vector<std::pair<std::int64_t, Complex>> out;
  forEachNonzero([&](std::int64_t m, Complex v) { out.emplace_back(m, v); });
  return out;
}

std::optional<std::pair<std::int64_t, std::int64_t>> SpectralCoefficients::supportBounds() const {
  std::optional<std::pair<std::int64_t, std::int64_t>> bounds;
  forEachNonzero([&](std::int64_t m, Complex) {
    if (!bounds) {
      bounds = {m, m};
    } else {
      bounds->first = std::min(bounds->first, m);
      bounds->second = std::max(bounds->second, m);
    }
  });
  return bounds;
}

SpectralCoefficients SpectralCoefficients::toDense() const {
  if (storage() == Storage::Dense) return *this;
  std::vector<Complex> values(static_cast<std::size_t>(grid_.n), Complex{0.0, 0.0});
  forEachNonzero([&](std::int64_t m, Complex v) { values[denseSlot(grid_, m)] = v; });
  return dense(grid_, std::move(values));
}

SpectralCoefficients SpectralCoefficients::toSparse(double relativeTol) const {
  double maxAbs = 0.0;
  forEachNonzero([&](std::int64_t, Complex v) { maxAbs = std::max(maxAbs, std::abs(v)); });
  const double cutoff = relativeTol * maxAbs;
  std::map<std::int64_t, Complex> entries;
  forEachNonzero([&](std::int64_t m, Complex v) {
    if (std::abs(v) > cutoff || (cutoff == 0.0 && v != Complex{0.0, 0.0})) entries[m] = v;
  });
  return sparse(grid_, std::move(entries));
}

SampledFunction::SampledFunction(GridSpec grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  require(static_cast<std::int64_t>(values_.size()) == grid_.n, ErrorCode::InvalidArgument,
          "value array length must equal the grid size");
}

SampledFunction::SampledFunction(GridSpec grid, std::vector<Complex> values,
                                 std::shared_ptr<const SpectralCoefficients> knownSpectrum)
    : grid_(grid), values_(std::move(values)), spectrum_(std::move(knownSpectrum)) {
  require(static_cast<std::int64_t>(values_.size()) == grid_.n, ErrorCode::InvalidArgument,
          "value array length must equal the grid size");
}

std::vector<Complex>& SampledFunction::mutableValues() {
  spectrum_.reset();
  return values_;
}

SpectralCoefficients SampledFunction::spectrum() const {
  if (spectrum_) return *spectrum_;
  return analyze(*this);
}

SpectralCoefficients analyze(const SampledFunction& f) {
  const GridSpec& grid = f.grid();
  const std::int64_t n = grid.n;
  std::vector<Complex> buffer(f.values().begin(), f.values().end());
  detail::dftForwardInPlace(buffer);
  std::vector<Complex> coeffs(static_cast<std::size_t>(n));
  const double scale = 1.0 / static_cast<double>(n);
  for (std::int64_t m = grid.minIndex(); m <= grid.maxIndex(); ++m) {
    const std::int64_t bin = (m % n + n) % n;
    coeffs[static_cast<std::size_t>(m + n / 2)] = buffer[static_cast<std::size_t>(bin)] * scale;
  }
  return SpectralCoefficients::dense(grid, std::move(coeffs));
}

SampledFunction synthesize(const SpectralCoefficients& coeffs) {
  const GridSpec& grid = coeffs.grid();
  const std::int64_t n = grid.n;
  std::vector<Complex> buffer(static_cast<std::size_t>(n), Complex{0.0, 0.0});
  coeffs.forEachNonzero([&](std::int64_t m, Complex v) {
    const std::int64_t bin = (m % n + n) % n;
    buffer[static_cast<std::size_t>(bin)] = v;
  });
  detail::dftBackwardInPlace(buffer);
  return SampledFunction(grid, std::move(buffer),
                         std::make_shared<const SpectralCoefficients>(coeffs));
}

double lebesgueNorm(const SampledFunction& f, double p) {
  if (std::isinf(p) && p > 0) {
    double maxAbs = 0.0;
    for (const Complex& v : f.values()) maxAbs = std::max(maxAbs, std::abs(v));
    return maxAbs;
  }
  require(p > 1.0 && std::isfinite(p), ErrorCode::InvalidExponent,
          "Lebesgue exponent must satisfy p > 1 (or p = infinity)");
  double sum = 0.0;
  for (const Complex& v : f.values()) sum += std::pow(std::abs(v), p);
  return std::pow(f.grid().spacing() * sum, 1.0 / p);
}

namespace {

SampledFunction upsampleTwice(const SampledFunction& f) {
  const GridSpec fine(f.grid().n * 2, f.grid().scaleL);
  SpectralCoefficients coeffs = SpectralCoefficients::zero(fine);
  f.spectrum().forEachNonzero([&](std::int64_t m, Complex v) { coeffs.set(m, v); });
  return synthesize(coeffs);
}

}  // namespace

SampledFunction pointwiseProduct(const SampledFunction& f, const SampledFunction& g,
                                 AliasingPolicy policy) {
  require(f.grid() == g.grid(), ErrorCode::GridMismatch,
          "pointwise product requires matching grids");
  const bool boundsKnown = f.hasKnownSpectrum() && g.hasKnownSpectrum();
  if (boundsKnown) {
    const auto bf = f.spectrum().supportBounds();
    const auto bg = g.spectrum().supportBounds();
    if (bf && bg) {
      const std::int64_t lo = bf->first + bg->first;
      const std::int64_t hi = bf->second + bg->second;
      if (lo < f.grid().minIndex() || hi > f.grid().maxIndex()) {
        if (policy == AliasingPolicy::Raise) {
          throw Error(ErrorCode::AliasingRisk,
                      "product support [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] exceeds the lattice; upsample or choose smaller bands");
        }
        return pointwiseProduct(upsampleTwice(f), upsampleTwice(g), AliasingPolicy::Raise);
      }
    }
  }
  std::vector<Complex> values(static_cast<std::size_t>(f.grid().n));
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f.values()[i] * g.values()[i];
  return SampledFunction(f.grid(), std::move(values));
}

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::AliasingRisk: return "AliasingRisk";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NyquistViolation: return "NyquistViolation";
    case ErrorCode::BadCutoffSpec: return "BadCutoffSpec";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::StrategyMismatch: return "StrategyMismatch";
    case ErrorCode::NotMultiplier: return "NotMultiplier";
    case ErrorCode::CoverageGap: return "CoverageGap";
    case ErrorCode::TruncationTooAggressive: return "TruncationTooAggressive";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace bilinop
