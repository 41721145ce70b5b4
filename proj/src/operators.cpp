#include "bilinop/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.hpp"

namespace bilinop {

ExponentTriple::ExponentTriple(double p_, double q_, double t_) : p(p_), q(q_), t(t_) {
  require(p > 1.0 && q > 1.0 && t > 1.0, ErrorCode::InvalidExponent,
          "exponents must lie in (1, infinity)");
  require(std::abs(1.0 / p + 1.0 / q - 1.0 / t) <= 1e-12, ErrorCode::InvalidExponent,
          "exponents must satisfy 1/p + 1/q = 1/t");
}

namespace {

struct SparseEntries {
  std::vector<std::pair<std::int64_t, Complex>> entries;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  double maxAbs = 0.0;
};

// numerically significant entries; analysis roundoff stays below 1e-14 * max
SparseEntries significantEntries(const SpectralCoefficients& c, double relTol = 1e-14) {
  SparseEntries s;
  double maxAbs = 0.0;
  c.forEachNonzero([&](std::int64_t, Complex v) { maxAbs = std::max(maxAbs, std::abs(v)); });
  const double cutoff = relTol * maxAbs;
  bool first = true;
  c.forEachNonzero([&](std::int64_t m, Complex v) {
    if (std::abs(v) <= cutoff) return;
    s.entries.emplace_back(m, v);
    if (first) {
      s.lo = s.hi = m;
      first = false;
    } else {
      s.lo = std::min(s.lo, m);
      s.hi = std::max(s.hi, m);
    }
  });
  s.maxAbs = maxAbs;
  return s;
}

using MultiplierFn = std::function<Complex(double, double)>;

SpectralCoefficients accumulateSparse(const MultiplierFn& sigma, const GridSpec& grid,
                                      const SparseEntries& cf, const SparseEntries& cg,
                                      AliasingPolicy policy) {
  std::map<std::int64_t, Complex> out;
  const double dropTol = 1e-13 * cf.maxAbs * cg.maxAbs;
  for (const auto& [mf, vf] : cf.entries) {
    const double xi = grid.frequency(mf);
    for (const auto& [mg, vg] : cg.entries) {
      const Complex term = sigma(xi, grid.frequency(mg)) * vf * vg;
      if (term == Complex{0.0, 0.0}) continue;
      const std::int64_t w = mf + mg;
      if (!grid.containsIndex(w)) {
        if (std::abs(term) <= dropTol) continue;
        if (policy == AliasingPolicy::Raise) {
          throw Error(ErrorCode::AliasingRisk,
                      "output frequency index " + std::to_string(w) + " exceeds the lattice");
        }
        continue;
      }
      out[w] += term;
    }
  }
  return SpectralCoefficients::sparse(grid, std::move(out));
}

SpectralCoefficients accumulateDense(const MultiplierFn& sigma, const GridSpec& grid,
                                     const SpectralCoefficients& cf,
                                     const SpectralCoefficients& cg, AliasingPolicy policy) {
  const SpectralCoefficients df = cf.toDense();
  const SpectralCoefficients dg = cg.toDense();
  const SparseEntries sf = significantEntries(cf);
  const SparseEntries sg = significantEntries(cg);
  if (sf.entries.empty() || sg.entries.empty()) return SpectralCoefficients::zero(grid);
  if (policy == AliasingPolicy::Raise && (sf.lo + sg.lo < grid.minIndex() ||
                 sf.hi + sg.hi > grid.maxIndex())) {
    // only significant pairs can trigger this; junk-level mass is dropped
    const double dropTol = 1e-13 * sf.maxAbs * sg.maxAbs;
    for (const auto& [mf, vf] : sf.entries) {
      for (const auto& [mg, vg] : sg.entries) {
        if (grid.containsIndex(mf + mg)) continue;
        if (std::abs(vf) * std::abs(vg) > dropTol) {
          throw Error(ErrorCode::AliasingRisk,
                      "product support exceeds the lattice; reduce bands or upsample");
        }
      }
    }
  }
  const std::int64_t n = grid.n;
  std::vector<Complex> out(static_cast<std::size_t>(n), Complex{0.0, 0.0});
  detail::parallelFor(static_cast<std::size_t>(n), [&](std::size_t slot) {
    const std::int64_t w = static_cast<std::int64_t>(slot) - n / 2;
    if (w < sf.lo + sg.lo || w > sf.hi + sg.hi) return;
    const std::int64_t xiLo = std::max(sf.lo, w - sg.hi);
    const std::int64_t xiHi = std::min(sf.hi, w - sg.lo);
    Complex acc{0.0, 0.0};
    for (std::int64_t mf = xiLo; mf <= xiHi; ++mf) {
      const Complex vf = df.at(mf);
      if (vf == Complex{0.0, 0.0}) continue;
      const Complex vg = dg.at(w - mf);
      if (vg == Complex{0.0, 0.0}) continue;
      acc += sigma(grid.frequency(mf), grid.frequency(w - mf)) * vf * vg;
    }
    out[slot] = acc;
  });
  return SpectralCoefficients::dense(grid, std::move(out));
}

bool preferSparse(const SpectralCoefficients& cf, const SpectralCoefficients& cg) {
  const std::int64_t n = cf.grid().n;
  const std::int64_t nnzF = cf.nnz();
  const std::int64_t nnzG = cg.nnz();
  return nnzF * nnzG < 64 * n;
}

SpectralCoefficients accumulate(const MultiplierFn& sigma, const GridSpec& grid,
                                const SpectralCoefficients& cf, const SpectralCoefficients& cg,
                                EvalStrategy strategy, AliasingPolicy policy) {
  if (strategy == EvalStrategy::Auto) {
    strategy = preferSparse(cf, cg) ? EvalStrategy::SparseAccumulate
                                    : EvalStrategy::DenseAccumulate;
  }
  if (strategy == EvalStrategy::SparseAccumulate) {
    return accumulateSparse(sigma, grid, significantEntries(cf), significantEntries(cg), policy);
  }
  return accumulateDense(sigma, grid, cf, cg, policy);
}

SpectralCoefficients shiftSpectrum(const SpectralCoefficients& c, std::int64_t shift,
                                   AliasingPolicy policy) {
  SpectralCoefficients out = SpectralCoefficients::zero(c.grid());
  const GridSpec& grid = c.grid();
  c.forEachNonzero([&](std::int64_t m, Complex v) {
    const std::int64_t w = m + shift;
    if (!grid.containsIndex(w)) {
      if (policy == AliasingPolicy::Raise) {
        throw Error(ErrorCode::AliasingRisk,
                    "modulated output index " + std::to_string(w) + " exceeds the lattice");
      }
      return;
    }
    out.add(w, v);
  });
  return out;
}

bool allModulation(std::span<const SeparableTerm> terms) {
  return std::all_of(terms.begin(), terms.end(),
                     [](const SeparableTerm& t) { return t.modulationIndex.has_value(); });
}

SampledFunction perPointQuadrature(const Symbol& sigma, const GridSpec& grid,
                                   const SpectralCoefficients& cf,
                                   const SpectralCoefficients& cg) {
  const SparseEntries sf = significantEntries(cf);
  const SparseEntries sg = significantEntries(cg);
  const std::int64_t n = grid.n;
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < n; ++r) {
    const double phase = kTwoPi * static_cast<double>(r) / static_cast<double>(n);
    roots[static_cast<std::size_t>(r)] = {std::cos(phase), std::sin(phase)};
  }
  struct Pair {
    double xi, eta;
    Complex weight;
    std::int64_t sum;
  };
  std::vector<Pair> pairs;
  pairs.reserve(sf.entries.size() * sg.entries.size());
  for (const auto& [mf, vf] : sf.entries) {
    for (const auto& [mg, vg] : sg.entries) {
      pairs.push_back({grid.frequency(mf), grid.frequency(mg), vf * vg,
                       ((mf + mg) % n + n) % n});
    }
  }
  std::vector<Complex> out(static_cast<std::size_t>(n));
  detail::parallelFor(static_cast<std::size_t>(n), [&](std::size_t i) {
    const double x = grid.point(static_cast<std::int64_t>(i));
    Complex acc{0.0, 0.0};
    for (const Pair& p : pairs) {
      acc += sigma.eval(x, p.xi, p.eta) * p.weight *
             roots[static_cast<std::size_t>((static_cast<std::int64_t>(i) * p.sum) % n)];
    }
    out[i] = acc;
  });
  return SampledFunction(grid, std::move(out));
}

}  // namespace

SpectralCoefficients applyBilinearSpectral(const Symbol& sigma, const SpectralCoefficients& cf,
                                           const SpectralCoefficients& cg,
                                           const ApplyOptions& options) {
  require(cf.grid() == cg.grid(), ErrorCode::GridMismatch,
          "bilinear inputs must share a grid");
  const GridSpec& grid = cf.grid();
  const auto terms = sigma.separableTerms();

  if (sigma.xIndependent() &&
      (options.strategy == EvalStrategy::Auto ||
       options.strategy == EvalStrategy::SparseAccumulate ||
       options.strategy == EvalStrategy::DenseAccumulate)) {
    auto fn = [&sigma](double xi, double eta) { return sigma.evalMultiplier(xi, eta); };
    return accumulate(fn, grid, cf, cg, options.strategy, options.aliasing);
  }

  if (!terms.empty() && allModulation(terms) &&
      options.strategy != EvalStrategy::PerPointQuadrature &&
      options.strategy != EvalStrategy::DiagonalConvolution) {
    SpectralCoefficients out = SpectralCoefficients::zero(grid);
    for (const auto& term : terms) {
      const SpectralCoefficients u =
          accumulate(term.multiplier, grid, cf, cg, options.strategy, options.aliasing);
      shiftSpectrum(u, *term.modulationIndex, options.aliasing)
          .forEachNonzero([&](std::int64_t m, Complex v) { out.add(m, v); });
    }
    return out;
  }

  // remaining cases run through the sample-level path
  return analyze(applyBilinear(sigma, synthesize(cf), synthesize(cg), options));
}

SampledFunction applyBilinear(const Symbol& sigma, const SampledFunction& f,
                              const SampledFunction& g, const ApplyOptions& options) {
  require(f.grid() == g.grid(), ErrorCode::GridMismatch, "bilinear inputs must share a grid");
  const GridSpec& grid = f.grid();
  const auto terms = sigma.separableTerms();
  EvalStrategy strategy = options.strategy;

  if (strategy == EvalStrategy::DiagonalConvolution) {
    require(sigma.kind() == Symbol::Kind::DiagonalKernel, ErrorCode::StrategyMismatch,
            "DiagonalConvolution requires a DiagonalKernel symbol");
    return applyDiagonalConvolution(sigma, f, g, options.truncationRadius,
                                    options.truncationTolerance);
  }

  if (strategy == EvalStrategy::Auto) {
    if (sigma.xIndependent()) {
      strategy = EvalStrategy::SparseAccumulate;  // accumulate() re-resolves by density
    } else if (!terms.empty()) {
      strategy = EvalStrategy::SparseAccumulate;
    } else {
      strategy = EvalStrategy::PerPointQuadrature;
    }
  }

  if (strategy == EvalStrategy::PerPointQuadrature) {
    return perPointQuadrature(sigma, grid, f.spectrum(), g.spectrum());
  }

  require(sigma.xIndependent() || !terms.empty(), ErrorCode::StrategyMismatch,
          "accumulation strategies need an x-independent or separable symbol");

  const EvalStrategy accStrategy =
      options.strategy == EvalStrategy::Auto ? EvalStrategy::Auto : strategy;

  if (sigma.xIndependent()) {
    auto fn = [&sigma](double xi, double eta) { return sigma.evalMultiplier(xi, eta); };
    return synthesize(
        accumulate(fn, grid, f.spectrum(), g.spectrum(), accStrategy, options.aliasing));
  }

  // structured path: per-term multiplier accumulation, x-profile folded in after
  const SpectralCoefficients cf = f.spectrum();
  const SpectralCoefficients cg = g.spectrum();
  if (allModulation(terms)) {
    SpectralCoefficients out = SpectralCoefficients::zero(grid);
    for (const auto& term : terms) {
      const SpectralCoefficients u =
          accumulate(term.multiplier, grid, cf, cg, accStrategy, options.aliasing);
      shiftSpectrum(u, *term.modulationIndex, options.aliasing)
          .forEachNonzero([&](std::int64_t m, Complex v) { out.add(m, v); });
    }
    return synthesize(out);
  }

  std::vector<Complex> acc(static_cast<std::size_t>(grid.n), Complex{0.0, 0.0});
  for (const auto& term : terms) {
    const SpectralCoefficients u =
        accumulate(term.multiplier, grid, cf, cg, accStrategy, options.aliasing);
    if (term.modulationIndex) {
      const SampledFunction piece =
          synthesize(shiftSpectrum(u, *term.modulationIndex, options.aliasing));
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += piece.values()[i];
    } else {
      require(static_cast<std::int64_t>(term.xSamples.size()) == grid.n,
              ErrorCode::GridMismatch, "structured symbol built for a different grid");
      const SampledFunction piece = synthesize(u);
      for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] += term.xSamples[i] * piece.values()[i];
    }
  }
  return SampledFunction(grid, std::move(acc));
}

SampledFunction applyDiagonalConvolution(const Symbol& sigma, const SampledFunction& f,
                                         const SampledFunction& g,
                                         std::optional<std::int64_t> truncationRadius,
                                         double truncationTolerance) {
  require(sigma.kind() == Symbol::Kind::DiagonalKernel, ErrorCode::StrategyMismatch,
          "DiagonalConvolution requires a DiagonalKernel symbol");
  require(f.grid() == g.grid(), ErrorCode::GridMismatch, "bilinear inputs must share a grid");
  const GridSpec& grid = f.grid();
  require(sigma.diagonalSupportRadius() < grid.nyquist(), ErrorCode::Precondition,
          "kernel support must stay below the Nyquist frequency");

  const std::int64_t n = grid.n;
  const double h = grid.spacing();
  const auto& profile = sigma.diagonalProfile();

  // dense inverse transform of the kernel samples
  std::vector<Complex> coeffs(static_cast<std::size_t>(n));
  for (std::int64_t m = grid.minIndex(); m <= grid.maxIndex(); ++m) {
    coeffs[static_cast<std::size_t>(m + n / 2)] = profile(grid.frequency(m)) / grid.period();
  }
  const SampledFunction mhat = synthesize(SpectralCoefficients::dense(grid, std::move(coeffs)));

  // L1 mass by distance from the origin
  std::vector<double> massAt(static_cast<std::size_t>(n / 2 + 1), 0.0);
  double total = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t dist = std::min(i, n - i);
    const double a = h * std::abs(mhat.values()[static_cast<std::size_t>(i)]);
    massAt[static_cast<std::size_t>(dist)] += a;
    total += a;
  }
  std::int64_t radius;
  if (truncationRadius) {
    radius = std::min<std::int64_t>(*truncationRadius, n / 2);
    double tail = 0.0;
    for (std::int64_t d = radius + 1; d <= n / 2; ++d) tail += massAt[static_cast<std::size_t>(d)];
    require(tail <= truncationTolerance * total, ErrorCode::TruncationTooAggressive,
            "excluded tail mass " + std::to_string(tail) + " exceeds tolerance");
  } else {
    double tail = 0.0;
    radius = n / 2;
    for (std::int64_t d = n / 2; d >= 1; --d) {
      tail += massAt[static_cast<std::size_t>(d)];
      if (tail > truncationTolerance * total) break;
      radius = d - 1;
    }
  }

  std::vector<Complex> out(static_cast<std::size_t>(n));
  const auto mh = mhat.values();
  const auto fv = f.values();
  const auto gv = g.values();
  detail::parallelFor(static_cast<std::size_t>(n), [&](std::size_t i) {
    const auto ni = static_cast<std::int64_t>(i);
    Complex acc{0.0, 0.0};
    for (std::int64_t d = -radius; d <= radius; ++d) {
      const std::int64_t yi = ((d % n) + n) % n;
      const std::int64_t fi = (((ni - d) % n) + n) % n;
      const std::int64_t gi = (((ni + d) % n) + n) % n;
      acc += mh[static_cast<std::size_t>(yi)] * fv[static_cast<std::size_t>(fi)] *
             gv[static_cast<std::size_t>(gi)];
    }
    out[i] = h * acc;
  });
  return SampledFunction(grid, std::move(out));
}

double sobolevNorm(const SampledFunction& f, const LPFrame& frame, double s, double p) {
  require(f.grid() == frame.grid(), ErrorCode::GridMismatch,
          "function and frame live on different grids");
  require(s >= 0.0, ErrorCode::InvalidArgument, "smoothness must satisfy s >= 0");
  require(p > 1.0 && std::isfinite(p), ErrorCode::InvalidExponent,
          "Sobolev integrability exponent must lie in (1, infinity)");

  const SpectralCoefficients c = f.spectrum();
  const SampledFunction low =
      synthesize(bandProject(c, [&frame](double xi) { return frame.phiHat(xi); }));

  std::vector<double> sq(static_cast<std::size_t>(f.grid().n), 0.0);
  for (int k = 0; k <= frame.kMax(); ++k) {
    const SpectralCoefficients ck =
        bandProject(c, [&frame, k](double xi) { return frame.psiHatLevel(k, xi); });
    if (!ck.supportBounds()) continue;
    const SampledFunction piece = synthesize(ck);
    const double weight = std::pow(4.0, static_cast<double>(k) * s);
    for (std::size_t i = 0; i < sq.size(); ++i) {
      sq[i] += weight * std::norm(piece.values()[i]);
    }
  }
  std::vector<Complex> g(sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i) g[i] = std::sqrt(sq[i]);
  const SampledFunction square(f.grid(), std::move(g));
  return lebesgueNorm(low, p) + lebesgueNorm(square, p);
}

double sobolevNorm(const SampledFunction& f, const LPFrame& frame, const SobolevParams& params) {
  return sobolevNorm(f, frame, params.s, params.p);
}

ParaproductDetail classicalParaproductDetailed(const SampledFunction& b,
                                               const SampledFunction& f, const LPFrame& frame) {
  require(b.grid() == f.grid(), ErrorCode::GridMismatch, "paraproduct inputs must share a grid");
  require(b.grid() == frame.grid(), ErrorCode::GridMismatch,
          "inputs and frame live on different grids");
  const GridSpec& grid = b.grid();
  const double nyq = grid.nyquist();

  // band_k(b) has symbol PsiHat(2^k xi), support 2^-k [1/2, 2]; the paired
  // low-pass has symbol PhiHat(2^{k+2} xi). Keep levels whose Minkowski sum
  // stays on the lattice.
  int kLow = static_cast<int>(std::floor(std::log2(2.25 / nyq))) + 1;
  while (std::ldexp(1.0, -kLow) * 2.25 >= nyq) ++kLow;
  const int kHigh = static_cast<int>(std::ceil(std::log2(2.0 * grid.scaleL)));

  const SpectralCoefficients cb = b.spectrum();
  const SpectralCoefficients cfc = f.spectrum();

  ParaproductDetail detail;
  detail.kLow = kLow;
  detail.kHigh = kHigh;

  std::vector<Complex> acc(static_cast<std::size_t>(grid.n), Complex{0.0, 0.0});
  for (int k = kLow; k <= kHigh; ++k) {
    const double scale = std::ldexp(1.0, k);
    const SpectralCoefficients bandB =
        bandProject(cb, [&frame, scale](double xi) { return frame.psiHat(scale * xi); });
    if (!bandB.supportBounds()) continue;
    const SpectralCoefficients lowF =
        bandProject(cfc, [&frame, scale](double xi) { return frame.phiHat(4.0 * scale * xi); });
    if (!lowF.supportBounds()) continue;
    const SampledFunction pb = synthesize(bandB);
    const SampledFunction pf = synthesize(lowF);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += pf.values()[i] * pb.values()[i];
  }
  detail.result = SampledFunction(grid, std::move(acc));

  double truncated = 0.0;
  cb.forEachNonzero([&](std::int64_t m, Complex v) {
    if (m == 0) return;  // PsiHat(0) = 0 at every level; not a truncation loss
    const double xi = grid.frequency(m);
    double coveredSum = 0.0;
    for (int k = kLow; k <= kHigh; ++k) coveredSum += frame.psiHat(std::ldexp(xi, k));
    truncated += std::abs(v) * std::max(0.0, 1.0 - coveredSum);
  });
  detail.truncatedMassB = truncated;
  return detail;
}

SampledFunction classicalParaproduct(const SampledFunction& b, const SampledFunction& f,
                                     const LPFrame& frame) {
  return classicalParaproductDetailed(b, f, frame).result;
}

Symbol improvedParaproductSymbol(const ThetaProfile& theta) {
  return Symbol::multiplier([theta](double xi, double eta) -> Complex {
    return {theta(xi - eta) * theta(xi + eta) + theta(eta - xi) * theta(-xi - eta), 0.0};
  });
}

SampledFunction improvedParaproduct(const SampledFunction& b, const SampledFunction& f,
                                    const ThetaProfile& theta) {
  require(b.grid() == f.grid(), ErrorCode::GridMismatch, "paraproduct inputs must share a grid");
  return applyBilinear(improvedParaproductSymbol(theta), b, f);
}

Symbol multiplicationDefectSymbol(const ThetaProfile& theta) {
  // 1 - sigma_pi(xi, eta) - sigma_pi(eta, xi), written out per factor
  return Symbol::multiplier([theta](double xi, double eta) -> Complex {
    const double s1 = theta(xi - eta) * theta(xi + eta) + theta(eta - xi) * theta(-xi - eta);
    const double s2 = theta(eta - xi) * theta(eta + xi) + theta(xi - eta) * theta(-eta - xi);
    return {1.0 - s1 - s2, 0.0};
  });
}

SampledFunction multiplicationDefect(const SampledFunction& f, const SampledFunction& g,
                                     const ThetaProfile& theta) {
  const SampledFunction fg = pointwiseProduct(f, g);
  const SampledFunction pf = improvedParaproduct(f, g, theta);
  const SampledFunction pg = improvedParaproduct(g, f, theta);
  std::vector<Complex> values(static_cast<std::size_t>(f.grid().n));
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = fg.values()[i] - pf.values()[i] - pg.values()[i];
  }
  return SampledFunction(f.grid(), std::move(values));
}

Complex pairing(const SampledFunction& u, const SampledFunction& v) {
  require(u.grid() == v.grid(), ErrorCode::GridMismatch, "pairing requires matching grids");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < u.values().size(); ++i) acc += u.values()[i] * v.values()[i];
  return u.grid().spacing() * acc;
}

}  // namespace bilinop
