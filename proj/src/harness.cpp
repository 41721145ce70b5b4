#include "bilinop/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "bilinop/io.hpp"
#include "bilinop/operators.hpp"
#include "bilinop/rng.hpp"
#include "bilinop/version.hpp"

namespace bilinop::harness {

namespace {

using Clock = std::chrono::steady_clock;

double elapsedMs(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::int64_t nextPowerOfTwo(double x) {
  std::int64_t n = 8;
  while (static_cast<double>(n) <= x) n <<= 1;
  return n;
}

double fitLogSlope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log2(xs[i]);
    const double ly = std::log2(std::max(ys[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

EvalStrategy strategyFromName(const std::string& name) {
  if (name == "auto") return EvalStrategy::Auto;
  if (name == "dense") return EvalStrategy::DenseAccumulate;
  if (name == "sparse") return EvalStrategy::SparseAccumulate;
  if (name == "convolution") return EvalStrategy::DiagonalConvolution;
  if (name == "quadrature") return EvalStrategy::PerPointQuadrature;
  throw Error(ErrorCode::InvalidArgument, "unknown strategy \"" + name + "\"");
}

/// psi1-style low band: 1 on [0, 2/9], ramp to 0 at 1/3. Works for every
/// scale used here (at L = 6 the lattice sees {1, 1, 0}; at L = 12 it also
/// picks up a ramp value).
std::function<double(double)> lowBandCutoff(const BumpProfile& profile) {
  return rampDownCutoff(2.0 / 9.0, 1.0 / 3.0, profile);
}

SpectralCoefficients latticeSample(const GridSpec& grid,
                                   const std::function<double(double)>& profileHat) {
  std::map<std::int64_t, Complex> entries;
  for (std::int64_t m = grid.minIndex(); m <= grid.maxIndex(); ++m) {
    const double v = profileHat(grid.frequency(m));
    if (v != 0.0) entries[m] = Complex{v, 0.0};
  }
  return SpectralCoefficients::sparse(grid, std::move(entries));
}

/// Complex-Gaussian coefficients on [-bandTop, bandTop] \ {0} with either
/// flat or Sobolev-critical (1+|xi|)^{-(s+1/2)} weights.
SpectralCoefficients randomFullSpectrum(const GridSpec& grid, std::int64_t bandTopIndex,
                                        double s, bool critical, TrialRng& rng) {
  std::map<std::int64_t, Complex> entries;
  for (std::int64_t m = -bandTopIndex; m <= bandTopIndex; ++m) {
    if (m == 0) continue;
    const double w = critical ? std::pow(1.0 + std::abs(grid.frequency(m)), -(s + 0.5)) : 1.0;
    entries[m] = w * rng.complexNormal();
  }
  return SpectralCoefficients::sparse(grid, std::move(entries));
}

SpectralCoefficients randomBand(const GridSpec& grid, std::int64_t loIndex,
                                std::int64_t hiIndex, TrialRng& rng) {
  std::map<std::int64_t, Complex> entries;
  for (std::int64_t m = loIndex; m <= hiIndex; ++m) entries[m] = rng.complexNormal();
  return SpectralCoefficients::sparse(grid, std::move(entries));
}

SampledFunction scaleFunction(const SampledFunction& f, double factor) {
  std::vector<Complex> v(f.values().begin(), f.values().end());
  for (auto& x : v) x *= factor;
  if (f.hasKnownSpectrum()) {
    SpectralCoefficients c = f.spectrum();
    SpectralCoefficients scaled = SpectralCoefficients::zero(c.grid());
    c.forEachNonzero([&](std::int64_t m, Complex val) { scaled.set(m, factor * val); });
    return synthesize(scaled);
  }
  return SampledFunction(f.grid(), std::move(v));
}

Json baseReport(const std::string& name, const Json& resolvedConfig) {
  Json report;
  report["experiment"] = name;
  report["version"] = kVersion;
  report["config"] = resolvedConfig;
  report["rows"] = Json::array();
  report["aggregate"] = Json::object();
  report["timing"] = Json::object();
  return report;
}

double parsevalNormL2(const SpectralCoefficients& c) {
  double sum = 0.0;
  c.forEachNonzero([&](std::int64_t, Complex v) { sum += std::norm(v); });
  return std::sqrt(c.grid().period() * sum);
}

}  // namespace

Json runLpCheck(const Json& config) {
  const auto t0 = Clock::now();
  Json cfg;
  cfg["n"] = config.value("n", std::int64_t{4096});
  cfg["scaleL"] = config.value("scaleL", 12.0);
  cfg["order"] = config.value("order", 3);

  const GridSpec grid(cfg["n"].get<std::int64_t>(), cfg["scaleL"].get<double>());
  const LPFrame frame = buildLPFrame(grid, BumpProfile(cfg["order"].get<int>()));

  const double top = std::ldexp(1.0, frame.kMax());
  double maxErr = 0.0;
  std::int64_t violations = 0;
  for (std::int64_t m = grid.minIndex(); m <= grid.maxIndex(); ++m) {
    const double xi = grid.frequency(m);
    if (std::abs(xi) <= top) {
      maxErr = std::max(maxErr, std::abs(frame.partitionValue(xi) - 1.0));
    }
    if (frame.phiHat(xi) != 0.0 && std::abs(xi) > 1.0) ++violations;
    for (int k = 0; k <= frame.kMax(); ++k) {
      const double scaled = std::abs(std::ldexp(xi, -k));
      if (frame.psiHatLevel(k, xi) != 0.0 && (scaled < 0.5 || scaled > 2.0)) ++violations;
    }
  }

  Json report = baseReport("lp-check", cfg);
  report["maxPartitionError"] = maxErr;
  report["kMax"] = frame.kMax();
  report["supportViolations"] = violations;
  report["rows"].push_back(Json{{"kMax", frame.kMax()},
                                {"maxPartitionError", maxErr},
                                {"supportViolations", violations}});
  report["timing"]["totalMs"] = elapsedMs(t0);
  return report;
}

namespace {

struct CounterexamplePieces {
  SpectralCoefficients psi1;
  SpectralCoefficients f;
  Complex coeffSum;
};

CounterexamplePieces buildCounterexampleInputs(const GridSpec& grid, const BumpProfile& profile,
                                               int jMin, int jMax,
                                               const std::vector<Complex>& coeffs) {
  CounterexamplePieces out{SpectralCoefficients::zero(grid), SpectralCoefficients::zero(grid),
                           Complex{0.0, 0.0}};
  out.psi1 = latticeSample(grid, lowBandCutoff(profile));
  require(out.psi1.nnz() >= 2, ErrorCode::Precondition,
          "low band [0, 1/3] must contain at least two lattice frequencies");
  SpectralCoefficients f = SpectralCoefficients::zero(grid);
  for (int j = jMin; j <= jMax; ++j) {
    const Complex a = coeffs[static_cast<std::size_t>(j - jMin)];
    if (a == Complex{0.0, 0.0}) continue;
    out.coeffSum += a;
    const double shiftF = std::ldexp(grid.scaleL, j);
    const auto shift = static_cast<std::int64_t>(std::llround(shiftF));
    require(std::abs(shiftF - static_cast<double>(shift)) < 1e-9, ErrorCode::Precondition,
            "modulation frequency 2^j must land on the lattice");
    out.psi1.forEachNonzero([&](std::int64_t m, Complex v) {
      require(grid.containsIndex(m + shift), ErrorCode::NyquistViolation,
              "shifted low band exceeds the lattice");
      f.add(m + shift, a * v);
    });
  }
  out.f = std::move(f);
  return out;
}

std::vector<Complex> coefficientPattern(const std::string& pattern,
                                        const std::vector<double>& custom, int jMin, int jMax) {
  std::vector<Complex> out;
  for (int j = jMin; j <= jMax; ++j) {
    const auto idx = static_cast<std::size_t>(j - jMin);
    if (pattern == "ones") {
      out.emplace_back(1.0, 0.0);
    } else if (pattern == "alternating") {
      out.emplace_back((j % 2 == 0) ? 1.0 : -1.0, 0.0);
    } else if (pattern == "single") {
      out.emplace_back(idx == 0 ? 1.0 : 0.0, 0.0);
    } else if (pattern == "custom") {
      require(idx < custom.size(), ErrorCode::InvalidArgument,
              "custom coefficient list shorter than the level range");
      out.emplace_back(custom[idx], 0.0);
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown coefficient pattern \"" + pattern + "\"");
    }
  }
  return out;
}

}  // namespace

Json runCounterexample(const Json& config) {
  const auto t0 = Clock::now();
  Json cfg;
  cfg["n"] = config.value("n", std::int64_t{32768});
  cfg["scaleL"] = config.value("scaleL", 12.0);
  cfg["order"] = config.value("order", 3);
  cfg["jMin"] = config.value("jMin", 4);
  cfg["jMax"] = config.value("jMax", 9);
  cfg["pattern"] = config.value("pattern", std::string("ones"));
  cfg["coefficients"] = config.value("coefficients", std::vector<double>{});
  cfg["strategy"] = config.value("strategy", std::string("sparse"));
  cfg["p"] = config.value("p", 4.0);
  cfg["q"] = config.value("q", 4.0);
  cfg["t"] = config.value("t", 2.0);
  cfg["seed"] = config.value("seed", std::uint64_t{12345});
  Json growthDefaults{{"enabled", true},
                      {"scaleL", 6.0},
                      {"termCounts", std::vector<int>{4, 8, 16}}};
  Json growthCfg = config.value("growth", Json::object());
  for (auto& [key, value] : growthDefaults.items()) {
    if (!growthCfg.contains(key)) growthCfg[key] = value;
  }
  cfg["growth"] = growthCfg;

  (void)ExponentTriple(cfg["p"].get<double>(), cfg["q"].get<double>(), cfg["t"].get<double>());

  const BumpProfile profile(cfg["order"].get<int>());
  const int jMin = cfg["jMin"].get<int>();
  const int jMax = cfg["jMax"].get<int>();
  const double p = cfg["p"].get<double>();
  const double q = cfg["q"].get<double>();
  const double t = cfg["t"].get<double>();
  const ApplyOptions applyOpts{strategyFromName(cfg["strategy"].get<std::string>()),
                               AliasingPolicy::Raise, std::nullopt, 1e-10};

  Json report = baseReport("counterexample", cfg);

  // exact identity on the pinned grid
  {
    const auto tId = Clock::now();
    const GridSpec grid(cfg["n"].get<std::int64_t>(), cfg["scaleL"].get<double>());
    const Symbol sigma =
        makeCounterexampleSymbol(grid, jMin, jMax, CounterexampleCutoff{.profile = profile});
    const auto coeffs = coefficientPattern(cfg["pattern"].get<std::string>(),
                                           cfg["coefficients"].get<std::vector<double>>(),
                                           jMin, jMax);
    const auto pieces = buildCounterexampleInputs(grid, profile, jMin, jMax, coeffs);
    const SampledFunction psi1 = synthesize(pieces.psi1);
    const SampledFunction f = synthesize(pieces.f);
    const SampledFunction out = applyBilinear(sigma, f, psi1, applyOpts);

    const SampledFunction psi1sq = pointwiseProduct(psi1, psi1);
    const SampledFunction expected = scaleFunction(psi1sq, pieces.coeffSum.real());
    std::vector<Complex> diff(out.values().begin(), out.values().end());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= expected.values()[i];
    const double diffNorm = lebesgueNorm(SampledFunction(grid, std::move(diff)), 2.0);
    const double refNorm = std::max(lebesgueNorm(expected, 2.0), lebesgueNorm(psi1sq, 2.0));
    const double relError = diffNorm / refNorm;

    const double ratio =
        lebesgueNorm(out, t) / (lebesgueNorm(f, p) * lebesgueNorm(psi1, q));

    report["identity"] = Json{{"n", grid.n},
                              {"scaleL", grid.scaleL},
                              {"jMax", jMax},
                              {"coefficientSum", pieces.coeffSum.real()},
                              {"relL2Error", relError},
                              {"ratio", ratio}};
    report["rows"].push_back(Json{{"study", "identity"},
                                  {"m", jMax - jMin + 1},
                                  {"jMax", jMax},
                                  {"n", grid.n},
                                  {"relL2Error", relError},
                                  {"ratio", ratio}});
    report["timing"]["identityMs"] = elapsedMs(tId);
  }

  // ratio growth in the term count, a_j = 1
  if (growthCfg["enabled"].get<bool>()) {
    const double growthL = growthCfg["scaleL"].get<double>();
    const auto termCounts = growthCfg["termCounts"].get<std::vector<int>>();
    std::vector<double> ms, ratios;
    for (int m : termCounts) {
      const auto tG = Clock::now();
      const int jTop = jMin + m - 1;
      const double needed = 2.0 * growthL * std::ldexp(5.0 / 3.0, jTop);
      const GridSpec grid(nextPowerOfTwo(needed), growthL);
      const Symbol sigma =
          makeCounterexampleSymbol(grid, jMin, jTop, CounterexampleCutoff{.profile = profile});
      const std::vector<Complex> ones(static_cast<std::size_t>(m), Complex{1.0, 0.0});
      const auto pieces = buildCounterexampleInputs(grid, profile, jMin, jTop, ones);

      const SpectralCoefficients outSpec =
          applyBilinearSpectral(sigma, pieces.f, pieces.psi1, applyOpts);

      // identity error via the L2 isometry: expected spectrum is the
      // autoconvolution of psi1's coefficients times the coefficient sum
      SpectralCoefficients expectedSpec = SpectralCoefficients::zero(grid);
      pieces.psi1.forEachNonzero([&](std::int64_t m1, Complex v1) {
        pieces.psi1.forEachNonzero([&](std::int64_t m2, Complex v2) {
          expectedSpec.add(m1 + m2, pieces.coeffSum * v1 * v2);
        });
      });
      SpectralCoefficients diffSpec = expectedSpec;
      outSpec.forEachNonzero([&](std::int64_t mm, Complex v) { diffSpec.add(mm, -v); });
      const double relError = parsevalNormL2(diffSpec) / parsevalNormL2(expectedSpec);

      double normF = 0.0, normPsi1 = 0.0, normOut = 0.0;
      {
        const SampledFunction f = synthesize(pieces.f);
        normF = lebesgueNorm(f, p);
      }
      {
        const SampledFunction psi1 = synthesize(pieces.psi1);
        normPsi1 = lebesgueNorm(psi1, q);
      }
      {
        const SampledFunction out = synthesize(outSpec);
        normOut = lebesgueNorm(out, t);
      }
      const double ratio = normOut / (normF * normPsi1);
      ms.push_back(static_cast<double>(m));
      ratios.push_back(ratio);
      report["rows"].push_back(Json{{"study", "growth"},
                                    {"m", m},
                                    {"jMax", jTop},
                                    {"n", grid.n},
                                    {"normOut", normOut},
                                    {"normF", normF},
                                    {"normPsi1", normPsi1},
                                    {"ratio", ratio},
                                    {"relL2Error", relError}});
      report["timing"]["growthM" + std::to_string(m) + "Ms"] = elapsedMs(tG);
    }
    Json agg;
    agg["growthExponent"] = fitLogSlope(ms, ratios);
    agg["ratioLastOverFirst"] = ratios.back() / ratios.front();
    agg["sqrtLawTarget"] = std::sqrt(ms.back() / ms.front());
    bool monotone = true;
    for (std::size_t i = 1; i < ratios.size(); ++i) monotone = monotone && ratios[i] > ratios[i - 1];
    agg["monotone"] = monotone;
    report["aggregate"]["growth"] = agg;
  }

  report["timing"]["totalMs"] = elapsedMs(t0);
  return report;
}

namespace {

Symbol probeSymbol(const std::string& kind, const GridSpec& grid, const LPFrame& frame,
                   const BumpProfile& profile) {
  if (kind == "identity") {
    return Symbol::multiplier([](double, double) { return Complex{1.0, 0.0}; });
  }
  if (kind == "reduced") {
    // m_j(y) = e^{-i y}: unit C^r bounds, maximally oscillatory x-profile
    std::vector<std::function<Complex(double)>> coeffs;
    for (int j = 0; j < frame.kMax(); ++j) {
      coeffs.emplace_back([](double y) { return Complex{std::cos(y), -std::sin(y)}; });
    }
    return makeReducedSymbol(coeffs, frame);
  }
  if (kind == "counterexample") {
    const int jMax =
        static_cast<int>(std::floor(std::log2(grid.nyquist() * 3.0 / 5.0))) - 1;
    return makeCounterexampleSymbol(grid, 4, jMax, CounterexampleCutoff{.profile = profile});
  }
  throw Error(ErrorCode::InvalidArgument, "unknown probe symbol \"" + kind + "\"");
}

}  // namespace

Json runNormRatioProbe(const Json& config) {
  const auto t0 = Clock::now();
  Json cfg;
  cfg["sizes"] = config.value("sizes", std::vector<std::int64_t>{4096, 8192, 16384});
  cfg["scaleL"] = config.value("scaleL", 1.0);
  cfg["order"] = config.value("order", 3);
  cfg["lambdas"] = config.value("lambdas", std::vector<double>{16, 32, 64, 128, 256, 512});
  cfg["trials"] = config.value("trials", 4);
  cfg["s"] = config.value("s", 1.0);
  cfg["p"] = config.value("p", 4.0);
  cfg["q"] = config.value("q", 4.0);
  cfg["t"] = config.value("t", 2.0);
  cfg["symbol"] = config.value("symbol", std::string("reduced"));
  cfg["spectralWeight"] = config.value("spectralWeight", std::string("critical"));
  cfg["seed"] = config.value("seed", std::uint64_t{12345});

  const double s = cfg["s"].get<double>();
  (void)ExponentTriple(cfg["p"].get<double>(), cfg["q"].get<double>(), cfg["t"].get<double>());
  const double p = cfg["p"].get<double>();
  const double q = cfg["q"].get<double>();
  const double t = cfg["t"].get<double>();
  const bool critical = cfg["spectralWeight"].get<std::string>() == "critical";
  const BumpProfile profile(cfg["order"].get<int>());
  const auto seed = cfg["seed"].get<std::uint64_t>();

  Json report = baseReport("norm-probe", cfg);
  std::map<double, double> maxPerLambda;

  std::uint64_t trialKey = 0;
  for (const auto& nTag : cfg["sizes"]) {
    const GridSpec grid(nTag.get<std::int64_t>(), cfg["scaleL"].get<double>());
    const LPFrame frame = buildLPFrame(grid, profile);
    const Symbol sigma = probeSymbol(cfg["symbol"].get<std::string>(), grid, frame, profile);
    for (const auto& lamTag : cfg["lambdas"]) {
      const double lambda = lamTag.get<double>();
      const auto bandTop = static_cast<std::int64_t>(std::floor(lambda * grid.scaleL));
      require(2.0 * lambda < grid.nyquist(), ErrorCode::NyquistViolation,
              "trial scale too close to the Nyquist frequency");
      for (int trial = 0; trial < cfg["trials"].get<int>(); ++trial) {
        TrialRng rng = TrialRng::forTrial(seed, trialKey++);
        SampledFunction f = synthesize(randomFullSpectrum(grid, bandTop, s, critical, rng));
        SampledFunction g = synthesize(randomFullSpectrum(grid, bandTop, s, critical, rng));
        const double preF = sobolevNorm(f, frame, s, p);
        const double preG = sobolevNorm(g, frame, s, q);
        f = scaleFunction(f, 1.0 / preF);
        g = scaleFunction(g, 1.0 / preG);
        const SampledFunction out = applyBilinear(sigma, f, g);
        const double outNorm = sobolevNorm(out, frame, s, t);
        const double ratio = outNorm;  // inputs are unit Sobolev norm
        auto [it, inserted] = maxPerLambda.try_emplace(lambda, ratio);
        if (!inserted) it->second = std::max(it->second, ratio);
        report["rows"].push_back(Json{{"n", grid.n},
                                      {"lambda", lambda},
                                      {"trial", trial},
                                      {"sobolevF", 1.0},
                                      {"sobolevG", 1.0},
                                      {"lebesgueF", lebesgueNorm(f, p)},
                                      {"lebesgueG", lebesgueNorm(g, q)},
                                      {"outputNorm", outNorm},
                                      {"ratio", ratio}});
      }
    }
  }

  std::vector<double> lambdas, maxima;
  for (const auto& [lam, r] : maxPerLambda) {
    lambdas.push_back(lam);
    maxima.push_back(r);
  }
  const double lo = *std::min_element(maxima.begin(), maxima.end());
  const double hi = *std::max_element(maxima.begin(), maxima.end());
  Json agg;
  agg["maxRatio"] = hi;
  agg["maxOverMinAcrossScales"] = hi / lo;
  agg["ratioVsScaleSlope"] = fitLogSlope(lambdas, maxima);
  agg["bounded"] = (hi / lo) <= 4.0;
  report["aggregate"] = agg;
  report["timing"]["totalMs"] = elapsedMs(t0);
  return report;
}

Json runParaproductStudy(const Json& config) {
  const auto t0 = Clock::now();
  Json cfg;
  cfg["n"] = config.value("n", std::int64_t{16384});
  cfg["scaleL"] = config.value("scaleL", 1.0);
  cfg["order"] = config.value("order", 3);
  cfg["s"] = config.value("s", 1.0);
  cfg["t"] = config.value("t", 2.0);
  cfg["epsilon"] = config.value("epsilon", 0.1);
  cfg["lambdas"] = config.value("lambdas", std::vector<double>{32, 64, 128, 256, 512, 1024});
  cfg["trials"] = config.value("trials", 3);
  cfg["seed"] = config.value("seed", std::uint64_t{12345});
  cfg["normalization"] = config.value("normalization", std::string("sobolev"));

  const double s = cfg["s"].get<double>();
  const double t = cfg["t"].get<double>();
  const double epsilon = cfg["epsilon"].get<double>();
  require(s >= 1.0 / t, ErrorCode::Precondition,
          "defect study needs s >= 1/t");
  const double p = 2.0 * t;  // p = q = 2t pairs with t under the Holder relation
  const double q = 2.0 * t;

  const GridSpec grid(cfg["n"].get<std::int64_t>(), cfg["scaleL"].get<double>());
  const BumpProfile profile(cfg["order"].get<int>());
  const LPFrame frame = buildLPFrame(grid, profile);
  const ThetaProfile theta = buildTheta(profile);
  const auto seed = cfg["seed"].get<std::uint64_t>();
  const bool sobolevNormalized = cfg["normalization"].get<std::string>() == "sobolev";
  const int trials = cfg["trials"].get<int>();

  Json report = baseReport("paraproduct", cfg);

  std::map<double, std::vector<double>> dNorms, fgNorms, classicalNorms;
  std::uint64_t trialKey = 0;

  for (const auto& lamTag : cfg["lambdas"]) {
    const double lambda = lamTag.get<double>();
    const auto bandLo = static_cast<std::int64_t>(std::floor(lambda * grid.scaleL));
    const auto bandHi = static_cast<std::int64_t>(std::floor(2.0 * lambda * grid.scaleL)) - 1;
    require(4.0 * lambda < grid.nyquist(), ErrorCode::NyquistViolation,
            "defect study scale too close to the Nyquist frequency");

    for (int trial = 0; trial < trials; ++trial) {
      TrialRng rng = TrialRng::forTrial(seed, trialKey++);

      // (a) classical paramultiplication against ||b||_inf
      {
        SampledFunction b = synthesize(randomFullSpectrum(grid, bandHi, s, false, rng));
        b = scaleFunction(b, 1.0 / lebesgueNorm(b, std::numeric_limits<double>::infinity()));
        SampledFunction f = synthesize(randomFullSpectrum(grid, bandHi, s, true, rng));
        f = scaleFunction(f, 1.0 / sobolevNorm(f, frame, s, p));
        const SampledFunction pb = classicalParaproduct(b, f, frame);
        const double ratio = sobolevNorm(pb, frame, s, p);
        report["rows"].push_back(Json{{"study", "classical"},
                                      {"lambda", lambda},
                                      {"trial", trial},
                                      {"bInfNorm", 1.0},
                                      {"outputNorm", ratio},
                                      {"ratio", ratio}});
      }

      // (b) improved paramultiplication against ||b||_{W^{eps,p}} ||f||_{W^{s,q}}
      {
        SampledFunction b = synthesize(randomFullSpectrum(grid, bandHi, epsilon, true, rng));
        b = scaleFunction(b, 1.0 / sobolevNorm(b, frame, epsilon, p));
        SampledFunction f = synthesize(randomFullSpectrum(grid, bandHi, s, true, rng));
        f = scaleFunction(f, 1.0 / sobolevNorm(f, frame, s, q));
        const SampledFunction pb = improvedParaproduct(b, f, theta);
        const double ratio = sobolevNorm(pb, frame, s, t);
        report["rows"].push_back(Json{{"study", "improved"},
                                      {"lambda", lambda},
                                      {"trial", trial},
                                      {"epsilon", epsilon},
                                      {"outputNorm", ratio},
                                      {"ratio", ratio}});
      }

      // (c) defect gain on single-scale pairs
      {
        SampledFunction f = synthesize(randomBand(grid, bandLo, bandHi, rng));
        SampledFunction g = synthesize(randomBand(grid, bandLo, bandHi, rng));
        if (sobolevNormalized) {
          f = scaleFunction(f, 1.0 / sobolevNorm(f, frame, s, t));
          g = scaleFunction(g, 1.0 / sobolevNorm(g, frame, s, t));
        } else {
          f = scaleFunction(f, 1.0 / lebesgueNorm(f, 2.0));
          g = scaleFunction(g, 1.0 / lebesgueNorm(g, 2.0));
        }
        const SampledFunction fg = pointwiseProduct(f, g);
        const SampledFunction defect = multiplicationDefect(f, g, theta);
        const SampledFunction classicalF = classicalParaproduct(f, g, frame);
        const SampledFunction classicalG = classicalParaproduct(g, f, frame);
        std::vector<Complex> evals(fg.values().begin(), fg.values().end());
        for (std::size_t i = 0; i < evals.size(); ++i) {
          evals[i] -= classicalF.values()[i] + classicalG.values()[i];
        }
        const SampledFunction classicalDefect(grid, std::move(evals));

        const double nD = sobolevNorm(defect, frame, 2.0 * s, t);
        const double nFg = sobolevNorm(fg, frame, 2.0 * s, t);
        const double nE = sobolevNorm(classicalDefect, frame, 2.0 * s - 1.0 / t, t);
        const double denom = sobolevNorm(f, frame, s, t) * sobolevNorm(g, frame, s, t);
        dNorms[lambda].push_back(nD);
        fgNorms[lambda].push_back(nFg);
        classicalNorms[lambda].push_back(nE);
        report["rows"].push_back(Json{{"study", "defect"},
                                      {"lambda", lambda},
                                      {"trial", trial},
                                      {"defectNorm2s", nD},
                                      {"productNorm2s", nFg},
                                      {"classicalDefectNormGain", nE},
                                      {"inputNormProduct", denom},
                                      {"defectRatio", nD / denom},
                                      {"productRatio", nFg / denom}});
      }
    }
  }

  auto medians = [](std::map<double, std::vector<double>>& m, std::vector<double>& lams,
                    std::vector<double>& meds) {
    for (auto& [lam, vals] : m) {
      std::sort(vals.begin(), vals.end());
      lams.push_back(lam);
      meds.push_back(vals[vals.size() / 2]);
    }
  };
  std::vector<double> lams, medD, medFg, medE;
  medians(dNorms, lams, medD);
  lams.clear();
  medians(fgNorms, lams, medFg);
  lams.clear();
  medians(classicalNorms, lams, medE);

  Json agg;
  agg["defectSlope"] = fitLogSlope(lams, medD);
  agg["productSlope"] = fitLogSlope(lams, medFg);
  agg["classicalDefectSlope"] = fitLogSlope(lams, medE);
  report["aggregate"] = agg;
  report["timing"]["totalMs"] = elapsedMs(t0);
  return report;
}

Json runBenchBilinear(const Json& config) {
  const auto t0 = Clock::now();
  Json cfg;
  cfg["sizes"] = config.value("sizes", std::vector<std::int64_t>{1024, 4096, 16384});
  cfg["order"] = config.value("order", 7);
  cfg["reps"] = config.value("reps", 3);
  cfg["seed"] = config.value("seed", std::uint64_t{12345});
  cfg["sparseNnz"] = config.value("sparseNnz", std::int64_t{32});
  cfg["truncationTolerance"] = config.value("truncationTolerance", 1e-9);

  const BumpProfile profile(cfg["order"].get<int>());
  const auto seed = cfg["seed"].get<std::uint64_t>();
  const int reps = cfg["reps"].get<int>();
  const double truncTol = cfg["truncationTolerance"].get<double>();

  Json report = baseReport("bench", cfg);

  std::uint64_t trialKey = 0;
  for (const auto& nTag : cfg["sizes"]) {
    const std::int64_t n = nTag.get<std::int64_t>();
    const GridSpec grid(n, static_cast<double>(n) / 8.0);  // Nyquist fixed at 4
    const Symbol kernel = Symbol::diagonalKernel(
        [profile](double u) -> Complex {
          const double a = std::abs(u);
          if (a <= 1.0) return {1.0, 0.0};
          if (a >= 3.0) return {0.0, 0.0};
          return {profile((3.0 - a) / 2.0), 0.0};
        },
        3.0);

    TrialRng rng = TrialRng::forTrial(seed, trialKey++);
    const auto bandTop = static_cast<std::int64_t>(1.5 * grid.scaleL);
    const double inf = std::numeric_limits<double>::infinity();
    SampledFunction f = synthesize(randomBand(grid, -bandTop, bandTop, rng));
    f = scaleFunction(f, 1.0 / lebesgueNorm(f, inf));
    SampledFunction g = synthesize(randomBand(grid, -bandTop, bandTop, rng));
    g = scaleFunction(g, 1.0 / lebesgueNorm(g, inf));

    auto timeStrategy = [&](EvalStrategy strategy) {
      ApplyOptions opts;
      opts.strategy = strategy;
      opts.truncationTolerance = truncTol;
      double best = std::numeric_limits<double>::infinity();
      SampledFunction out;
      for (int r = 0; r < reps; ++r) {
        const auto tr = Clock::now();
        out = applyBilinear(kernel, f, g, opts);
        best = std::min(best, elapsedMs(tr));
      }
      return std::pair<SampledFunction, double>(std::move(out), best);
    };

    auto [dense, denseMs] = timeStrategy(EvalStrategy::DenseAccumulate);
    auto [sparse, sparseMs] = timeStrategy(EvalStrategy::SparseAccumulate);
    auto [conv, convMs] = timeStrategy(EvalStrategy::DiagonalConvolution);

    auto maxDev = [&](const SampledFunction& a) {
      double dev = 0.0;
      for (std::size_t i = 0; i < a.values().size(); ++i) {
        dev = std::max(dev, std::abs(a.values()[i] - dense.values()[i]));
      }
      return dev;
    };

    report["rows"].push_back(Json{{"study", "band"},
                                  {"n", n},
                                  {"strategy", "dense"},
                                  {"wallMs", denseMs},
                                  {"maxDeviation", 0.0}});
    report["rows"].push_back(Json{{"study", "band"},
                                  {"n", n},
                                  {"strategy", "sparse"},
                                  {"wallMs", sparseMs},
                                  {"maxDeviation", maxDev(sparse)}});
    report["rows"].push_back(Json{{"study", "band"},
                                  {"n", n},
                                  {"strategy", "convolution"},
                                  {"wallMs", convMs},
                                  {"maxDeviation", maxDev(conv)},
                                  {"denseOverConvSpeedup", denseMs / convMs}});

    // sparse-input scenario
    {
      const std::int64_t nnz = cfg["sparseNnz"].get<std::int64_t>();
      std::map<std::int64_t, Complex> ef, eg;
      for (std::int64_t i = 0; i < nnz; ++i) {
        ef[rng.uniformInt(-n / 8, n / 8)] = rng.complexNormal();
        eg[rng.uniformInt(-n / 8, n / 8)] = rng.complexNormal();
      }
      const SampledFunction sf = synthesize(SpectralCoefficients::sparse(grid, std::move(ef)));
      const SampledFunction sg = synthesize(SpectralCoefficients::sparse(grid, std::move(eg)));
      ApplyOptions opts;
      double denseSparseMs = std::numeric_limits<double>::infinity();
      double sparseSparseMs = std::numeric_limits<double>::infinity();
      SampledFunction outD, outS;
      for (int r = 0; r < reps; ++r) {
        opts.strategy = EvalStrategy::DenseAccumulate;
        auto tr = Clock::now();
        outD = applyBilinear(kernel, sf, sg, opts);
        denseSparseMs = std::min(denseSparseMs, elapsedMs(tr));
        opts.strategy = EvalStrategy::SparseAccumulate;
        tr = Clock::now();
        outS = applyBilinear(kernel, sf, sg, opts);
        sparseSparseMs = std::min(sparseSparseMs, elapsedMs(tr));
      }
      double dev = 0.0;
      for (std::size_t i = 0; i < outD.values().size(); ++i) {
        dev = std::max(dev, std::abs(outD.values()[i] - outS.values()[i]));
      }
      report["rows"].push_back(Json{{"study", "sparseInputs"},
                                    {"n", n},
                                    {"strategy", "sparse"},
                                    {"nnz", nnz},
                                    {"wallMs", sparseSparseMs},
                                    {"denseWallMs", denseSparseMs},
                                    {"sparseOverDenseSpeedup", denseSparseMs / sparseSparseMs},
                                    {"maxDeviation", dev}});
    }
  }

  report["timing"]["totalMs"] = elapsedMs(t0);
  return report;
}

Json runExperiment(const std::string& name, const Json& config) {
  if (name == "lp-check") return runLpCheck(config);
  if (name == "counterexample") return runCounterexample(config);
  if (name == "norm-probe") return runNormRatioProbe(config);
  if (name == "paraproduct") return runParaproductStudy(config);
  if (name == "bench") return runBenchBilinear(config);
  throw Error(ErrorCode::InvalidArgument, "unknown experiment \"" + name + "\"");
}

Json stripTimings(const Json& report) {
  if (report.is_object()) {
    Json out = Json::object();
    for (const auto& [key, value] : report.items()) {
      if (key == "timing") continue;
      if (key.size() > 2 && key.compare(key.size() - 2, 2, "Ms") == 0) continue;
      out[key] = stripTimings(value);
    }
    return out;
  }
  if (report.is_array()) {
    Json out = Json::array();
    for (const auto& v : report) out.push_back(stripTimings(v));
    return out;
  }
  return report;
}

std::string toCsv(const Json& report) {
  require(report.contains("rows") && report["rows"].is_array(), ErrorCode::InvalidArgument,
          "report has no rows array");
  std::vector<std::string> columns;
  for (const auto& row : report["rows"]) {
    for (const auto& [key, value] : row.items()) {
      (void)value;
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    }
  }
  std::sort(columns.begin(), columns.end());
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << columns[i] << (i + 1 < columns.size() ? "," : "");
  }
  out << "\n";
  for (const auto& row : report["rows"]) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (row.contains(columns[i])) {
        const auto& v = row[columns[i]];
        if (v.is_string()) {
          out << v.get<std::string>();
        } else {
          out << v.dump();
        }
      }
      if (i + 1 < columns.size()) out << ",";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace bilinop::harness
