#include "bilinop/symbols.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "parallel.hpp"

namespace bilinop {

namespace {

Complex modulationSample(std::int64_t latticeIndex, const GridSpec& grid, std::int64_t i) {
  // e^{i x_i m / L} = e^{2 pi i (i m mod N) / N}
  const std::int64_t n = grid.n;
  const std::int64_t phaseIdx = ((i % n) * (latticeIndex % n)) % n;
  const double phase = kTwoPi * static_cast<double>(phaseIdx) / static_cast<double>(n);
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace

SymbolClassParams::SymbolClassParams(double order_, double rho_, double delta_,
                                     std::optional<double> theta_)
    : order(order_), rho(rho_), delta(delta_), theta(theta_) {
  require(delta <= rho, ErrorCode::InvalidArgument, "class parameters need delta <= rho");
  require(rho >= 0.0 && rho <= 1.0 && delta >= 0.0, ErrorCode::InvalidArgument,
          "rho and delta must lie in [0, 1]");
  if (theta) {
    require(*theta > -kPi / 2.0 && *theta <= kPi / 2.0, ErrorCode::InvalidArgument,
            "theta must lie in (-pi/2, pi/2]");
  }
}

Symbol Symbol::multiplier(std::function<Complex(double, double)> evalFn,
                          std::optional<SymbolClassParams> params) {
  Symbol s;
  s.kind_ = Kind::Multiplier;
  s.multiplier_ = std::move(evalFn);
  s.classParams_ = std::move(params);
  return s;
}

Symbol Symbol::modulationInvariant(std::function<Complex(double, double)> tau,
                                   TauOrientation orientation,
                                   std::optional<SymbolClassParams> params) {
  Symbol s;
  s.kind_ = Kind::ModulationInvariant;
  s.tau_ = std::move(tau);
  s.orientation_ = orientation;
  s.classParams_ = std::move(params);
  return s;
}

Symbol Symbol::diagonalKernel(std::function<Complex(double)> profile, double supportRadius,
                              std::optional<SymbolClassParams> params) {
  require(supportRadius > 0.0, ErrorCode::InvalidArgument,
          "diagonal kernel support radius must be positive");
  Symbol s;
  s.kind_ = Kind::DiagonalKernel;
  s.diagonalProfile_ = std::move(profile);
  s.diagonalRadius_ = supportRadius;
  s.classParams_ = std::move(params);
  return s;
}

Symbol Symbol::general(std::function<Complex(double, double, double)> evalFn,
                       std::optional<SymbolClassParams> params) {
  Symbol s;
  s.kind_ = Kind::General;
  s.general_ = std::move(evalFn);
  s.classParams_ = std::move(params);
  return s;
}

Symbol Symbol::elementarySum(const GridSpec& grid, std::function<double(double)> psiHat,
                             std::function<double(double)> lWindow,
                             std::vector<ElementaryTerm> terms,
                             std::optional<SymbolClassParams> params) {
  Symbol s;
  s.kind_ = Kind::ElementarySum;
  s.termGrid_ = grid;
  s.classParams_ = std::move(params);
  for (const auto& term : terms) {
    require(term.level >= 0, ErrorCode::InvalidArgument, "elementary levels must satisfy j >= 0");
    require(static_cast<std::int64_t>(term.coeffSamples.size()) == grid.n,
            ErrorCode::InvalidArgument, "coefficient table must span the grid");
    SeparableTerm sep;
    sep.xSamples.resize(static_cast<std::size_t>(grid.n));
    const std::int64_t stride = std::int64_t{1} << term.level;
    for (std::int64_t i = 0; i < grid.n; ++i) {
      sep.xSamples[static_cast<std::size_t>(i)] =
          term.coeffSamples[static_cast<std::size_t>((i * stride) % grid.n)];
    }
    const int j = term.level;
    const std::int64_t l = term.translation;
    sep.multiplier = [j, l, psiHat, lWindow](double xi, double eta) -> Complex {
      const double scale = std::ldexp(1.0, -j);
      const double w = psiHat(scale * (xi - eta)) *
                       lWindow(static_cast<double>(l) + scale * (xi + eta));
      return {w, 0.0};
    };
    s.separable_.push_back(std::move(sep));
  }
  // keep the original tables for direct evaluation
  s.general_ = [grid, psiHat = std::move(psiHat), lWindow = std::move(lWindow),
                terms = std::move(terms)](double x, double xi, double eta) -> Complex {
    Complex acc{0.0, 0.0};
    const double h = grid.spacing();
    for (const auto& term : terms) {
      const double scale = std::ldexp(1.0, -term.level);
      const double w = psiHat(scale * (xi - eta)) *
                       lWindow(static_cast<double>(term.translation) + scale * (xi + eta));
      if (w == 0.0) continue;
      const double pos = std::ldexp(x, term.level) / h;
      const double wrapped = pos - std::floor(pos / static_cast<double>(grid.n)) *
                                       static_cast<double>(grid.n);
      const auto i0 = static_cast<std::int64_t>(std::floor(wrapped));
      const double frac = wrapped - static_cast<double>(i0);
      const Complex a = term.coeffSamples[static_cast<std::size_t>(i0 % grid.n)];
      const Complex b = term.coeffSamples[static_cast<std::size_t>((i0 + 1) % grid.n)];
      acc += (a + frac * (b - a)) * w;
    }
    return acc;
  };
  return s;
}

bool Symbol::xIndependent() const {
  return kind_ == Kind::Multiplier || kind_ == Kind::DiagonalKernel;
}

Complex Symbol::eval(double x, double xi, double eta) const {
  switch (kind_) {
    case Kind::Multiplier:
      return multiplier_(xi, eta);
    case Kind::ModulationInvariant:
      return tau_(x, orientation_ == TauOrientation::EtaMinusXi ? eta - xi : xi - eta);
    case Kind::DiagonalKernel:
      return diagonalProfile_(xi - eta);
    case Kind::General:
    case Kind::ElementarySum:
      return general_(x, xi, eta);
  }
  throw Error(ErrorCode::Internal, "unhandled symbol kind");
}

Complex Symbol::evalMultiplier(double xi, double eta) const {
  require(xIndependent(), ErrorCode::NotMultiplier,
          "operation needs an x-independent symbol");
  return kind_ == Kind::Multiplier ? multiplier_(xi, eta) : diagonalProfile_(xi - eta);
}

Symbol Symbol::withClassParams(SymbolClassParams params) const {
  Symbol s = *this;
  s.classParams_ = std::move(params);
  return s;
}

const std::function<Complex(double)>& Symbol::diagonalProfile() const {
  require(kind_ == Kind::DiagonalKernel, ErrorCode::StrategyMismatch,
          "symbol has no diagonal kernel profile");
  return diagonalProfile_;
}

double Symbol::diagonalSupportRadius() const {
  require(kind_ == Kind::DiagonalKernel, ErrorCode::StrategyMismatch,
          "symbol has no diagonal kernel profile");
  return diagonalRadius_;
}

const std::function<Complex(double, double)>& Symbol::tau() const {
  require(kind_ == Kind::ModulationInvariant, ErrorCode::InvalidArgument,
          "symbol carries no tau profile");
  return tau_;
}

Symbol makeCounterexampleSymbol(const GridSpec& grid, int jMin, int jMax,
                                const CounterexampleCutoff& cutoff) {
  require(jMin >= 1 && jMax >= jMin, ErrorCode::InvalidArgument,
          "need 1 <= jMin <= jMax");
  const double tol = 1e-12;
  require(cutoff.innerZero >= 5.0 / 7.0 - tol && cutoff.innerOne <= 5.0 / 6.0 + tol &&
              cutoff.outerOne >= 4.0 / 3.0 - tol && cutoff.outerZero <= 5.0 / 3.0 + tol,
          ErrorCode::BadCutoffSpec,
          "cutoff must vanish outside (5/7, 5/3) and equal 1 on [5/6, 4/3]");
  const double topFreq = std::ldexp(cutoff.outerZero, jMax);
  require(topFreq < grid.nyquist(), ErrorCode::NyquistViolation,
          "2^jMax * outer support reaches the Nyquist frequency; increase N");

  auto psiHat = annularCutoff(cutoff.innerZero, cutoff.innerOne, cutoff.outerOne,
                              cutoff.outerZero, cutoff.profile);

  std::vector<int> levels;
  for (int j = jMin; j <= jMax; ++j) levels.push_back(j);

  Symbol s;
  s.kind_ = Symbol::Kind::ModulationInvariant;
  s.orientation_ = TauOrientation::EtaMinusXi;
  s.termGrid_ = grid;
  s.classParams_ = SymbolClassParams(0.0, 1.0, 1.0, kPi / 4.0);
  s.tau_ = [levels, psiHat](double x, double u) -> Complex {
    Complex acc{0.0, 0.0};
    for (int j : levels) {
      const double w = psiHat(std::ldexp(u, -j));
      if (w == 0.0) continue;
      const double phase = -std::ldexp(x, j);
      acc += w * Complex{std::cos(phase), std::sin(phase)};
    }
    return acc;
  };
  for (int j : levels) {
    SeparableTerm term;
    const double shift = -std::ldexp(grid.scaleL, j);
    const double rounded = std::round(shift);
    if (std::abs(shift - rounded) < 1e-9 && grid.containsIndex(static_cast<std::int64_t>(rounded))) {
      term.modulationIndex = static_cast<std::int64_t>(rounded);
    } else {
      term.xSamples.resize(static_cast<std::size_t>(grid.n));
      for (std::int64_t i = 0; i < grid.n; ++i) {
        const double phase = -std::ldexp(grid.point(i), j);
        term.xSamples[static_cast<std::size_t>(i)] = {std::cos(phase), std::sin(phase)};
      }
    }
    term.multiplier = [j, psiHat](double xi, double eta) -> Complex {
      return {psiHat(std::ldexp(eta - xi, -j)), 0.0};
    };
    s.separable_.push_back(std::move(term));
  }
  return s;
}

Symbol makeReducedSymbol(const std::vector<std::function<Complex(double)>>& coeffs,
                         const LPFrame& frame) {
  require(static_cast<int>(coeffs.size()) <= frame.kMax(), ErrorCode::NyquistViolation,
          "more coefficient levels than the frame resolves");
  const GridSpec grid = frame.grid();
  auto shared = std::make_shared<LPFrame>(frame);

  Symbol s;
  s.kind_ = Symbol::Kind::ModulationInvariant;
  s.orientation_ = TauOrientation::XiMinusEta;
  s.termGrid_ = grid;
  s.classParams_ = SymbolClassParams(0.0, 1.0, 1.0, kPi / 4.0);
  s.tau_ = [shared, coeffs, grid](double x, double u) -> Complex {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const double w = shared->psiHatLevel(static_cast<int>(j), u);
      if (w == 0.0) continue;
      const double arg = std::fmod(std::ldexp(x, static_cast<int>(j)), grid.period());
      acc += coeffs[j](arg) * w;
    }
    return acc;
  };
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    SeparableTerm term;
    term.xSamples.resize(static_cast<std::size_t>(grid.n));
    const std::int64_t stride = std::int64_t{1} << j;
    for (std::int64_t i = 0; i < grid.n; ++i) {
      term.xSamples[static_cast<std::size_t>(i)] = coeffs[j](grid.point((i * stride) % grid.n));
    }
    const int level = static_cast<int>(j);
    term.multiplier = [shared, level](double xi, double eta) -> Complex {
      return {shared->psiHatLevel(level, xi - eta), 0.0};
    };
    s.separable_.push_back(std::move(term));
  }
  return s;
}

Symbol transposeSymbol(const Symbol& sigma, int which) {
  require(which == 1 || which == 2, ErrorCode::InvalidArgument, "transpose slot must be 1 or 2");
  require(sigma.xIndependent(), ErrorCode::NotMultiplier,
          "transpose substitution applies to x-independent symbols only");
  auto base = [sigma](double xi, double eta) { return sigma.evalMultiplier(xi, eta); };
  if (which == 1) {
    return Symbol::multiplier(
        [base](double xi, double eta) { return base(-xi - eta, eta); });
  }
  return Symbol::multiplier([base](double xi, double eta) { return base(xi, -xi - eta); });
}

namespace {

double classWeight(const SymbolClassParams& params, double xi, double eta) {
  if (!params.theta) return 1.0 + std::abs(xi) + std::abs(eta);
  if (std::abs(*params.theta - kPi / 2.0) < 1e-12) return 1.0 + std::abs(xi);
  return 1.0 + std::abs(eta - std::tan(*params.theta) * xi);
}

// 4th-order central stencils, offsets and weights (divide by h^order).
const std::vector<std::pair<int, double>>& stencil(int order) {
  static const std::vector<std::vector<std::pair<int, double>>> tables = {
      {{0, 1.0}},
      {{-2, 1.0 / 12}, {-1, -8.0 / 12}, {1, 8.0 / 12}, {2, -1.0 / 12}},
      {{-2, -1.0 / 12}, {-1, 16.0 / 12}, {0, -30.0 / 12}, {1, 16.0 / 12}, {2, -1.0 / 12}},
      {{-3, -1.0 / 8}, {-2, 1.0}, {-1, -13.0 / 8}, {1, 13.0 / 8}, {2, -1.0}, {3, 1.0 / 8}},
      {{-3, -1.0 / 6}, {-2, 2.0}, {-1, -39.0 / 6}, {0, 56.0 / 6}, {1, -39.0 / 6},
       {2, 2.0}, {3, -1.0 / 6}},
  };
  return tables[static_cast<std::size_t>(order)];
}

Complex finiteDifference(const Symbol& sigma, double x, double xi, double eta, int alpha,
                         int beta, int gamma, double hx, double hf) {
  Complex total{0.0, 0.0};
  for (const auto& [ox, wx] : stencil(alpha)) {
    for (const auto& [oxi, wxi] : stencil(beta)) {
      for (const auto& [oeta, weta] : stencil(gamma)) {
        total += wx * wxi * weta *
                 sigma.eval(x + ox * hx, xi + oxi * hf, eta + oeta * hf);
      }
    }
  }
  const double denom = std::pow(hx, alpha) * std::pow(hf, beta) * std::pow(hf, gamma);
  return total / denom;
}

}  // namespace

SamplePlan makeClassSamplePlan(const GridSpec& stepGrid, double maxAbsFreq,
                               const SymbolClassParams& params,
                               const SamplePlanOptions& options) {
  require(maxAbsFreq > 0.0, ErrorCode::InvalidArgument, "maxAbsFreq must be positive");
  SamplePlan plan;
  plan.xStep = stepGrid.spacing();
  plan.freqStep = 1.0 / stepGrid.scaleL;

  for (int i = 0; i < options.xCount; ++i) {
    const auto idx = static_cast<std::int64_t>(
        (0.137 + 0.731 * static_cast<double>(i)) * static_cast<double>(stepGrid.n));
    plan.xs.push_back(stepGrid.point(idx % stepGrid.n));
  }

  auto snap = [&](double f) { return std::round(f * stepGrid.scaleL) / stepGrid.scaleL; };

  const int jTop = static_cast<int>(std::floor(std::log2(maxAbsFreq)));
  const double baseRadii[] = {0.77, 1.0, 1.31};
  const int radiiCount = std::min<int>(options.shellSamples, 3);

  if (params.theta && std::abs(*params.theta - kPi / 2.0) > 1e-12) {
    const double slope = std::tan(*params.theta);
    // sample the singular direction: eta = slope*xi + u over dyadic |u|
    const double anchors[] = {0.0, 0.29 * maxAbsFreq, -0.61 * maxAbsFreq};
    std::vector<double> offsets;
    for (int j = 0; j <= jTop; ++j)
      for (int r = 0; r < radiiCount; ++r)
        for (int sign : {1, -1}) offsets.push_back(sign * std::ldexp(baseRadii[r], j));
    for (int d = 0; d < options.diagonalOffsets; ++d)
      for (int sign : {1, -1}) offsets.push_back(sign * static_cast<double>(d) * plan.freqStep);
    for (double t : anchors) {
      for (double u : offsets) {
        const double xi = snap(t);
        const double eta = snap(slope * xi + u);
        if (std::abs(xi) <= maxAbsFreq && std::abs(eta) <= 2.0 * maxAbsFreq)
          plan.freqPoints.emplace_back(xi, eta);
      }
    }
  } else {
    const std::pair<double, double> dirs[] = {{1.0, 0.0}, {0.0, 1.0},  {0.7, 0.7},
                                              {0.7, -0.7}, {-0.7, 0.7}, {-1.0, -0.3}};
    for (int j = 0; j <= jTop; ++j) {
      for (int r = 0; r < radiiCount; ++r) {
        const double rad = std::ldexp(baseRadii[r], j);
        for (const auto& [dx, dy] : dirs) {
          const double xi = snap(rad * dx);
          const double eta = snap(rad * dy);
          if (std::abs(xi) <= maxAbsFreq && std::abs(eta) <= maxAbsFreq)
            plan.freqPoints.emplace_back(xi, eta);
        }
      }
    }
    plan.freqPoints.emplace_back(0.0, 0.0);
  }
  std::sort(plan.freqPoints.begin(), plan.freqPoints.end());
  plan.freqPoints.erase(std::unique(plan.freqPoints.begin(), plan.freqPoints.end()),
                        plan.freqPoints.end());
  return plan;
}

ClassReport checkClassEstimate(const Symbol& sigma, const SymbolClassParams& params,
                               int maxOrder, const SamplePlan& plan,
                               const ClassCheckOptions& options) {
  require(maxOrder >= 0 && maxOrder <= 4, ErrorCode::InvalidArgument,
          "finite-difference order limited to maxOrder <= 4");
  require(!plan.xs.empty() && !plan.freqPoints.empty() && plan.xStep > 0.0 &&
              plan.freqStep > 0.0,
          ErrorCode::InvalidArgument, "sample plan is empty");

  ClassReport report;
  report.params = params;
  report.maxOrder = maxOrder;
  for (int total = 0; total <= maxOrder; ++total) {
    for (int alpha = 0; alpha <= total; ++alpha) {
      for (int beta = 0; beta + alpha <= total; ++beta) {
        const int gamma = total - alpha - beta;
        report.rows.push_back({alpha, beta, gamma, 0.0});
      }
    }
  }

  const bool xIndep = sigma.xIndependent();
  detail::parallelFor(report.rows.size(), [&](std::size_t r) {
    ClassReport::Row& row = report.rows[r];
    if (xIndep && row.alpha > 0) {
      row.fitted = 0.0;
      return;
    }
    const double exponent =
        params.order + params.delta * row.alpha - params.rho * (row.beta + row.gamma);
    double fitted = 0.0;
    const std::size_t xCount = xIndep ? 1 : plan.xs.size();
    for (std::size_t ix = 0; ix < xCount; ++ix) {
      const double x = plan.xs[ix];
      for (const auto& [xi, eta] : plan.freqPoints) {
        const Complex d = finiteDifference(sigma, x, xi, eta, row.alpha, row.beta, row.gamma,
                                           plan.xStep, plan.freqStep);
        const double w = classWeight(params, xi, eta);
        fitted = std::max(fitted, std::abs(d) * std::pow(w, -exponent));
      }
    }
    row.fitted = fitted;
  });

  if (options.baseline) {
    double worst = 0.0;
    for (const auto& row : report.rows) {
      const ClassReport::Row* base = options.baseline->find(row.alpha, row.beta, row.gamma);
      if (base && base->fitted > 0.0) worst = std::max(worst, row.fitted / base->fitted);
    }
    report.maxViolationRatio = worst;
  }
  return report;
}

const ClassReport::Row* ClassReport::find(int alpha, int beta, int gamma) const {
  for (const auto& row : rows) {
    if (row.alpha == alpha && row.beta == beta && row.gamma == gamma) return &row;
  }
  return nullptr;
}

namespace {

// forward 2-D DFT of a K x K table, unscaled
void dft2d(std::vector<Complex>& table, int k) {
  std::vector<Complex> line(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) {
    std::copy_n(table.begin() + static_cast<std::ptrdiff_t>(r) * k, k, line.begin());
    detail::dftForwardInPlace(line);
    std::copy_n(line.begin(), k, table.begin() + static_cast<std::ptrdiff_t>(r) * k);
  }
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r < k; ++r) line[static_cast<std::size_t>(r)] = table[static_cast<std::size_t>(r) * k + c];
    detail::dftForwardInPlace(line);
    for (int r = 0; r < k; ++r) table[static_cast<std::size_t>(r) * k + c] = line[static_cast<std::size_t>(r)];
  }
}

}  // namespace

ElementaryDecomposition decomposeElementary(const Symbol& sigma, const LPFrame& frame,
                                            const DecomposeOptions& options) {
  require(options.jMin >= 0 && options.jMax >= options.jMin, ErrorCode::InvalidArgument,
          "invalid level range");
  require(options.lMin <= options.lMax, ErrorCode::InvalidArgument, "invalid translation range");
  require(options.boxSamples >= 8 && (options.boxSamples & (options.boxSamples - 1)) == 0,
          ErrorCode::InvalidArgument, "boxSamples must be a power of two >= 8");

  const auto chi = translationWindow(frame.profile());
  auto psiHat = [&frame](double u) { return frame.psiHat(u); };

  ElementaryDecomposition out;
  out.fourierOrder = options.fourierOrder;

  const bool xIndep = sigma.xIndependent();
  std::vector<double> xs;
  if (xIndep) {
    xs.push_back(0.0);
  } else {
    const std::int64_t count = std::min<std::int64_t>(frame.grid().n, 64);
    const std::int64_t stride = frame.grid().n / count;
    for (std::int64_t i = 0; i < count; ++i) xs.push_back(frame.grid().point(i * stride));
  }

  const int k = options.boxSamples;
  const int stored = std::min(options.storedOrders, k / 2 - 1);

  for (int j = options.jMin; j <= options.jMax; ++j) {
    const double scale = std::ldexp(1.0, j);
    for (std::int64_t l = options.lMin; l <= options.lMax; ++l) {
      const double cu = -static_cast<double>(l) / 2.0;
      ElementaryPiece piece;
      piece.level = j;
      piece.translation = l;
      piece.coeffTable.resize(xs.size());
      bool anyMass = false;
      for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        std::vector<Complex> table(static_cast<std::size_t>(k) * k);
        for (int a = 0; a < k; ++a) {
          const double u = cu - kPi + kTwoPi * a / k;
          for (int b = 0; b < k; ++b) {
            const double v = cu - kPi + kTwoPi * b / k;
            const double w = psiHat(u - v) * chi(u + v + static_cast<double>(l));
            Complex val{0.0, 0.0};
            if (w != 0.0) {
              val = sigma.eval(xs[ix], scale * u, scale * v) * w;
              anyMass = true;
            }
            table[static_cast<std::size_t>(a) * k + b] = val;
          }
        }
        if (!anyMass && ix == 0) break;
        dft2d(table, k);
        const double norm = 1.0 / (static_cast<double>(k) * k);
        auto gammaAt = [&](int a, int b) {
          const int ra = ((a % k) + k) % k;
          const int rb = ((b % k) + k) % k;
          const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
          return sign * norm * table[static_cast<std::size_t>(ra) * k + rb];
        };
        if (ix == 0) {
          for (int a = -stored; a <= stored; ++a)
            for (int b = -stored; b <= stored; ++b) piece.gamma[{a, b}] = gammaAt(a, b);
        }
        piece.coeffTable[ix] = gammaAt(0, 0);
        // truncation residual of the stored series on the sample nodes
        if (ix == 0) {
          double resid = 0.0;
          for (int a = 0; a < k; a += std::max(1, k / 8)) {
            const double u = cu - kPi + kTwoPi * a / k;
            for (int b = 0; b < k; b += std::max(1, k / 8)) {
              const double v = cu - kPi + kTwoPi * b / k;
              Complex rec{0.0, 0.0};
              for (const auto& [ab, g] : piece.gamma) {
                const double phase = ab.first * (u - cu) + ab.second * (v - cu);
                rec += g * Complex{std::cos(phase), std::sin(phase)};
              }
              const Complex exact = sigma.eval(xs[ix], scale * u, scale * v) *
                                    psiHat(u - v) * chi(u + v + static_cast<double>(l));
              resid = std::max(resid, std::abs(rec - exact));
            }
          }
          piece.seriesResidual = resid;
        }
      }
      if (anyMass) out.pieces.push_back(std::move(piece));
    }
  }

  // gamma decay constant for the configured order
  double decayC = 0.0;
  for (const auto& piece : out.pieces) {
    for (const auto& [ab, g] : piece.gamma) {
      const double weight =
          std::pow(1.0 + std::abs(ab.first) + std::abs(ab.second), options.fourierOrder);
      decayC = std::max(decayC, std::abs(g) * weight);
    }
  }
  out.gammaDecayConstant = decayC;

  // partition residual over covered frequency samples
  const double uLo = std::ldexp(1.0, options.jMin);
  const double uHi = std::ldexp(1.0, options.jMax);
  double partResid = 0.0;
  const int cs = options.checkSamples;
  for (int iu = 0; iu < cs; ++iu) {
    const double mag = uLo * std::pow(uHi / uLo, (iu + 0.5) / cs);
    for (int sign : {1, -1}) {
      const double u = sign * mag;
      for (int iw = 0; iw < cs; ++iw) {
        // xi + eta spans the translated cells of the finest level present
        const double w =
            (static_cast<double>(options.lMin) + (options.lMax - options.lMin + 1.0) *
                                                     (iw + 0.5) / cs) *
            -std::ldexp(1.0, options.jMin);
        const double xi = 0.5 * (w + u);
        const double eta = 0.5 * (w - u);
        // covered iff every level seeing u lies in range and every needed l is in range
        bool covered = std::abs(u) >= uLo && std::abs(u) <= uHi;
        if (covered) {
          for (int j = options.jMin; j <= options.jMax && covered; ++j) {
            if (frame.psiHatLevel(j, u) == 0.0) continue;
            const double vsum = std::ldexp(xi + eta, -j);
            const auto lNeedLo = static_cast<std::int64_t>(std::ceil(-vsum - 1.0));
            const auto lNeedHi = static_cast<std::int64_t>(std::floor(-vsum + 1.0));
            if (lNeedLo < options.lMin || lNeedHi > options.lMax) covered = false;
          }
        }
        if (!covered) {
          out.uncovered.emplace_back(xi, eta);
          continue;
        }
        Complex recon{0.0, 0.0};
        for (int j = options.jMin; j <= options.jMax; ++j) {
          const double pw = frame.psiHatLevel(j, u);
          if (pw == 0.0) continue;
          for (std::int64_t l = options.lMin; l <= options.lMax; ++l) {
            const double cw = chi(static_cast<double>(l) + std::ldexp(xi + eta, -j));
            if (cw == 0.0) continue;
            recon += sigma.eval(xs[0], xi, eta) * pw * cw;
          }
        }
        partResid = std::max(partResid, std::abs(recon - sigma.eval(xs[0], xi, eta)));
      }
    }
  }
  out.partitionResidual = partResid;
  double seriesResid = 0.0;
  for (const auto& piece : out.pieces) seriesResid = std::max(seriesResid, piece.seriesResidual);
  out.residual = std::max(partResid, seriesResid);

  if (options.requireCoverage && !out.uncovered.empty()) {
    throw Error(ErrorCode::CoverageGap,
                std::to_string(out.uncovered.size()) +
                    " frequency samples not covered by the requested (j, l) set");
  }
  return out;
}

}  // namespace bilinop
