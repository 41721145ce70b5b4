#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "bilinop/frames.hpp"
#include "bilinop/grid.hpp"

namespace bilinop {

/// Parameters of a symbol class estimate. With theta unset the weight is
/// (1 + |xi| + |eta|); with theta set it is (1 + |eta - tan(theta) xi|)
/// (1 + |xi| for theta = pi/2). Exponent: order + delta*a - rho*(b + g)
/// for a x-derivatives and b, g frequency derivatives.
struct SymbolClassParams {
  double order = 0.0;
  double rho = 1.0;
  double delta = 1.0;
  std::optional<double> theta;

  SymbolClassParams() = default;
  SymbolClassParams(double order_, double rho_, double delta_,
                    std::optional<double> theta_ = std::nullopt);
};

/// Which frequency difference an x-dependent profile tau(x, u) is applied to.
enum class TauOrientation {
  EtaMinusXi,  ///< sigma(x, xi, eta) = tau(x, eta - xi)
  XiMinusEta,  ///< sigma(x, xi, eta) = tau(x, xi - eta)
};

/// One separable piece of a structured symbol: an x-profile times an
/// (xi, eta) multiplier. The x-profile is either a pure lattice modulation
/// e^{i x m / L} or a table of samples on the grid.
struct SeparableTerm {
  std::optional<std::int64_t> modulationIndex;
  std::vector<Complex> xSamples;
  std::function<Complex(double, double)> multiplier;
};

/// Term of an elementary sum: coefficient samples m_{j,l} on the x grid,
/// weighting the window PsiHat(2^-j (xi - eta)) * chi(l + 2^-j (xi + eta)).
struct ElementaryTerm {
  int level = 0;
  std::int64_t translation = 0;
  std::vector<Complex> coeffSamples;
};

/// Bilinear symbol in one of the representations used by the operator
/// evaluation paths. All representations answer eval(x, xi, eta); the
/// structured ones additionally expose separable terms for fast paths.
class Symbol {
public:
  enum class Kind { Multiplier, ModulationInvariant, DiagonalKernel, General, ElementarySum };

  Symbol() = default;

  static Symbol multiplier(std::function<Complex(double, double)> evalFn,
                           std::optional<SymbolClassParams> params = std::nullopt);

  static Symbol modulationInvariant(std::function<Complex(double, double)> tau,
                                    TauOrientation orientation,
                                    std::optional<SymbolClassParams> params = std::nullopt);

  /// sigma(xi, eta) = profile(xi - eta) with compactly supported profile.
  static Symbol diagonalKernel(std::function<Complex(double)> profile, double supportRadius,
                               std::optional<SymbolClassParams> params = std::nullopt);

  static Symbol general(std::function<Complex(double, double, double)> evalFn,
                        std::optional<SymbolClassParams> params = std::nullopt);

  static Symbol elementarySum(const GridSpec& grid, std::function<double(double)> psiHat,
                              std::function<double(double)> lWindow,
                              std::vector<ElementaryTerm> terms,
                              std::optional<SymbolClassParams> params = std::nullopt);

  Kind kind() const { return kind_; }
  bool xIndependent() const;

  Complex eval(double x, double xi, double eta) const;
  /// Requires an x-independent symbol.
  Complex evalMultiplier(double xi, double eta) const;

  const std::optional<SymbolClassParams>& classParams() const { return classParams_; }
  Symbol withClassParams(SymbolClassParams params) const;

  /// Present for symbols assembled from separable pieces; empty otherwise.
  std::span<const SeparableTerm> separableTerms() const { return separable_; }

  /// Profile and support radius of a DiagonalKernel symbol.
  const std::function<Complex(double)>& diagonalProfile() const;
  double diagonalSupportRadius() const;

  TauOrientation tauOrientation() const { return orientation_; }
  const std::function<Complex(double, double)>& tau() const;

private:
  Kind kind_ = Kind::Multiplier;
  std::function<Complex(double, double)> multiplier_;
  std::function<Complex(double, double)> tau_;
  TauOrientation orientation_ = TauOrientation::XiMinusEta;
  std::function<Complex(double)> diagonalProfile_;
  double diagonalRadius_ = 0.0;
  std::function<Complex(double, double, double)> general_;
  std::vector<SeparableTerm> separable_;
  std::optional<SymbolClassParams> classParams_;
  GridSpec termGrid_{};

  friend Symbol makeCounterexampleSymbol(const GridSpec&, int, int,
                                         const struct CounterexampleCutoff&);
  friend Symbol makeReducedSymbol(const std::vector<std::function<Complex(double)>>&,
                                  const LPFrame&);
};

/// Breakpoints of the even annular bump used by the lacunary symbol. The
/// defaults give support (5/7, 5/3) in |w| with plateau [5/6, 4/3].
struct CounterexampleCutoff {
  double innerZero = 5.0 / 7.0;
  double innerOne = 5.0 / 6.0;
  double outerOne = 4.0 / 3.0;
  double outerZero = 5.0 / 3.0;
  BumpProfile profile{};
};

/// Lacunary modulation-invariant symbol
///   sigma(x, xi, eta) = tau(x, eta - xi),
///   tau(x, u) = sum_{j=jMin}^{jMax} e^{-i 2^j x} psiHat(2^-j u),
/// where psiHat is the annular bump described by `cutoff`. The profile is
/// applied to eta - xi; that orientation is what makes T(f, psi1) collapse
/// to a single term per modulation.
Symbol makeCounterexampleSymbol(const GridSpec& grid, int jMin, int jMax,
                                const CounterexampleCutoff& cutoff = {});

/// sigma(x, xi, eta) = sum_j coeffs[j](2^j x) PsiHat(2^-j (xi - eta)).
Symbol makeReducedSymbol(const std::vector<std::function<Complex(double)>>& coeffs,
                         const LPFrame& frame);

/// Frequency substitution transpose of an x-independent symbol:
/// which = 1 gives sigma(-xi - eta, eta), which = 2 gives sigma(xi, -xi - eta).
Symbol transposeSymbol(const Symbol& sigma, int which);

/// Evaluation points for class-estimate fitting. xStep / freqStep are the
/// finite-difference steps (one grid spacing and one lattice spacing).
struct SamplePlan {
  std::vector<double> xs;
  std::vector<std::pair<double, double>> freqPoints;
  double xStep = 0.0;
  double freqStep = 0.0;
};

struct SamplePlanOptions {
  int shellSamples = 3;    ///< radii per dyadic shell
  int xCount = 4;
  int diagonalOffsets = 3; ///< extra near-diagonal offsets for directional weights
};

/// Log-uniform dyadic shells up to maxAbsFreq, plus near-diagonal refinement
/// when params.theta is set.
SamplePlan makeClassSamplePlan(const GridSpec& stepGrid, double maxAbsFreq,
                               const SymbolClassParams& params,
                               const SamplePlanOptions& options = {});

/// Fitted constants of |D^(a,b,g) sigma| <= C * W^(order + delta a - rho(b+g))
/// per derivative multi-order, over a sample plan. Reporting only; the fit
/// never fails.
struct ClassReport {
  SymbolClassParams params;
  int maxOrder = 0;

  struct Row {
    int alpha = 0;
    int beta = 0;
    int gamma = 0;
    double fitted = 0.0;
  };
  std::vector<Row> rows;

  /// max over shared rows of fitted / baseline.fitted (1 when no baseline).
  double maxViolationRatio = 1.0;

  const Row* find(int alpha, int beta, int gamma) const;
};

struct ClassCheckOptions {
  const ClassReport* baseline = nullptr;
};

/// Central 4th-order finite differences; maxOrder <= 4 (higher-order stencils
/// are numerically unreliable).
ClassReport checkClassEstimate(const Symbol& sigma, const SymbolClassParams& params,
                               int maxOrder, const SamplePlan& plan,
                               const ClassCheckOptions& options = {});

struct DecomposeOptions {
  int jMin = 0;
  int jMax = 3;
  std::int64_t lMin = -4;
  std::int64_t lMax = 4;
  int fourierOrder = 4;    ///< decay exponent M to verify
  int boxSamples = 32;     ///< per-axis samples of each (j,l) box
  int storedOrders = 8;    ///< keep gamma_{a,b} for |a|,|b| <= storedOrders
  int checkSamples = 48;   ///< frequency samples per axis for the residual
  bool requireCoverage = false;
};

/// sigma restricted to one (j, l) cell, expanded in a Fourier series on the
/// 2^j-scaled box; gamma indexed by (a, b).
struct ElementaryPiece {
  int level = 0;
  std::int64_t translation = 0;
  std::map<std::pair<int, int>, Complex> gamma;
  std::vector<Complex> coeffTable;   ///< gamma_{0,0} over sampled x
  double seriesResidual = 0.0;
};

struct ElementaryDecomposition {
  std::vector<ElementaryPiece> pieces;
  double residual = 0.0;              ///< max of partition and series residuals
  double partitionResidual = 0.0;
  double gammaDecayConstant = 0.0;    ///< fitted C in |gamma| <= C (1+|a|+|b|)^-M
  int fourierOrder = 4;
  std::vector<std::pair<double, double>> uncovered;
};

/// Localize sigma with PsiHat(2^-j (xi - eta)) times the unit-translate
/// window chi(l + 2^-j (xi + eta)) and expand each piece in a Fourier series.
/// The translate direction uses chi (which sums to 1 over integer shifts)
/// rather than the corona generator, so covered cells reproduce sigma
/// exactly up to the reported residual.
ElementaryDecomposition decomposeElementary(const Symbol& sigma, const LPFrame& frame,
                                            const DecomposeOptions& options = {});

}  // namespace bilinop
