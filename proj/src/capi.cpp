#include "bilinop.h"

#include <cstring>
#include <string>

#include "bilinop/harness.hpp"
#include "bilinop/io.hpp"
#include "bilinop/operators.hpp"
#include "bilinop/version.hpp"

namespace {

thread_local std::string g_lastError;

bilinop_status statusFromCode(bilinop::ErrorCode code) {
  using bilinop::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return BILINOP_ERROR_INVALID_ARGUMENT;
    case ErrorCode::GridMismatch: return BILINOP_ERROR_GRID_MISMATCH;
    case ErrorCode::AliasingRisk: return BILINOP_ERROR_ALIASING_RISK;
    case ErrorCode::InvalidExponent: return BILINOP_ERROR_INVALID_EXPONENT;
    case ErrorCode::IndexOutOfRange: return BILINOP_ERROR_INDEX_OUT_OF_RANGE;
    case ErrorCode::NyquistViolation: return BILINOP_ERROR_NYQUIST_VIOLATION;
    case ErrorCode::BadCutoffSpec: return BILINOP_ERROR_BAD_CUTOFF_SPEC;
    case ErrorCode::GridTooSmall: return BILINOP_ERROR_GRID_TOO_SMALL;
    case ErrorCode::StrategyMismatch: return BILINOP_ERROR_STRATEGY_MISMATCH;
    case ErrorCode::NotMultiplier: return BILINOP_ERROR_NOT_MULTIPLIER;
    case ErrorCode::CoverageGap: return BILINOP_ERROR_COVERAGE_GAP;
    case ErrorCode::TruncationTooAggressive: return BILINOP_ERROR_TRUNCATION_TOO_AGGRESSIVE;
    case ErrorCode::Precondition: return BILINOP_ERROR_PRECONDITION;
    case ErrorCode::Io: return BILINOP_ERROR_IO;
    case ErrorCode::Internal: return BILINOP_ERROR_INTERNAL;
  }
  return BILINOP_ERROR_INTERNAL;
}

template <class F>
bilinop_status guarded(F&& body) {
  try {
    body();
    g_lastError.clear();
    return BILINOP_OK;
  } catch (const bilinop::Error& e) {
    g_lastError = e.what();
    return statusFromCode(e.code());
  } catch (const std::exception& e) {
    g_lastError = e.what();
    return BILINOP_ERROR_INTERNAL;
  } catch (...) {
    g_lastError = "unknown error";
    return BILINOP_ERROR_INTERNAL;
  }
}

char* copyString(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct bilinop_grid {
  bilinop::GridSpec spec;
};

struct bilinop_function {
  bilinop::SampledFunction fn;
};

struct bilinop_frame {
  bilinop::LPFrame frame;
};

struct bilinop_theta {
  bilinop::ThetaProfile theta;
};

struct bilinop_symbol {
  bilinop::Symbol symbol;
};

extern "C" {

const char* bilinop_version(void) { return bilinop::kVersion; }

const char* bilinop_last_error(void) { return g_lastError.c_str(); }

bilinop_status bilinop_grid_create(int64_t n, double scale_l, bilinop_grid** out) {
  return guarded([&] {
    bilinop::require(out != nullptr, bilinop::ErrorCode::InvalidArgument, "null output pointer");
    *out = new bilinop_grid{bilinop::GridSpec(n, scale_l)};
  });
}

void bilinop_grid_destroy(bilinop_grid* grid) { delete grid; }

int64_t bilinop_grid_size(const bilinop_grid* grid) { return grid ? grid->spec.n : 0; }

double bilinop_grid_scale(const bilinop_grid* grid) { return grid ? grid->spec.scaleL : 0.0; }

double bilinop_grid_spacing(const bilinop_grid* grid) {
  return grid ? grid->spec.spacing() : 0.0;
}

double bilinop_grid_nyquist(const bilinop_grid* grid) {
  return grid ? grid->spec.nyquist() : 0.0;
}

bilinop_status bilinop_function_create(const bilinop_grid* grid, const double* interleaved,
                                       bilinop_function** out) {
  return guarded([&] {
    bilinop::require(grid && interleaved && out, bilinop::ErrorCode::InvalidArgument,
                     "null argument");
    std::vector<bilinop::Complex> values(static_cast<std::size_t>(grid->spec.n));
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = {interleaved[2 * i], interleaved[2 * i + 1]};
    }
    *out = new bilinop_function{bilinop::SampledFunction(grid->spec, std::move(values))};
  });
}

bilinop_status bilinop_function_synthesize(const bilinop_grid* grid, const int64_t* indices,
                                           const double* interleaved, int64_t count,
                                           bilinop_function** out) {
  return guarded([&] {
    bilinop::require(grid && indices && interleaved && out && count >= 0,
                     bilinop::ErrorCode::InvalidArgument, "null argument");
    std::map<int64_t, bilinop::Complex> entries;
    for (int64_t i = 0; i < count; ++i) {
      entries[indices[i]] = {interleaved[2 * i], interleaved[2 * i + 1]};
    }
    *out = new bilinop_function{
        bilinop::synthesize(bilinop::SpectralCoefficients::sparse(grid->spec, std::move(entries)))};
  });
}

bilinop_status bilinop_function_read(const char* path, bilinop_function** out) {
  return guarded([&] {
    bilinop::require(path && out, bilinop::ErrorCode::InvalidArgument, "null argument");
    *out = new bilinop_function{bilinop::readSampledFunction(path)};
  });
}

bilinop_status bilinop_function_write(const bilinop_function* f, const char* path) {
  return guarded([&] {
    bilinop::require(f && path, bilinop::ErrorCode::InvalidArgument, "null argument");
    bilinop::writeSampledFunction(f->fn, path);
  });
}

int64_t bilinop_function_size(const bilinop_function* f) { return f ? f->fn.size() : 0; }

bilinop_status bilinop_function_values(const bilinop_function* f, double* interleaved) {
  return guarded([&] {
    bilinop::require(f && interleaved, bilinop::ErrorCode::InvalidArgument, "null argument");
    const auto vals = f->fn.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      interleaved[2 * i] = vals[i].real();
      interleaved[2 * i + 1] = vals[i].imag();
    }
  });
}

void bilinop_function_destroy(bilinop_function* f) { delete f; }

bilinop_status bilinop_lebesgue_norm(const bilinop_function* f, double p, double* out) {
  return guarded([&] {
    bilinop::require(f && out, bilinop::ErrorCode::InvalidArgument, "null argument");
    *out = bilinop::lebesgueNorm(f->fn, p);
  });
}

bilinop_status bilinop_pointwise_product(const bilinop_function* f, const bilinop_function* g,
                                         bilinop_function** out) {
  return guarded([&] {
    bilinop::require(f && g && out, bilinop::ErrorCode::InvalidArgument, "null argument");
    *out = new bilinop_function{bilinop::pointwiseProduct(f->fn, g->fn)};
  });
}

bilinop_status bilinop_pairing(const bilinop_function* u, const bilinop_function* v,
                               double* out_re, double* out_im) {
  return guarded([&] {
    bilinop::require(u && v && out_re && out_im, bilinop::ErrorCode::InvalidArgument,
                     "null argument");
    const bilinop::Complex r = bilinop::pairing(u->fn, v->fn);
    *out_re = r.real();
    *out_im = r.imag();
  });
}

bilinop_status bilinop_frame_create(const bilinop_grid* grid, int smooth_order,
                                    bilinop_frame** out) {
  return guarded([&] {
    bilinop::require(grid && out, bilinop::ErrorCode::InvalidArgument, "null argument");
    *out = new bilinop_frame{bilinop::buildLPFrame(grid->spec, bilinop::BumpProfile(smooth_order))};
  });
}

void bilinop_frame_destroy(bilinop_frame* frame) { delete frame; }

int bilinop_frame_kmax(const bilinop_frame* frame) { return frame ? frame->frame.kMax() : 0; }

double bilinop_frame_phi_hat(const bilinop_frame* frame, double xi) {
  return frame ? frame->frame.phiHat(xi) : 0.0;
}

double bilinop_frame_psi_hat(const bilinop_frame* frame, double xi) {
  return frame ? frame->frame.psiHat(xi) : 0.0;
}

bilinop_status bilinop_sobolev_norm(const bilinop_function* f, const bilinop_frame* frame,
                                    double s, double p, double* out) {
  return guarded([&] {
    bilinop::require(f && frame && out, bilinop::ErrorCode::InvalidArgument, "null argument");
    *out = bilinop::sobolevNorm(f->fn, frame->frame, s, p);
  });
}

bilinop_status bilinop_theta_create(int smooth_order, bilinop_theta** out) {
  return guarded([&] {
    bilinop::require(out != nullptr, bilinop::ErrorCode::InvalidArgument, "null output pointer");
    *out = new bilinop_theta{bilinop::buildTheta(bilinop::BumpProfile(smooth_order))};
  });
}

double bilinop_theta_eval(const bilinop_theta* theta, double omega) {
  return theta ? theta->theta(omega) : 0.0;
}

void bilinop_theta_destroy(bilinop_theta* theta) { delete theta; }

bilinop_status bilinop_classical_paraproduct(const bilinop_function* b,
                                             const bilinop_function* f,
                                             const bilinop_frame* frame,
                                             bilinop_function** out) {
  return guarded([&] {
    bilinop::require(b && f && frame && out, bilinop::ErrorCode::InvalidArgument,
                     "null argument");
    *out = new bilinop_function{bilinop::classicalParaproduct(b->fn, f->fn, frame->frame)};
  });
}

bilinop_status bilinop_improved_paraproduct(const bilinop_function* b,
                                            const bilinop_function* f,
                                            const bilinop_theta* theta,
                                            bilinop_function** out) {
  return guarded([&] {
    bilinop::require(b && f && theta && out, bilinop::ErrorCode::InvalidArgument,
                     "null argument");
    *out = new bilinop_function{bilinop::improvedParaproduct(b->fn, f->fn, theta->theta)};
  });
}

bilinop_status bilinop_multiplication_defect(const bilinop_function* f,
                                             const bilinop_function* g,
                                             const bilinop_theta* theta,
                                             bilinop_function** out) {
  return guarded([&] {
    bilinop::require(f && g && theta && out, bilinop::ErrorCode::InvalidArgument,
                     "null argument");
    *out = new bilinop_function{bilinop::multiplicationDefect(f->fn, g->fn, theta->theta)};
  });
}

bilinop_status bilinop_counterexample_symbol(const bilinop_grid* grid, int j_min, int j_max,
                                             int smooth_order, bilinop_symbol** out) {
  return guarded([&] {
    bilinop::require(grid && out, bilinop::ErrorCode::InvalidArgument, "null argument");
    bilinop::CounterexampleCutoff cutoff;
    cutoff.profile = bilinop::BumpProfile(smooth_order);
    *out = new bilinop_symbol{
        bilinop::makeCounterexampleSymbol(grid->spec, j_min, j_max, cutoff)};
  });
}

bilinop_status bilinop_apply_bilinear(const bilinop_symbol* sigma, const bilinop_function* f,
                                      const bilinop_function* g, bilinop_strategy strategy,
                                      bilinop_function** out) {
  return guarded([&] {
    bilinop::require(sigma && f && g && out, bilinop::ErrorCode::InvalidArgument,
                     "null argument");
    bilinop::ApplyOptions opts;
    switch (strategy) {
      case BILINOP_STRATEGY_AUTO: opts.strategy = bilinop::EvalStrategy::Auto; break;
      case BILINOP_STRATEGY_DENSE: opts.strategy = bilinop::EvalStrategy::DenseAccumulate; break;
      case BILINOP_STRATEGY_SPARSE: opts.strategy = bilinop::EvalStrategy::SparseAccumulate; break;
      case BILINOP_STRATEGY_CONVOLUTION:
        opts.strategy = bilinop::EvalStrategy::DiagonalConvolution;
        break;
      case BILINOP_STRATEGY_QUADRATURE:
        opts.strategy = bilinop::EvalStrategy::PerPointQuadrature;
        break;
      default:
        throw bilinop::Error(bilinop::ErrorCode::InvalidArgument, "unknown strategy value");
    }
    *out = new bilinop_function{bilinop::applyBilinear(sigma->symbol, f->fn, g->fn, opts)};
  });
}

void bilinop_symbol_destroy(bilinop_symbol* sigma) { delete sigma; }

bilinop_status bilinop_run_experiment(const char* name, const char* config_json,
                                      char** report_json) {
  return guarded([&] {
    bilinop::require(name && report_json, bilinop::ErrorCode::InvalidArgument, "null argument");
    bilinop::harness::Json config = bilinop::harness::Json::object();
    if (config_json && config_json[0] != '\0') {
      config = bilinop::harness::Json::parse(config_json, nullptr, false);
      bilinop::require(!config.is_discarded(), bilinop::ErrorCode::InvalidArgument,
                       "config is not valid JSON");
    }
    const bilinop::harness::Json report = bilinop::harness::runExperiment(name, config);
    *report_json = copyString(report.dump(2));
  });
}

bilinop_status bilinop_report_to_csv(const char* report_json, char** csv) {
  return guarded([&] {
    bilinop::require(report_json && csv, bilinop::ErrorCode::InvalidArgument, "null argument");
    const bilinop::harness::Json report =
        bilinop::harness::Json::parse(report_json, nullptr, false);
    bilinop::require(!report.is_discarded(), bilinop::ErrorCode::InvalidArgument,
                     "report is not valid JSON");
    *csv = copyString(bilinop::harness::toCsv(report));
  });
}

void bilinop_string_free(char* s) { delete[] s; }

}  // extern "C"
