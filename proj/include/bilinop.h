/* C interface to the bilinop shared library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return BILINOP_OK on success; on failure they return a status
 * code and leave a thread-local message readable via bilinop_last_error().
 * Complex sample buffers are interleaved re,im pairs of length 2N.
 */
#ifndef BILINOP_H
#define BILINOP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bilinop_status {
  BILINOP_OK = 0,
  BILINOP_ERROR_INVALID_ARGUMENT = 1,
  BILINOP_ERROR_GRID_MISMATCH = 2,
  BILINOP_ERROR_ALIASING_RISK = 3,
  BILINOP_ERROR_INVALID_EXPONENT = 4,
  BILINOP_ERROR_INDEX_OUT_OF_RANGE = 5,
  BILINOP_ERROR_NYQUIST_VIOLATION = 6,
  BILINOP_ERROR_BAD_CUTOFF_SPEC = 7,
  BILINOP_ERROR_GRID_TOO_SMALL = 8,
  BILINOP_ERROR_STRATEGY_MISMATCH = 9,
  BILINOP_ERROR_NOT_MULTIPLIER = 10,
  BILINOP_ERROR_COVERAGE_GAP = 11,
  BILINOP_ERROR_TRUNCATION_TOO_AGGRESSIVE = 12,
  BILINOP_ERROR_PRECONDITION = 13,
  BILINOP_ERROR_IO = 14,
  BILINOP_ERROR_INTERNAL = 15
} bilinop_status;

typedef enum bilinop_strategy {
  BILINOP_STRATEGY_AUTO = 0,
  BILINOP_STRATEGY_DENSE = 1,
  BILINOP_STRATEGY_SPARSE = 2,
  BILINOP_STRATEGY_CONVOLUTION = 3,
  BILINOP_STRATEGY_QUADRATURE = 4
} bilinop_strategy;

typedef struct bilinop_grid bilinop_grid;
typedef struct bilinop_function bilinop_function;
typedef struct bilinop_frame bilinop_frame;
typedef struct bilinop_theta bilinop_theta;
typedef struct bilinop_symbol bilinop_symbol;

const char* bilinop_version(void);
/* Message for the most recent failure on this thread; empty if none. */
const char* bilinop_last_error(void);

/* --- grid ------------------------------------------------------------- */
bilinop_status bilinop_grid_create(int64_t n, double scale_l, bilinop_grid** out);
void bilinop_grid_destroy(bilinop_grid* grid);
int64_t bilinop_grid_size(const bilinop_grid* grid);
double bilinop_grid_scale(const bilinop_grid* grid);
double bilinop_grid_spacing(const bilinop_grid* grid);
double bilinop_grid_nyquist(const bilinop_grid* grid);

/* --- sampled functions ------------------------------------------------ */
bilinop_status bilinop_function_create(const bilinop_grid* grid, const double* interleaved,
                                       bilinop_function** out);
/* Band-limited synthesis from `count` (lattice index, re, im) coefficients. */
bilinop_status bilinop_function_synthesize(const bilinop_grid* grid, const int64_t* indices,
                                           const double* interleaved, int64_t count,
                                           bilinop_function** out);
bilinop_status bilinop_function_read(const char* path, bilinop_function** out);
bilinop_status bilinop_function_write(const bilinop_function* f, const char* path);
int64_t bilinop_function_size(const bilinop_function* f);
bilinop_status bilinop_function_values(const bilinop_function* f, double* interleaved);
void bilinop_function_destroy(bilinop_function* f);

bilinop_status bilinop_lebesgue_norm(const bilinop_function* f, double p, double* out);
bilinop_status bilinop_pointwise_product(const bilinop_function* f, const bilinop_function* g,
                                         bilinop_function** out);
bilinop_status bilinop_pairing(const bilinop_function* u, const bilinop_function* v,
                               double* out_re, double* out_im);

/* --- frames ----------------------------------------------------------- */
bilinop_status bilinop_frame_create(const bilinop_grid* grid, int smooth_order,
                                    bilinop_frame** out);
void bilinop_frame_destroy(bilinop_frame* frame);
int bilinop_frame_kmax(const bilinop_frame* frame);
double bilinop_frame_phi_hat(const bilinop_frame* frame, double xi);
double bilinop_frame_psi_hat(const bilinop_frame* frame, double xi);
bilinop_status bilinop_sobolev_norm(const bilinop_function* f, const bilinop_frame* frame,
                                    double s, double p, double* out);

bilinop_status bilinop_theta_create(int smooth_order, bilinop_theta** out);
double bilinop_theta_eval(const bilinop_theta* theta, double omega);
void bilinop_theta_destroy(bilinop_theta* theta);

/* --- operators --------------------------------------------------------- */
bilinop_status bilinop_classical_paraproduct(const bilinop_function* b,
                                             const bilinop_function* f,
                                             const bilinop_frame* frame,
                                             bilinop_function** out);
bilinop_status bilinop_improved_paraproduct(const bilinop_function* b,
                                            const bilinop_function* f,
                                            const bilinop_theta* theta,
                                            bilinop_function** out);
bilinop_status bilinop_multiplication_defect(const bilinop_function* f,
                                             const bilinop_function* g,
                                             const bilinop_theta* theta,
                                             bilinop_function** out);

/* Lacunary symbol of the unboundedness construction on this grid. */
bilinop_status bilinop_counterexample_symbol(const bilinop_grid* grid, int j_min, int j_max,
                                             int smooth_order, bilinop_symbol** out);
bilinop_status bilinop_apply_bilinear(const bilinop_symbol* sigma, const bilinop_function* f,
                                      const bilinop_function* g, bilinop_strategy strategy,
                                      bilinop_function** out);
void bilinop_symbol_destroy(bilinop_symbol* sigma);

/* --- experiments -------------------------------------------------------- */
/* name: "lp-check" | "counterexample" | "norm-probe" | "paraproduct" | "bench".
 * config_json may be NULL or "{}" for defaults. The returned report string
 * must be released with bilinop_string_free. */
bilinop_status bilinop_run_experiment(const char* name, const char* config_json,
                                      char** report_json);
/* Report converted to long-format CSV rows. */
bilinop_status bilinop_report_to_csv(const char* report_json, char** csv);
void bilinop_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* BILINOP_H */
