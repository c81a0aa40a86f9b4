/* C interface to the lfmhop library: binary latent feature model
 * identifiability analysis and equivalence hopping.
 *
 * All functions return LFMHOP_OK (0) on success or a nonzero status code;
 * lfmhop_last_error() gives a thread-local message for the last failure.
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Matrices are dense doubles; operations that
 * need a binary matrix validate that every entry is exactly 0 or 1.
 */
#ifndef LFMHOP_H
#define LFMHOP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lfmhop_status {
  LFMHOP_OK = 0,
  LFMHOP_ERR_INVALID_ARGUMENT = 1,
  LFMHOP_ERR_DIMENSION = 2,
  LFMHOP_ERR_PARSE = 3,
  LFMHOP_ERR_RANK = 4,
  LFMHOP_ERR_DOMAIN = 5,
  LFMHOP_ERR_CONFIG = 6,
  LFMHOP_ERR_IO = 7,
  LFMHOP_ERR_LIMIT = 8,
  LFMHOP_ERR_GENERATION = 9,
  LFMHOP_ERR_NUMERIC_DRIFT = 10,
  LFMHOP_ERR_INTERNAL = 11
} lfmhop_status;

typedef struct lfmhop_matrix lfmhop_matrix;
typedef struct lfmhop_candidates lfmhop_candidates;

const char* lfmhop_version(void);
/* JSON map of library and per-module versions. Free with
 * lfmhop_string_free. */
lfmhop_status lfmhop_version_info(char** json_out);

/* Message for the most recent error on this thread ("" if none). */
const char* lfmhop_last_error(void);

void lfmhop_string_free(char* s);

/* ---- matrices ------------------------------------------------------- */

/* data is row-major rows*cols, or NULL for a zero matrix. */
lfmhop_status lfmhop_matrix_create(int64_t rows, int64_t cols,
                                   const double* data, lfmhop_matrix** out);
/* binary01 != 0 restricts tokens to "0"/"1". */
lfmhop_status lfmhop_matrix_read_csv(const char* path, int binary01,
                                     lfmhop_matrix** out);
lfmhop_status lfmhop_matrix_write_csv(const lfmhop_matrix* m,
                                      const char* path, int binary01);
int64_t lfmhop_matrix_rows(const lfmhop_matrix* m);
int64_t lfmhop_matrix_cols(const lfmhop_matrix* m);
lfmhop_status lfmhop_matrix_get(const lfmhop_matrix* m, int64_t i, int64_t j,
                                double* out);
/* buf must hold rows*cols doubles; filled row-major. */
lfmhop_status lfmhop_matrix_copy_data(const lfmhop_matrix* m, double* buf);
void lfmhop_matrix_free(lfmhop_matrix* m);

/* ---- core metrics ---------------------------------------------------- */

lfmhop_status lfmhop_residual(const lfmhop_matrix* x, const lfmhop_matrix* z,
                              const lfmhop_matrix* w, double* out);
lfmhop_status lfmhop_map_objective(const lfmhop_matrix* x,
                                   const lfmhop_matrix* z,
                                   const lfmhop_matrix* w, double tau,
                                   double* out);
lfmhop_status lfmhop_solve_w(const lfmhop_matrix* x, const lfmhop_matrix* z,
                             double tau, lfmhop_matrix** w_out);
/* allow_complements != 0 also matches complemented columns (diagnostic). */
lfmhop_status lfmhop_hamming_error(const lfmhop_matrix* z,
                                   const lfmhop_matrix* z_star,
                                   int allow_complements, double* out);
lfmhop_status lfmhop_regularizer(const lfmhop_matrix* w, double* out);
/* Binarity defect of an integer-valued matrix. */
lfmhop_status lfmhop_defect(const lfmhop_matrix* m, int64_t* out);

/* ---- candidate sampling ---------------------------------------------- */

/* config JSON: {"n_samples": 10000, "lambda": null (strict) | number,
 *               "seed": 0, "max_entry_abs": 8} */
lfmhop_status lfmhop_sample_candidates(const lfmhop_matrix* z,
                                       const char* config_json,
                                       lfmhop_candidates** out);
int64_t lfmhop_candidates_count(const lfmhop_candidates* c);
lfmhop_status lfmhop_candidates_to_json(const lfmhop_candidates* c,
                                        char** json_out);
void lfmhop_candidates_free(lfmhop_candidates* c);

/* Strict-sampler equivalence class count: sample columns, then count the
 * regular K-subsets. */
lfmhop_status lfmhop_count_classes(const lfmhop_matrix* z,
                                   const char* sampler_config_json,
                                   int64_t* count_out);

/* ---- enumeration / certification ------------------------------------- */

/* Exhaustive class report as JSON (counts, canonical transforms,
 * certification, per-class Hamming distance to the input). */
lfmhop_status lfmhop_enumerate(const lfmhop_matrix* z, int64_t max_n,
                               int64_t max_k, char** report_json);
lfmhop_status lfmhop_certify(const lfmhop_matrix* z, char** report_json);

/* ---- pairwise dependency analysis ------------------------------------ */

/* options JSON (optional, may be NULL):
 * {"unordered_pairs": true, "include_degenerate": false} */
lfmhop_status lfmhop_detect_pdc(const lfmhop_matrix* z,
                                const char* options_json, char** report_json);
/* declared_k < 0 infers K as max label index + 1. */
lfmhop_status lfmhop_read_multilabel(const char* path, int64_t declared_k,
                                     lfmhop_matrix** z_out);

/* ---- synthetic data --------------------------------------------------- */

/* spec JSON: {"generator": "iid"|"bias"|"pdc", "K":, "N":, "p":,
 *  "n_pairs":, "pair_kinds": ["pdc1",...], "image_side":, "patch_side":,
 *  "noise_sigma":, "nonnegative_features":, "rng_seed":}. The seed argument
 * overrides rng_seed. meta_json echoes the resolved spec. */
lfmhop_status lfmhop_synth(const char* spec_json, uint64_t seed,
                           lfmhop_matrix** x_out, lfmhop_matrix** z_out,
                           lfmhop_matrix** w_out, char** meta_json);
lfmhop_status lfmhop_synth_z(const char* spec_json, uint64_t seed,
                             lfmhop_matrix** z_out);

/* ---- baseline estimator ----------------------------------------------- */

/* config JSON: {"tau": 0.0, "max_outer_iters": 100,
 *  "z_update": "exhaustive_row"|"coordinate_flip", "restarts": 1,
 *  "seed": 0}. trace_out is a column of objective values. */
lfmhop_status lfmhop_fit(const lfmhop_matrix* x, int64_t k,
                         const char* config_json, lfmhop_matrix** z_out,
                         lfmhop_matrix** w_out, lfmhop_matrix** trace_out);

/* ---- equivalence hopper ------------------------------------------------ */

/* config JSON: {"tau":, "gamma":, "beta": null (greedy) | number,
 *  "iterations":, "resample_every":, "det_tolerance":, "refresh_every":,
 *  "seed":, "pi": [..] (optional), "sampler": {...}}.
 * trace_out columns: iteration, cost, defect, prior_w, column.
 * stats_json: {"best_cost":, "clamped":, "residual_before":,
 *  "residual_after":, "row_scans_in_loop":, "empty_neighbor_events":,
 *  "warnings": [...]}. */
lfmhop_status lfmhop_hop(const lfmhop_matrix* z_hat,
                         const lfmhop_matrix* w_hat, const lfmhop_matrix* x,
                         const char* config_json, lfmhop_matrix** u_out,
                         lfmhop_matrix** z_out, lfmhop_matrix** w_out,
                         lfmhop_matrix** trace_out, char** stats_json);

#ifdef __cplusplus
}
#endif

#endif /* LFMHOP_H */
