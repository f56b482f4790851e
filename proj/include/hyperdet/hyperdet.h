/*
 * hyperdet C API.
 *
 * Computes real pairs (D, R) with
 *     p = det(t*I + x*D + y*R),  D diagonal, R symmetric,
 * for hyperbolic ternary forms p, found by tracking the Nuij path.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return an hd_status; on failure the
 * message of the most recent error on the calling thread is available from
 * hd_last_error(). Strings returned through char** out-parameters are
 * allocated by the library and released with hd_string_free().
 */
#ifndef HYPERDET_H
#define HYPERDET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(HYPERDET_BUILDING)
#define HD_API __attribute__((visibility("default")))
#else
#define HD_API
#endif

typedef enum hd_status {
  HD_OK = 0,
  HD_ERR_INVALID_ARGUMENT,
  HD_ERR_ZERO_DIRECTION,
  HD_ERR_DEGENERATE_LEADING_COEFFICIENT,
  HD_ERR_NOT_REAL,
  HD_ERR_DEGREE_MISMATCH,
  HD_ERR_ENDPOINT_NOT_STRICT,
  HD_ERR_ILL_CONDITIONED_NODES,
  HD_ERR_NON_REAL_ROOTS,
  HD_ERR_BASIS_CONDITIONING_FAILED,
  HD_ERR_SINGULAR_JACOBIAN,
  HD_ERR_START_NOT_STRICT,
  HD_ERR_NOT_HYPERBOLIC,
  HD_ERR_LEADING_COEFFICIENT_ZERO,
  HD_ERR_SOLVE_FAILED,
  HD_ERR_DEGENERATE_D,
  HD_ERR_REPEATED_D,
  HD_ERR_INTERNAL_INCONSISTENCY,
  HD_ERR_PARSE,
  HD_ERR_INHOMOGENEOUS_INPUT,
  HD_ERR_IO,
  HD_ERR_INTERNAL
} hd_status;

typedef enum hd_path_kind { HD_PATH_ORIGINAL = 0, HD_PATH_RANDOMIZED = 1 } hd_path_kind;
typedef enum hd_detour_mode { HD_DETOUR_OFF = 0, HD_DETOUR_AUTO = 1, HD_DETOUR_ALWAYS = 2 } hd_detour_mode;
typedef enum hd_predictor { HD_PREDICTOR_EULER = 0, HD_PREDICTOR_RK4 = 1 } hd_predictor;

typedef struct hd_poly hd_poly;       /* homogeneous form in (t, x, y) */
typedef struct hd_pair hd_pair;       /* pair (D, R) */
typedef struct hd_rep hd_rep;         /* solver result */
typedef struct hd_options hd_options; /* solver configuration */
typedef struct hd_cache hd_cache;     /* phase-1 endpoint cache */

typedef struct hd_hyperbolicity {
  int is_hyperbolic;
  int is_strict;
  double max_imag;
  double min_gap;
  double witness_u;
  double witness_v;
} hd_hyperbolicity;

HD_API const char* hd_version(void);
HD_API const char* hd_last_error(void);
HD_API const char* hd_status_name(hd_status status);
HD_API void hd_string_free(char* str);

/* Polynomials. JSON: {"degree": d, "terms": [{"exp": [i,j,k], "re": a, "im": b}]}. */
HD_API hd_status hd_poly_from_json(const char* json, hd_poly** out);
HD_API hd_status hd_poly_parse_text(const char* text, hd_poly** out);
/* Accepts either JSON (leading '{') or a text expression. */
HD_API hd_status hd_poly_read(const char* source, hd_poly** out);
HD_API hd_status hd_poly_to_json(const hd_poly* poly, char** out_json);
HD_API int hd_poly_degree(const hd_poly* poly);
HD_API void hd_poly_free(hd_poly* poly);

/* Pairs. JSON: {"d": d, "diag": [...], "sym": [[...], ...]}. */
HD_API hd_status hd_pair_from_json(const char* json, hd_pair** out);
HD_API hd_status hd_pair_to_json(const hd_pair* pair, char** out_json);
HD_API void hd_pair_free(hd_pair* pair);

/* det(t*I + x*D + y*R) as a polynomial. */
HD_API hd_status hd_forward(const hd_pair* pair, hd_poly** out);

/* Fixed endpoint F_1(t^d). For the randomized path the linear forms are
 * drawn from `seed`; when out_forms_json is non-null it receives
 * {"forms": [[a, b], ...]} (or null for the original path). */
HD_API hd_status hd_endpoint(int degree, hd_path_kind kind, uint64_t seed, hd_poly** out,
                             char** out_forms_json);

/* Sampled hyperbolicity certificate; n_dirs <= 0 and tol <= 0 select the
 * defaults (64 directions, 1e-7). */
HD_API hd_status hd_check_hyperbolic(const hd_poly* poly, int n_dirs, double tol, hd_hyperbolicity* out);

/* Solver options. */
HD_API hd_status hd_options_create(hd_options** out);
HD_API void hd_options_free(hd_options* options);
HD_API hd_status hd_options_set_path(hd_options* options, hd_path_kind kind);
HD_API hd_status hd_options_set_forms_json(hd_options* options, const char* forms_json);
HD_API hd_status hd_options_set_seed(hd_options* options, uint64_t seed);
HD_API uint64_t hd_options_get_seed(const hd_options* options);
HD_API hd_status hd_options_set_detour(hd_options* options, hd_detour_mode mode);
HD_API hd_status hd_options_set_detour_point(hd_options* options, double re, double im);
HD_API hd_status hd_options_set_perturb_eps(hd_options* options, double eps);
HD_API hd_status hd_options_set_max_retries(hd_options* options, int retries);
HD_API hd_status hd_options_set_parallel_attempts(hd_options* options, int attempts);
HD_API hd_status hd_options_set_newton_tol(hd_options* options, double tol);
HD_API hd_status hd_options_set_max_steps(hd_options* options, int steps);
HD_API hd_status hd_options_set_h_init(hd_options* options, double h);
HD_API hd_status hd_options_set_h_min(hd_options* options, double h);
HD_API hd_status hd_options_set_predictor(hd_options* options, hd_predictor predictor);
HD_API hd_status hd_options_to_json(const hd_options* options, char** out_json);

/* Endpoint cache; directory may be null or empty for a memory-only cache. */
HD_API hd_status hd_cache_create(const char* directory, hd_cache** out);
HD_API void hd_cache_free(hd_cache* cache);

/* Full two-phase solve. cache may be null. */
HD_API hd_status hd_solve(const hd_poly* poly, const hd_options* options, hd_cache* cache, hd_rep** out);

/* {"D", "R", "residual", "is_real", "path_stats", ...}; when options is
 * non-null "seed" and "config" are added. */
HD_API hd_status hd_rep_to_json(const hd_rep* rep, const hd_options* options, char** out_json);
HD_API hd_status hd_rep_from_json(const char* json, hd_rep** out);
HD_API double hd_rep_residual(const hd_rep* rep);
HD_API int hd_rep_is_real(const hd_rep* rep);
HD_API int hd_rep_degree(const hd_rep* rep);
HD_API hd_status hd_rep_pair(const hd_rep* rep, hd_pair** out);
HD_API void hd_rep_free(hd_rep* rep);

/* Max coefficient distance between det(tI + xD + yR) and p (normalized). */
HD_API hd_status hd_verify(const hd_poly* poly, const hd_rep* rep, double* out_residual);

/* Closed-form conic fiber: {"solutions": [pair, ...]}. */
HD_API hd_status hd_oracle_conic(const hd_poly* poly, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* HYPERDET_H */
