/* C interface of the narrowpatch library.
 *
 * Every call returns an np_status; on failure np_last_error() holds a message
 * for the calling thread. Objects are opaque and released with the matching
 * *_free function. Strings returned through char** are released with
 * np_string_free. Indices are 0-based.
 */
#ifndef NARROWPATCH_H
#define NARROWPATCH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define NP_API __declspec(dllexport)
#else
#define NP_API __attribute__((visibility("default")))
#endif

typedef enum np_status {
  NP_OK = 0,
  NP_ERR_INVALID_ARGUMENT = 1,
  NP_ERR_DOMAIN = 2,
  NP_ERR_SINGULARITY = 3,
  NP_ERR_DEGENERATE = 4,
  NP_ERR_NUMERICAL = 5,
  NP_ERR_ASSEMBLY = 6,
  NP_ERR_POLE = 7,
  NP_ERR_INADMISSIBLE = 8,
  NP_ERR_RESONANCE = 9,
  NP_ERR_ROOT = 10,
  NP_ERR_SEPARATION = 11,
  NP_ERR_UNSUPPORTED = 12,
  NP_ERR_SCHEMA = 13,
  NP_ERR_OVERLAP = 14,
  NP_ERR_TIMEOUT = 15,
  NP_ERR_RESOLUTION = 16,
  NP_ERR_IO = 17,
  NP_ERR_INTERNAL = 18
} np_status;

typedef struct np_scene np_scene;
typedef struct np_basis np_basis;
typedef struct np_result np_result;

NP_API const char* np_version(void);
NP_API const char* np_status_name(np_status s);
NP_API const char* np_last_error(void);
NP_API void np_string_free(char* s);

/* Scenes */
NP_API np_status np_scene_load(const char* path, np_scene** out);
NP_API np_status np_scene_parse(const char* json, np_scene** out);
NP_API np_status np_scene_to_json(const np_scene* s, char** out);
NP_API np_status np_scene_counts(const np_scene* s, int* patches, int* targets);
/* Plotting box: the domain bounding box, or three times it for exterior domains. */
NP_API np_status np_scene_bbox(const np_scene* s, double* x0, double* x1, double* y0, double* y1);
NP_API void np_scene_free(np_scene* s);

/* Interval Steklov basis; K eigenpairs, truncation M. cache_dir may be NULL
 * (then $NARROWPATCH_CACHE_DIR is used when set). */
NP_API np_status np_basis_build(int K, int M, const char* cache_dir, np_basis** out);
NP_API np_status np_basis_load(const char* path, np_basis** out);
NP_API np_status np_basis_save(const np_basis* b, const char* path);
NP_API np_status np_basis_size(const np_basis* b, int* K, int* M);
NP_API np_status np_basis_mu(const np_basis* b, int k, double* out);
NP_API np_status np_basis_psi_inf(const np_basis* b, int k, double* out);
NP_API np_status np_basis_psi(const np_basis* b, int k, double y1, double y2, double* out);
NP_API void np_basis_free(np_basis* b);

/* C(mu) with the tail correction; even_modes < 0 uses every even mode. */
NP_API np_status np_cfun(const np_basis* b, double mu, int even_modes, int tail, double* out);
NP_API np_status np_cfun_exterior_disk(double mu, double* out);
NP_API np_status np_g_dirichlet(double y1, double y2, double* out);
NP_API np_status np_g_robin(const np_basis* b, double mu, double y1, double y2, double* out);

/* Solvers. A NULL basis is replaced by the default cached basis when one is
 * needed. Results expose named scalars and vectors, warnings, an optional
 * field evaluator and a JSON rendering. */
NP_API np_status np_splitting(const np_scene* s, const np_basis* b, int target, np_result** out);
NP_API np_status np_mfrt(const np_scene* s, const np_basis* b, np_result** out);
NP_API np_status np_green_matrix(const np_scene* s, np_result** out);
NP_API np_status np_sn_spectrum(const np_scene* s, const np_basis* b, np_result** out);
NP_API np_status np_snd(const np_scene* s, const np_basis* b, int roots, np_result** out);
/* mode: 0 discrete, 1 large-N, 2 low-order */
NP_API np_status np_snd_equally_spaced(int N, double eps, double l1, int mode, double a_emp, double* out);
NP_API np_status np_interior_splitting(const np_scene* s, int target, np_result** out);
NP_API np_status np_interior_snd(const np_scene* s, np_result** out);
NP_API np_status np_basis_table(const np_basis* b, int taylor_terms, np_result** out);
NP_API np_status np_kappa_table(int N, double a_emp, np_result** out);

/* Reference solvers on the unit disk. */
NP_API np_status np_oracle_splitting(const np_scene* s, int target, int nodes_per_patch, np_result** out);
NP_API np_status np_oracle_mfrt(const np_scene* s, int nodes_per_patch, np_result** out);
NP_API np_status np_oracle_steklov(const np_scene* s, int count, int nodes_per_patch, np_result** out);
NP_API np_status np_oracle_annulus(double inner_radius, int count, np_result** out);
/* Circle targets of the scene as holes; Steklov holes give the principal eigenvalue. */
NP_API np_status np_oracle_circles(const np_scene* s, int target, np_result** out);
/* start_xy: n_start points (x0, y0, x1, y1, ...); n_start = 0 samples the disk uniformly. */
NP_API np_status np_mc_splitting(const np_scene* s, int target, const double* start_xy, size_t n_start,
                                 unsigned long long walkers, unsigned long long seed, double dt_max,
                                 np_result** out);
NP_API np_status np_mc_mfpt(const np_scene* s, const double* start_xy, size_t n_start, unsigned long long walkers,
                            unsigned long long seed, double dt_max, np_result** out);

/* Result access */
NP_API np_status np_result_scalar(const np_result* r, const char* key, double* out);
NP_API np_status np_result_vector(const np_result* r, const char* key, const double** data, size_t* n);
NP_API size_t np_result_warning_count(const np_result* r);
NP_API const char* np_result_warning(const np_result* r, size_t i);
NP_API int np_result_has_field(const np_result* r);
/* Outside the domain and at a source point the value is NaN. cap clamps to [0, 1]. */
NP_API np_status np_result_eval(const np_result* r, double x, double y, int cap, double* out);
/* Row-major grid over [x0, x1] x [y0, y1], nx * ny values into out. */
NP_API np_status np_result_eval_grid(const np_result* r, double x0, double x1, double y0, double y1, int nx, int ny,
                                     int cap, double* out);
NP_API np_status np_result_to_json(const np_result* r, char** out);
NP_API void np_result_free(np_result* r);

#ifdef __cplusplus
}
#endif

#endif
