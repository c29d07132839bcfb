/* C interface to the difflab library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a difflab_status; on failure a message for the
 * calling thread is available from difflab_last_error() until the next call.
 * Strings handed out through char** parameters are owned by the caller and
 * released with difflab_string_free().
 *
 * Models are described as JSON objects, e.g.
 *   {"name": "poisson", "rho": 1, "dim": 1}
 *   {"name": "renewal", "waiting": {"kind": "discrete", "atoms": [["1/2", "1/2"], ["3/2", "1/2"]]}}
 *   {"name": "dyson", "beta": 2, "n": 2048, "keep": 0.1}
 */
#ifndef DIFFLAB_H
#define DIFFLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(DIFFLAB_BUILDING_LIBRARY)
#define DIFFLAB_API __attribute__((visibility("default")))
#else
#define DIFFLAB_API
#endif

typedef enum difflab_status {
  DIFFLAB_OK = 0,
  DIFFLAB_INVALID_ARGUMENT = 1,
  DIFFLAB_WINDOW_TOO_LARGE = 2,
  DIFFLAB_NEGATIVE_ARGUMENT = 3,
  DIFFLAB_NO_CONVERGENCE = 4,
  DIFFLAB_DIMENSION_TOO_LARGE = 5,
  DIFFLAB_ATOM_LOCATION = 6,
  DIFFLAB_SINGULAR_POINT = 7,
  DIFFLAB_TOO_FEW_POINTS = 8,
  DIFFLAB_GRID_MISMATCH = 9,
  DIFFLAB_ALL_POINTS_EXCLUDED = 10,
  DIFFLAB_CONFIG = 11,
  DIFFLAB_IO = 12,
  DIFFLAB_INTERNAL = 99
} difflab_status;

typedef struct difflab_pointset difflab_pointset;
typedef struct difflab_grid difflab_grid;
typedef struct difflab_report difflab_report;

DIFFLAB_API const char* difflab_version(void);
DIFFLAB_API const char* difflab_status_name(difflab_status status);
/* Message of the last failure on this thread; "" if none. */
DIFFLAB_API const char* difflab_last_error(void);
DIFFLAB_API void difflab_string_free(char* s);

/* ---- point sets ---- */

/* window: "interval 100", "disk 5", "square 20"; NULL for the random-matrix
 * models, whose window follows from n and keep. */
DIFFLAB_API difflab_status difflab_sample(const char* model_json, const char* window, uint64_t master_seed,
                                          uint64_t replica_index, difflab_pointset** out);
DIFFLAB_API difflab_status difflab_pointset_read_csv(const char* path, difflab_pointset** out);
DIFFLAB_API difflab_status difflab_pointset_write_csv(const difflab_pointset* p, const char* path);
/* CSV text of the set, byte-identical to what write_csv puts in a file. */
DIFFLAB_API difflab_status difflab_pointset_csv(const difflab_pointset* p, char** out);
DIFFLAB_API size_t difflab_pointset_size(const difflab_pointset* p);
DIFFLAB_API int difflab_pointset_dimension(const difflab_pointset* p);
DIFFLAB_API int difflab_pointset_is_weighted(const difflab_pointset* p);
/* Copies coordinates into caller buffers of length difflab_pointset_size();
 * ys and ws may be NULL. ys is filled with zeros in 1D, ws with ones when
 * the set is unweighted. */
DIFFLAB_API difflab_status difflab_pointset_coords(const difflab_pointset* p, double* xs, double* ys, double* ws);
DIFFLAB_API difflab_status difflab_pointset_window(const difflab_pointset* p, char** out);
DIFFLAB_API void difflab_pointset_free(difflab_pointset* p);

/* ---- grid functions ---- */

/* stat: "autocorrelation" or "diffraction"; grid: "min:max:n". The absolutely
 * continuous density is tabulated; atoms_json (may be NULL) receives the pure
 * point part as {"label", "atoms": [{"location", "intensity"}], "comb"}. */
DIFFLAB_API difflab_status difflab_theory(const char* model_json, const char* stat, const char* grid,
                                          difflab_grid** out, char** atoms_json);
/* estimator_json keys: stat ("paircorr" | "autocorrelation" | "diffraction"),
 * grid, r_max, bins, band, remove_mean, taper, directions. */
DIFFLAB_API difflab_status difflab_estimate(const difflab_pointset* p, const char* estimator_json,
                                            difflab_grid** out);
DIFFLAB_API difflab_status difflab_grid_read_csv(const char* path, difflab_grid** out);
DIFFLAB_API difflab_status difflab_grid_write_csv(const difflab_grid* g, const char* path);
DIFFLAB_API size_t difflab_grid_size(const difflab_grid* g);
DIFFLAB_API int difflab_grid_has_stderr(const difflab_grid* g);
/* Caller buffers of length difflab_grid_size(); any pointer may be NULL. */
DIFFLAB_API difflab_status difflab_grid_values(const difflab_grid* g, double* abscissae, double* values,
                                               double* stderrs);
DIFFLAB_API void difflab_grid_free(difflab_grid* g);

/* ---- experiments ---- */

/* Parses a config (sectioned text or JSON) and returns it in sectioned form. */
DIFFLAB_API difflab_status difflab_config_normalise(const char* text, char** out);
DIFFLAB_API difflab_status difflab_config_to_json(const char* text, char** out);
/* threads > 0 overrides the config; out_dir non-NULL overrides verify.out_dir. */
DIFFLAB_API difflab_status difflab_experiment_run(const char* config_text, int threads, const char* out_dir,
                                                  difflab_report** out);
DIFFLAB_API difflab_status difflab_report_json(const difflab_report* r, char** out);
DIFFLAB_API int difflab_report_pass(const difflab_report* r);
DIFFLAB_API void difflab_report_free(difflab_report* r);

DIFFLAB_API difflab_status difflab_reproduce_figures(const char* out_dir);

/* ---- scalar evaluators ---- */

DIFFLAB_API difflab_status difflab_dyson_f(int beta, double r, double* out);
DIFFLAB_API difflab_status difflab_dyson_h(int beta, double k, double* out);
DIFFLAB_API difflab_status difflab_ginibre(double t, double* out);
/* waiting: "exponential", "gamma 2", "uniform 0.5 1.5", "discrete 1/2:1/2 3/2:1/2". */
DIFFLAB_API difflab_status difflab_renewal_backscatter(const char* waiting, double k, double* out);

#ifdef __cplusplus
}
#endif

#endif /* DIFFLAB_H */
