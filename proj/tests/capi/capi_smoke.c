/* Plain C client of the shared library: every entry point family once. */
#define _POSIX_C_SOURCE 200809L

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>

#include "difflab/difflab.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

#define OK(call)                                                                       \
  do {                                                                                 \
    difflab_status s_ = (call);                                                        \
    if (s_ != DIFFLAB_OK) {                                                            \
      fprintf(stderr, "%s:%d: %s -> %s: %s\n", __FILE__, __LINE__, #call,             \
              difflab_status_name(s_), difflab_last_error());                          \
      ++failures;                                                                      \
    }                                                                                  \
  } while (0)

static void path_in(char* buf, size_t n, const char* dir, const char* name) { snprintf(buf, n, "%s/%s", dir, name); }

int main(int argc, char** argv) {
  const char* work = argc > 1 ? argv[1] : "capi_work";
  mkdir(work, 0755);
  char path[4096];

  EXPECT(strlen(difflab_version()) > 0);
  EXPECT(strcmp(difflab_status_name(DIFFLAB_OK), "Ok") == 0);

  /* Sampling is a pure function of (model, window, seed, replica). */
  const char* poisson = "{\"name\": \"poisson\", \"rho\": 1, \"dim\": 1}";
  difflab_pointset* a = NULL;
  difflab_pointset* b = NULL;
  OK(difflab_sample(poisson, "interval 500", 12345, 0, &a));
  OK(difflab_sample(poisson, "interval 500", 12345, 0, &b));
  if (a && b) {
    char* ca = NULL;
    char* cb = NULL;
    OK(difflab_pointset_csv(a, &ca));
    OK(difflab_pointset_csv(b, &cb));
    EXPECT(ca && cb && strcmp(ca, cb) == 0);
    difflab_string_free(ca);
    difflab_string_free(cb);

    const size_t n = difflab_pointset_size(a);
    EXPECT(n > 400 && n < 600);
    EXPECT(difflab_pointset_dimension(a) == 1);
    EXPECT(!difflab_pointset_is_weighted(a));
    double* xs = malloc(n * sizeof *xs);
    double* ys = malloc(n * sizeof *ys);
    double* ws = malloc(n * sizeof *ws);
    OK(difflab_pointset_coords(a, xs, ys, ws));
    for (size_t i = 0; i < n; ++i) EXPECT(fabs(xs[i]) <= 250.0 && ys[i] == 0.0 && ws[i] == 1.0);
    free(xs);
    free(ys);
    free(ws);

    char* window = NULL;
    OK(difflab_pointset_window(a, &window));
    EXPECT(window && strstr(window, "interval") != NULL);
    difflab_string_free(window);

    path_in(path, sizeof path, work, "points.csv");
    OK(difflab_pointset_write_csv(a, path));
    difflab_pointset* back = NULL;
    OK(difflab_pointset_read_csv(path, &back));
    EXPECT(back && difflab_pointset_size(back) == n);
    difflab_pointset_free(back);

    /* Estimate on a flat Poisson sample: pair correlation near 1. */
    difflab_grid* g = NULL;
    OK(difflab_estimate(a, "{\"stat\": \"paircorr\", \"r_max\": 5, \"bins\": 5}", &g));
    if (g) {
      double vals[5];
      EXPECT(difflab_grid_size(g) == 5);
      OK(difflab_grid_values(g, NULL, vals, NULL));
      for (int i = 0; i < 5; ++i) EXPECT(fabs(vals[i] - 1.0) < 0.5);
      path_in(path, sizeof path, work, "estimate.csv");
      OK(difflab_grid_write_csv(g, path));
      difflab_grid* gb = NULL;
      OK(difflab_grid_read_csv(path, &gb));
      EXPECT(gb && difflab_grid_size(gb) == 5);
      difflab_grid_free(gb);
    }
    difflab_grid_free(g);
  }
  difflab_pointset_free(a);
  difflab_pointset_free(b);

  /* Theory: beta = 2 diffraction is the triangle min(|k|, 1) with an atom at 0. */
  difflab_grid* t = NULL;
  char* atoms = NULL;
  OK(difflab_theory("{\"name\": \"dyson\", \"beta\": 2}", "diffraction", "0:2:5", &t, &atoms));
  if (t) {
    double k[5], v[5];
    OK(difflab_grid_values(t, k, v, NULL));
    for (int i = 0; i < 5; ++i) EXPECT(fabs(v[i] - (k[i] < 1.0 ? k[i] : 1.0)) < 1e-12);
  }
  EXPECT(atoms && strstr(atoms, "atoms") != NULL);
  difflab_grid_free(t);
  difflab_string_free(atoms);

  /* Config normalisation is idempotent. */
  char* once = NULL;
  char* twice = NULL;
  OK(difflab_config_normalise("{\"model\": {\"name\": \"poisson\", \"window\": \"interval 100\"}}", &once));
  if (once) OK(difflab_config_normalise(once, &twice));
  EXPECT(once && twice && strcmp(once, twice) == 0);
  char* json = NULL;
  if (once) OK(difflab_config_to_json(once, &json));
  EXPECT(json && json[0] == '{');
  difflab_string_free(once);
  difflab_string_free(twice);
  difflab_string_free(json);

  /* A small experiment end to end. */
  difflab_report* r = NULL;
  path_in(path, sizeof path, work, "experiment");
  OK(difflab_experiment_run(
      "[model]\nname = \"poisson\"\nwindow = \"interval 1000\"\n[estimator]\nstat = \"paircorr\"\nr_max = 4\nbins = "
      "8\n[verify]\nreplicas = 4\n",
      1, path, &r));
  if (r) {
    char* report = NULL;
    OK(difflab_report_json(r, &report));
    EXPECT(report && strstr(report, "\"pass\"") != NULL);
    EXPECT(difflab_report_pass(r) == 0 || difflab_report_pass(r) == 1);
    difflab_string_free(report);
  }
  difflab_report_free(r);

  /* Error path: status, name and message. */
  difflab_pointset* bad = NULL;
  const difflab_status s = difflab_sample("{\"name\": \"lattice\"}", "interval 10", 1, 0, &bad);
  EXPECT(s == DIFFLAB_CONFIG || s == DIFFLAB_INVALID_ARGUMENT);
  EXPECT(bad == NULL);
  EXPECT(strcmp(difflab_status_name(s), "Ok") != 0);
  EXPECT(strlen(difflab_last_error()) > 0);

  /* Scalar evaluators. */
  double x = 0.0;
  OK(difflab_dyson_h(2, 0.5, &x));
  EXPECT(fabs(x - 0.5) < 1e-14);
  OK(difflab_dyson_f(2, 0.0, &x));
  EXPECT(fabs(x - 1.0) < 1e-14);
  OK(difflab_ginibre(1.0, &x));
  EXPECT(fabs(x - (1.0 - exp(-3.14159265358979323846))) < 1e-14);
  EXPECT(difflab_ginibre(-1.0, &x) == DIFFLAB_NEGATIVE_ARGUMENT);
  EXPECT(strcmp(difflab_status_name(DIFFLAB_NEGATIVE_ARGUMENT), "NegativeArgument") == 0);
  /* Exponential gaps are Poisson: no backscatter term. */
  OK(difflab_renewal_backscatter("exponential", 0.7, &x));
  EXPECT(fabs(x) < 1e-12);
  EXPECT(difflab_renewal_backscatter("weibull 2", 0.7, &x) != DIFFLAB_OK);
  EXPECT(difflab_ginibre(1.0, NULL) != DIFFLAB_OK);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("capi smoke: ok\n");
  return failures ? 1 : 0;
}
