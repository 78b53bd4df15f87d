/* Exercises the C interface: create, step, checkpoint, restore and error paths. */
#include "dgles/dgles.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

static const char* config =
    "mesh.nx = 2\nmesh.ny = 2\nmesh.nz = 2\nmesh.lx = 2\nmesh.lz = 1\nmesh.omega = 1\n"
    "discretization.q = 2\ndiscretization.q_hat = 1\n"
    "gas.mach = 0.5\ngas.reynolds = 150\n"
    "model.type = anisotropic\n"
    "time.cfl = 0.2\ntime.t_stats = 0.01\ntime.t_average = 0.03\n"
    "initial.amplitude = 0.01\n"
    "output.directory = capi_out\n";

static int lines = 0;
static void count_line(const char* line, void* user) {
  (void)line;
  ++*(int*)user;
}

int main(void) {
  dgles_simulation* sim = NULL;
  double a[5], b[5], t0 = 0.0, t1 = 0.0;
  long s0 = 0, s1 = 0;
  int i, ok = -1;

  EXPECT(strlen(dgles_version()) > 0);
  EXPECT(dgles_create_from_string(config, &sim) == DGLES_OK);
  if (!sim) {
    fprintf(stderr, "create failed: %s\n", dgles_last_error());
    return 1;
  }
  EXPECT(strstr(dgles_config_text(sim), "model.type = anisotropic") != NULL);

  EXPECT(dgles_integrals(sim, a) == DGLES_OK);
  EXPECT(dgles_step(sim, 3) == DGLES_OK);
  EXPECT(dgles_time(sim, &t0, &s0) == DGLES_OK);
  EXPECT(s0 == 3 && t0 > 0.0);
  EXPECT(dgles_integrals(sim, b) == DGLES_OK);
  EXPECT(fabs(b[0] - a[0]) <= 1e-12 * fabs(a[0]));

  /* no statistics yet */
  {
    dgles_table2 t;
    EXPECT(dgles_get_table2(sim, &t) == DGLES_ERR_NOT_READY);
    EXPECT(strlen(dgles_last_error()) > 0);
  }

  EXPECT(dgles_checkpoint(sim, "capi.chk") == DGLES_OK);
  {
    dgles_simulation* copy = NULL;
    double c[5], d[5];
    EXPECT(dgles_restore("capi.chk", "capi_restored", &copy) == DGLES_OK);
    if (copy) {
      EXPECT(dgles_time(copy, &t1, &s1) == DGLES_OK);
      EXPECT(s1 == s0 && t1 == t0);
      EXPECT(dgles_step(sim, 2) == DGLES_OK);
      EXPECT(dgles_step(copy, 2) == DGLES_OK);
      EXPECT(dgles_integrals(sim, c) == DGLES_OK);
      EXPECT(dgles_integrals(copy, d) == DGLES_OK);
      for (i = 0; i < 5; ++i) EXPECT(c[i] == d[i]);
      dgles_destroy(copy);
    }
  }

  {
    dgles_run_summary sum;
    dgles_table2 t;
    EXPECT(dgles_run(sim, &sum) == DGLES_OK);
    EXPECT(sum.time >= 0.04 - 1e-12);
    EXPECT(dgles_get_table2(sim, &t) == DGLES_OK);
    EXPECT(t.tau_w > 0.0 && isfinite(t.re_tau));
  }
  dgles_destroy(sim);

  /* error paths */
  sim = NULL;
  EXPECT(dgles_create_from_string("discretization.q = 2\ndiscretization.q_hat = 2\n", &sim) == DGLES_ERR_CONFIG);
  EXPECT(sim == NULL);
  EXPECT(strstr(dgles_last_error(), "q_hat") != NULL);
  EXPECT(dgles_create_from_string("no.such.key = 1\n", &sim) == DGLES_ERR_CONFIG);
  EXPECT(dgles_create_from_file("does/not/exist.cfg", &sim) == DGLES_ERR_CONFIG);
  EXPECT(dgles_create_from_string(NULL, &sim) == DGLES_ERR_INVALID_ARGUMENT);
  EXPECT(dgles_step(NULL, 1) == DGLES_ERR_INVALID_ARGUMENT);
  EXPECT(dgles_restore("does/not/exist.chk", NULL, &sim) == DGLES_ERR_IO);
  dgles_destroy(NULL);

  EXPECT(dgles_verify(count_line, &lines, &ok) == DGLES_OK);
  EXPECT(ok == 1 && lines > 0);

  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("C interface: all checks passed\n");
  return 0;
}
