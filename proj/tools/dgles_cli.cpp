#include "dgles/dgles.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

int exit_code(dgles_status s) {
  switch (s) {
    case DGLES_OK: return 0;
    case DGLES_ERR_CONFIG:
    case DGLES_ERR_INVALID_ARGUMENT: return 2;
    case DGLES_ERR_NUMERICAL: return 3;
    default: return 1;
  }
}

int report(dgles_status s, const char* what) {
  if (s != DGLES_OK) std::fprintf(stderr, "dgles: %s failed: %s\n", what, dgles_last_error());
  return exit_code(s);
}

void print_line(const char* line, void*) { std::printf("%s\n", line); }

void print_table2(const dgles_table2& t) {
  std::printf("tau_w        %.6g\nre_tau       %.6g\nu_tau/U_b    %.6g\nrho_w/rho_b  %.6g\nU_c/U_b      %.6g\n"
              "rho_c/rho_b  %.6g\nrho_c/rho_w  %.6g\nT_c/T_w      %.6g\ndx+          %.4g\ndy+ min/max  %.4g %.4g\n"
              "dz+          %.4g\n",
              t.tau_w, t.re_tau, t.u_tau_u_b, t.rho_w_rho_b, t.u_c_u_b, t.rho_c_rho_b, t.rho_c_rho_w, t.t_c_t_w,
              t.dx_plus, t.dy_plus_min, t.dy_plus_max, t.dz_plus);
}

int cmd_run(const std::string& config) {
  dgles_simulation* sim = nullptr;
  dgles_status s = dgles_create_from_file(config.c_str(), &sim);
  if (s != DGLES_OK) return report(s, "setup");
  dgles_run_summary sum{};
  s = dgles_run(sim, &sum);
  if (s == DGLES_OK) {
    std::printf("completed %ld steps, t = %.6f, max limited fraction %.4f, mass drift %.2e\n", sum.steps, sum.time,
                sum.max_limited_fraction, sum.max_mass_drift);
    dgles_table2 t{};
    if (dgles_get_table2(sim, &t) == DGLES_OK) print_table2(t);
  }
  dgles_destroy(sim);
  return report(s, "run");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discontinuous Galerkin LES of compressible channel flow"};
  app.set_version_flag("--version", std::string(dgles_version()));
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "run a simulation from a configuration file");
  run->add_option("config", config, "key = value configuration")->required()->check(CLI::ExistingFile);

  std::string checkpoint, outdir;
  auto* post = app.add_subcommand("postprocess", "write profiles and the Table-2 record from a checkpoint");
  post->add_option("checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  post->add_option("-o,--output", outdir, "output directory (default: the checkpoint's configuration)");

  app.add_subcommand("verify", "run the built-in property suites");

  std::string table2, reference, case_name;
  double tolerance = 0.10;
  auto* cmp = app.add_subcommand("compare", "compare a table2.txt record with a reference row");
  cmp->add_option("table2", table2)->required()->check(CLI::ExistingFile);
  cmp->add_option("reference", reference)->required()->check(CLI::ExistingFile);
  cmp->add_option("case", case_name, "reference row name")->required();
  cmp->add_option("-t,--tolerance", tolerance, "relative tolerance on Re_tau and u_tau/U_b")->check(
      CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (run->parsed()) return cmd_run(config);

  if (post->parsed()) {
    dgles_table2 t{};
    const dgles_status s = dgles_postprocess(checkpoint.c_str(), outdir.empty() ? nullptr : outdir.c_str(), &t);
    if (s == DGLES_OK) print_table2(t);
    return report(s, "postprocess");
  }

  if (app.got_subcommand("verify")) {
    int ok = 0;
    const dgles_status s = dgles_verify(print_line, nullptr, &ok);
    if (s != DGLES_OK) return report(s, "verify");
    return ok ? 0 : 1;
  }

  int ok = 0;
  const dgles_status s = dgles_compare_table2(table2.c_str(), reference.c_str(), case_name.c_str(), tolerance,
                                              print_line, nullptr, &ok);
  if (s != DGLES_OK) return report(s, "compare");
  return ok ? 0 : 1;
}
