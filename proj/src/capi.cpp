#include "dgles/dgles.h"

#include "dgles/config.hpp"
#include "dgles/driver.hpp"
#include "dgles/error.hpp"
#include "dgles/statistics.hpp"
#include "dgles/verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <new>
#include <string>

struct dgles_simulation {
  std::unique_ptr<dgles::Simulation> sim;
  std::string config_text;
};

namespace {

thread_local std::string last_error;

dgles_status fail(dgles_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class Fn>
dgles_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const dgles::ConfigError& e) {
    return fail(DGLES_ERR_CONFIG, e.what());
  } catch (const dgles::PositivityViolation& e) {
    return fail(DGLES_ERR_NUMERICAL, e.what());
  } catch (const dgles::NumericalBlowup& e) {
    return fail(DGLES_ERR_NUMERICAL, e.what());
  } catch (const dgles::IoError& e) {
    return fail(DGLES_ERR_IO, e.what());
  } catch (const dgles::NotReady& e) {
    return fail(DGLES_ERR_NOT_READY, e.what());
  } catch (const dgles::InvalidParameter& e) {
    return fail(DGLES_ERR_CONFIG, e.what());
  } catch (const dgles::Error& e) {
    return fail(DGLES_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DGLES_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DGLES_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DGLES_ERR_INTERNAL, "unknown error");
  }
}

dgles_status create(dgles::RunConfig cfg, dgles_simulation** out) {
  dgles::apply_environment(cfg);
  auto handle = std::make_unique<dgles_simulation>();
  handle->sim = std::make_unique<dgles::Simulation>(std::move(cfg));
  *out = handle.release();
  return DGLES_OK;
}

dgles_table2 to_c(const dgles::Table2Record& r) {
  return {r.tau_w,       r.re_tau,      r.u_tau,   r.rho_w_rho_b, r.u_c_u_b,     r.rho_c_rho_b,
          r.rho_c_rho_w, r.t_c_t_w,     r.dx_plus, r.dy_plus_min, r.dy_plus_max, r.dz_plus};
}

}  // namespace

extern "C" {

const char* dgles_version(void) { return "0.1.0"; }

const char* dgles_last_error(void) { return last_error.c_str(); }

dgles_status dgles_create_from_file(const char* config_path, dgles_simulation** out) {
  if (!config_path || !out) return fail(DGLES_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return create(dgles::load_config(config_path), out); });
}

dgles_status dgles_create_from_string(const char* config_text, dgles_simulation** out) {
  if (!config_text || !out) return fail(DGLES_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return create(dgles::parse_config(config_text), out); });
}

dgles_status dgles_restore(const char* checkpoint_path, const char* output_dir, dgles_simulation** out) {
  if (!checkpoint_path || !out) return fail(DGLES_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<std::string> dir;
    if (output_dir) dir = output_dir;
    auto handle = std::make_unique<dgles_simulation>();
    handle->sim = dgles::Simulation::from_checkpoint(checkpoint_path, dir);
    *out = handle.release();
    return DGLES_OK;
  });
}

void dgles_destroy(dgles_simulation* sim) { delete sim; }

dgles_status dgles_step(dgles_simulation* sim, int n_steps) {
  if (!sim || n_steps < 0) return fail(DGLES_ERR_INVALID_ARGUMENT, "invalid argument");
  return guarded([&] {
    for (int i = 0; i < n_steps; ++i) sim->sim->step();
    return DGLES_OK;
  });
}

dgles_status dgles_run(dgles_simulation* sim, dgles_run_summary* summary) {
  if (!sim) return fail(DGLES_ERR_INVALID_ARGUMENT, "null simulation");
  return guarded([&] {
    const auto s = sim->sim->run();
    if (summary) *summary = {s.steps, s.time, s.max_limited_fraction, s.clipped_nodes, s.max_invariant_drift};
    return DGLES_OK;
  });
}

dgles_status dgles_time(const dgles_simulation* sim, double* time, long* steps) {
  if (!sim) return fail(DGLES_ERR_INVALID_ARGUMENT, "null simulation");
  if (time) *time = sim->sim->time();
  if (steps) *steps = sim->sim->steps();
  return DGLES_OK;
}

dgles_status dgles_integrals(const dgles_simulation* sim, double out[5]) {
  if (!sim || !out) return fail(DGLES_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto i = sim->sim->solver().integrals(sim->sim->state());
    for (int k = 0; k < 5; ++k) out[k] = i[k];
    return DGLES_OK;
  });
}

dgles_status dgles_write_outputs(const dgles_simulation* sim) {
  if (!sim) return fail(DGLES_ERR_INVALID_ARGUMENT, "null simulation");
  return guarded([&] {
    sim->sim->write_outputs();
    return DGLES_OK;
  });
}

dgles_status dgles_checkpoint(const dgles_simulation* sim, const char* path) {
  if (!sim || !path) return fail(DGLES_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    sim->sim->write_checkpoint(path);
    return DGLES_OK;
  });
}

dgles_status dgles_get_table2(const dgles_simulation* sim, dgles_table2* out) {
  if (!sim || !out) return fail(DGLES_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = to_c(sim->sim->table2());
    return DGLES_OK;
  });
}

const char* dgles_config_text(dgles_simulation* sim) {
  if (!sim) return "";
  sim->config_text = dgles::to_config_text(sim->sim->config());
  return sim->config_text.c_str();
}

dgles_status dgles_postprocess(const char* checkpoint_path, const char* output_dir, dgles_table2* out) {
  if (!checkpoint_path) return fail(DGLES_ERR_INVALID_ARGUMENT, "null checkpoint path");
  return guarded([&] {
    std::optional<std::string> dir;
    if (output_dir) dir = output_dir;
    const auto r = dgles::postprocess_checkpoint(checkpoint_path, dir);
    if (out) *out = to_c(r);
    return DGLES_OK;
  });
}

dgles_status dgles_verify(dgles_line_callback cb, void* user, int* all_passed) {
  return guarded([&] {
    bool ok = true;
    dgles::run_verification([&](const dgles::VerifyResult& r) {
      ok = ok && r.pass;
      if (cb) {
        const std::string line = std::string(r.pass ? "PASS  " : "FAIL  ") + r.name + ": " + r.detail;
        cb(line.c_str(), user);
      }
    });
    if (all_passed) *all_passed = ok ? 1 : 0;
    return DGLES_OK;
  });
}

dgles_status dgles_compare_table2(const char* table2_path, const char* reference_path, const char* case_name,
                                  double tolerance, dgles_line_callback cb, void* user, int* all_passed) {
  if (!table2_path || !reference_path || !case_name || !(tolerance > 0.0))
    return fail(DGLES_ERR_INVALID_ARGUMENT, "invalid argument");
  return guarded([&] {
    std::ifstream t2(table2_path);
    if (!t2) throw dgles::IoError(std::string("cannot open ") + table2_path);
    std::ifstream ref(reference_path);
    if (!ref) throw dgles::IoError(std::string("cannot open ") + reference_path);
    const auto record = dgles::read_table2(t2);
    const auto rows = dgles::read_reference_table(ref);
    const dgles::ReferenceRow* row = nullptr;
    for (const auto& r : rows)
      if (r.name == case_name) row = &r;
    if (!row) throw dgles::InvalidParameter(std::string("case '") + case_name + "' is not in the reference table");
    bool ok = true;
    for (const auto& line : dgles::compare_table2(record, *row, tolerance)) {
      ok = ok && line.pass;
      if (!cb) continue;
      char buf[200];
      if (std::isnan(line.reference))
        std::snprintf(buf, sizeof buf, "%-12s %12.6g   (no reference)", line.key.c_str(), line.value);
      else
        std::snprintf(buf, sizeof buf, "%-12s %12.6g  ref %12.6g  rel %+8.3f%%  %s", line.key.c_str(), line.value,
                      line.reference, 100.0 * line.rel_error,
                      line.checked ? (line.pass ? "PASS" : "FAIL") : "info");
      cb(buf, user);
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
    return DGLES_OK;
  });
}

}  // extern "C"
