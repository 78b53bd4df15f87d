#include "dgles/config.hpp"

#include "dgles/error.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

namespace dgles {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// number, "pi", or products/quotients of those ("4*pi/3")
double parse_real(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty value");
  double value = 1.0;
  char op = '*';
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find_first_of("*/", pos);
    const std::string tok = trim(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    double v;
    if (tok == "pi") {
      v = std::numbers::pi;
    } else {
      std::size_t used = 0;
      v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("trailing characters in '" + tok + "'");
    }
    value = op == '*' ? value * v : value / v;
    if (next == std::string::npos) break;
    op = s[next];
    pos = next + 1;
  }
  if (!std::isfinite(value)) throw std::invalid_argument("value is not finite");
  return value;
}

long parse_integer(const std::string& text) {
  const std::string s = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(bool v) { return v ? "true" : "false"; }

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;  // empty result: omitted from the echo
};

#define REAL_KEY(key, field) \
  Key{key, [](RunConfig& c, const std::string& v) { c.field = parse_real(v); }, [](const RunConfig& c) { return fmt(c.field); }}
#define INT_KEY(key, field)                                                                    \
  Key{key, [](RunConfig& c, const std::string& v) { c.field = static_cast<decltype(c.field)>(parse_integer(v)); }, \
      [](const RunConfig& c) { return std::to_string(c.field); }}
#define BOOL_KEY(key, field) \
  Key{key, [](RunConfig& c, const std::string& v) { c.field = parse_bool(v); }, [](const RunConfig& c) { return fmt(c.field); }}

const std::vector<Key>& keys() {
  static const std::vector<Key> k{
      Key{"run.name", [](RunConfig& c, const std::string& v) { c.name = trim(v); },
          [](const RunConfig& c) { return c.name; }},
      INT_KEY("mesh.nx", mesh.nx),
      INT_KEY("mesh.ny", mesh.ny),
      INT_KEY("mesh.nz", mesh.nz),
      REAL_KEY("mesh.lx", mesh.lx),
      REAL_KEY("mesh.ly", mesh.ly),
      REAL_KEY("mesh.lz", mesh.lz),
      REAL_KEY("mesh.omega", mesh.omega),
      Key{"mesh.y1", [](RunConfig& c, const std::string& v) { c.mesh.y1_target = parse_real(v); },
          [](const RunConfig& c) { return c.mesh.y1_target ? fmt(*c.mesh.y1_target) : std::string(); }},
      BOOL_KEY("mesh.periodic_y", mesh.periodic_y),
      INT_KEY("discretization.q", q),
      INT_KEY("discretization.q_hat", solver.q_hat),
      REAL_KEY("gas.mach", solver.gas.mach),
      REAL_KEY("gas.reynolds", solver.gas.reynolds),
      REAL_KEY("gas.prandtl", solver.gas.prandtl),
      REAL_KEY("gas.gamma", solver.gas.gamma),
      REAL_KEY("gas.alpha", solver.gas.alpha),
      REAL_KEY("gas.wall_temperature", solver.wall_temperature),
      BOOL_KEY("gas.viscous", solver.viscous),
      Key{"model.type",
          [](RunConfig& c, const std::string& v) {
            const std::string s = trim(v);
            if (s == "none") c.solver.model = SgsModel::none;
            else if (s == "smagorinsky") c.solver.model = SgsModel::smagorinsky;
            else if (s == "anisotropic") c.solver.model = SgsModel::anisotropic;
            else throw std::invalid_argument("unknown model '" + s + "' (none, smagorinsky, anisotropic)");
          },
          [](const RunConfig& c) { return std::string(to_string(c.solver.model)); }},
      REAL_KEY("smagorinsky.cs", solver.smagorinsky.cs),
      REAL_KEY("smagorinsky.ci", solver.smagorinsky.ci),
      REAL_KEY("smagorinsky.a_plus", solver.smagorinsky.a_plus),
      REAL_KEY("smagorinsky.pr_sgs", solver.smagorinsky.pr_sgs),
      BOOL_KEY("smagorinsky.damping", solver.smagorinsky.damping),
      Key{"anisotropic.update",
          [](RunConfig& c, const std::string& v) {
            const std::string s = trim(v);
            if (s == "stage") c.coefficients_every_stage = true;
            else if (s == "step") c.coefficients_every_stage = false;
            else throw std::invalid_argument("update must be 'stage' or 'step'");
          },
          [](const RunConfig& c) { return std::string(c.coefficients_every_stage ? "stage" : "step"); }},
      REAL_KEY("anisotropic.eps_den", solver.anisotropic.eps_den),
      REAL_KEY("anisotropic.c_max", solver.anisotropic.c_max),
      REAL_KEY("anisotropic.tkk_limit", solver.anisotropic.tkk_limit),
      REAL_KEY("time.cfl", cfl),
      Key{"time.dt", [](RunConfig& c, const std::string& v) { c.dt = parse_real(v); },
          [](const RunConfig& c) { return c.dt ? fmt(*c.dt) : std::string(); }},
      REAL_KEY("time.t_stats", t_stats),
      REAL_KEY("time.t_average", t_average),
      INT_KEY("time.max_steps", max_steps),
      BOOL_KEY("forcing.enabled", forcing_enabled),
      REAL_KEY("forcing.alpha1", forcing.alpha1),
      REAL_KEY("forcing.alpha2", forcing.alpha2),
      REAL_KEY("forcing.q0", forcing.q0),
      Key{"initial.type",
          [](RunConfig& c, const std::string& v) {
            const std::string s = trim(v);
            if (s == "channel") c.initial = InitialKind::channel;
            else if (s == "uniform") c.initial = InitialKind::uniform;
            else throw std::invalid_argument("initial.type must be 'channel' or 'uniform'");
          },
          [](const RunConfig& c) { return std::string(c.initial == InitialKind::channel ? "channel" : "uniform"); }},
      REAL_KEY("initial.amplitude", perturbation.amplitude),
      REAL_KEY("initial.logistic_r", perturbation.r),
      INT_KEY("initial.iterations", perturbation.iterations),
      REAL_KEY("initial.u", uniform_velocity.x()),
      REAL_KEY("initial.v", uniform_velocity.y()),
      REAL_KEY("initial.w", uniform_velocity.z()),
      Key{"output.directory", [](RunConfig& c, const std::string& v) { c.output_directory = trim(v); },
          [](const RunConfig& c) { return c.output_directory; }},
      INT_KEY("output.log_interval", log_interval),
      REAL_KEY("output.profile_interval", profile_interval),
      REAL_KEY("output.checkpoint_interval", checkpoint_interval),
      Key{"output.restart", [](RunConfig& c, const std::string& v) { c.restart = trim(v); },
          [](const RunConfig& c) { return c.restart; }},
  };
  return k;
}

#undef REAL_KEY
#undef INT_KEY
#undef BOOL_KEY

void check(const RunConfig& c, std::vector<std::string>& errors) {
  auto guard = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      errors.emplace_back(e.what());
    }
  };
  guard([&] { validate(c.mesh); });
  if (c.mesh.y1_target) guard([&] { solve_omega(*c.mesh.y1_target, c.mesh.ny); });
  if (c.q < 0 || c.q > 8) errors.emplace_back("discretization.q must lie in [0, 8]");
  if (c.solver.model == SgsModel::anisotropic && (c.solver.q_hat < 0 || c.solver.q_hat >= c.q))
    errors.emplace_back("discretization.q_hat must satisfy 0 <= q_hat < q");
  guard([&] { validate(c.solver.gas); });
  if (c.solver.model == SgsModel::smagorinsky) guard([&] { smagorinsky::validate(c.solver.smagorinsky); });
  if (c.solver.model == SgsModel::anisotropic &&
      (!(c.solver.anisotropic.eps_den > 0.0) || !(c.solver.anisotropic.c_max > 0.0)))
    errors.emplace_back("anisotropic.eps_den and anisotropic.c_max must be positive");
  if (c.solver.model == SgsModel::anisotropic &&
      !(c.solver.anisotropic.tkk_limit >= 0.0 && c.solver.anisotropic.tkk_limit < 1.0))
    errors.emplace_back("anisotropic.tkk_limit must lie in [0, 1)");
  if (!(c.solver.wall_temperature > 0.0)) errors.emplace_back("gas.wall_temperature must be positive");
  if (!(c.cfl > 0.0)) errors.emplace_back("time.cfl must be positive");
  if (c.dt && !(*c.dt > 0.0)) errors.emplace_back("time.dt must be positive");
  if (!(c.t_stats >= 0.0)) errors.emplace_back("time.t_stats must be nonnegative");
  if (!(c.t_average >= 0.0)) errors.emplace_back("time.t_average must be nonnegative");
  if (!(c.forcing.alpha1 >= 0.0) || !(c.forcing.alpha2 >= 0.0)) errors.emplace_back("forcing gains must be nonnegative");
  if (c.initial == InitialKind::channel) guard([&] { validate(c.perturbation); });
  if (c.log_interval < 1) errors.emplace_back("output.log_interval must be at least 1");
  if (!(c.profile_interval >= 0.0)) errors.emplace_back("output.profile_interval must be nonnegative");
  if (!(c.checkpoint_interval >= 0.0)) errors.emplace_back("output.checkpoint_interval must be nonnegative");
  if (c.output_directory.empty()) errors.emplace_back("output.directory must not be empty");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::vector<std::string> errors;
  std::map<std::string, const Key*> table;
  for (const auto& k : keys()) table[k.name] = &k;
  std::set<std::string> seen;
  std::istringstream is(text);
  int line_no = 0;
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = table.find(key);
    if (it == table.end()) {
      errors.push_back("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      continue;
    }
    if (!seen.insert(key).second) errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    try {
      it->second->set(cfg, value);
    } catch (const std::exception& e) {
      errors.push_back("line " + std::to_string(line_no) + ": " + key + ": " + e.what());
    }
  }
  for (const auto& key : seen) {
    if (key.rfind("smagorinsky.", 0) == 0 && cfg.solver.model != SgsModel::smagorinsky)
      errors.push_back("'" + key + "' given but model.type is not smagorinsky");
    if (key.rfind("anisotropic.", 0) == 0 && cfg.solver.model != SgsModel::anisotropic)
      errors.push_back("'" + key + "' given but model.type is not anisotropic");
  }
  if (seen.count("discretization.q_hat") && cfg.solver.model != SgsModel::anisotropic &&
      (cfg.solver.q_hat < 0 || cfg.solver.q_hat >= cfg.q))
    errors.emplace_back("discretization.q_hat must satisfy 0 <= q_hat < q");
  check(cfg, errors);
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  if (cfg.mesh.y1_target) cfg.mesh.omega = solve_omega(*cfg.mesh.y1_target, cfg.mesh.ny).omega;
  if (cfg.forcing.q0 == 0.0) cfg.forcing.q0 = cfg.mesh.ly * cfg.mesh.lz;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  for (const auto& k : keys()) {
    if (k.name.rfind("smagorinsky.", 0) == 0 && cfg.solver.model != SgsModel::smagorinsky) continue;
    if (k.name.rfind("anisotropic.", 0) == 0 && cfg.solver.model != SgsModel::anisotropic) continue;
    const std::string v = k.get(cfg);
    if (v.empty()) continue;
    os << k.name << " = " << v << '\n';
  }
  return os.str();
}

}  // namespace dgles
