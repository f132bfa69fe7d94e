#include "reap/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reap/errors.hpp"

namespace reap {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

const json& require(const json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& field, bool allow_inf) {
  if (v.is_number()) return v.get<double>();
  if (allow_inf && v.is_string()) {
    const std::string s = lower(v.get<std::string>());
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(field, allow_inf ? "expected a number, \"Inf\" or \"-Inf\""
                        : "expected a number");
}

Vector vector(const json& v, const std::string& field, bool allow_inf = false) {
  if (!v.is_array()) fail(field, "expected an array");
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    out(i) = number(v[i], field + "[" + std::to_string(i) + "]", allow_inf);
  }
  return out;
}

Matrix matrix(const json& v, const std::string& field) {
  if (v.is_object()) {
    return vector(require(v, "diag", field), field + ".diag").asDiagonal();
  }
  if (!v.is_array() || v.empty() || !v[0].is_array()) {
    fail(field, "expected an array of rows");
  }
  const auto rows = v.size();
  const auto cols = v[0].size();
  Matrix out(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || v[r].size() != cols) {
      fail(row_field, "rows must all have " + std::to_string(cols) +
                          " entries");
    }
    out.row(r) = vector(v[r], row_field).transpose();
  }
  return out;
}

void expect_length(const Vector& v, Eigen::Index n, const std::string& field) {
  if (v.size() != n) {
    fail(field, "length " + std::to_string(v.size()) + " does not match " +
                    std::to_string(n));
  }
}

BoxSet box(const json& c, const std::string& upper, const std::string& lower_key,
           Eigen::Index n) {
  const Vector hi = vector(require(c, upper, "constraints"),
                           "constraints." + upper, true);
  const Vector lo = vector(require(c, lower_key, "constraints"),
                           "constraints." + lower_key, true);
  expect_length(hi, n, "constraints." + upper);
  expect_length(lo, n, "constraints." + lower_key);
  try {
    return BoxSet(lo, hi);
  } catch (const ConfigError& e) {
    fail("constraints." + upper, e.what());
  }
}

}  // namespace

TerminalMethod parse_method(const std::string& name) {
  const std::string s = lower(name);
  if (s == "prediction") return TerminalMethod::kPrediction;
  if (s == "lyapunov") return TerminalMethod::kLyapunov;
  throw ConfigError("terminal.method: expected \"prediction\" or \"lyapunov\"");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  try {
    RunConfig cfg;
    const json& sys = require(doc, "system", "");
    const std::string domain =
        lower(sys.value("domain", std::string("discrete")));
    if (domain != "discrete" && domain != "continuous") {
      fail("system.domain", "expected \"discrete\" or \"continuous\"");
    }
    cfg.continuous = domain == "continuous";
    cfg.A = matrix(require(sys, "A", "system"), "system.A");
    cfg.B = matrix(require(sys, "B", "system"), "system.B");
    cfg.C = matrix(require(sys, "C", "system"), "system.C");
    cfg.D = sys.contains("D") ? matrix(sys["D"], "system.D")
                              : Matrix::Zero(cfg.C.rows(), cfg.B.cols());
    cfg.dt = number(require(sys, "dt", "system"), "system.dt", false);
    if (!(cfg.dt > 0.0)) fail("system.dt", "must be positive");
    cfg.user_supplied = sys.value("user_supplied", false);
    try {
      check_dimensions(cfg.A, cfg.B, cfg.C, cfg.D);
    } catch (const ConfigError& e) {
      fail("system", e.what());
    }
    const auto n = cfg.A.rows();
    const auto p = cfg.B.cols();

    const json& cons = require(doc, "constraints", "");
    cfg.X = box(cons, "x_upper", "x_lower", n);
    cfg.U = box(cons, "u_upper", "u_lower", p);

    const json& w = require(doc, "weights", "");
    cfg.Qx = matrix(require(w, "Qx", "weights"), "weights.Qx");
    cfg.Qu = matrix(require(w, "Qu", "weights"), "weights.Qu");
    if (cfg.Qx.rows() != n || cfg.Qx.cols() != n) {
      fail("weights.Qx", "must be n x n");
    }
    if (cfg.Qu.rows() != p || cfg.Qu.cols() != p) {
      fail("weights.Qu", "must be p x p");
    }

    const json& hz = require(doc, "horizon", "");
    if (!hz.is_number_integer() || hz.get<long>() < 1) {
      fail("horizon", "expected an integer >= 1");
    }
    cfg.horizon = hz.get<int>();

    const json& tg = require(doc, "target", "");
    const std::string kind = lower(require(tg, "kind", "target").get<std::string>());
    if (kind == "reference") {
      cfg.target_kind = TargetKind::kReference;
      cfg.target_value = vector(require(tg, "value", "target"), "target.value");
      expect_length(cfg.target_value, cfg.C.rows(), "target.value");
    } else if (kind == "equilibrium") {
      cfg.target_kind = TargetKind::kEquilibrium;
      cfg.target_value = vector(require(tg, "value", "target"), "target.value");
      expect_length(cfg.target_value, n, "target.value");
    } else {
      fail("target.kind", "expected \"reference\" or \"equilibrium\"");
    }

    if (doc.contains("terminal")) {
      const std::string m =
          lower(doc["terminal"].value("method", std::string("auto")));
      if (m != "auto") cfg.method = parse_method(m);
    }

    const json& simj = require(doc, "simulation", "");
    cfg.steps = require(simj, "steps", "simulation").get<int>();
    if (cfg.steps < 1) fail("simulation.steps", "must be >= 1");
    cfg.budget.iterations = simj.value("budget", 1L);
    if (cfg.budget.iterations < 0) fail("simulation.budget", "must be >= 0");
    if (simj.contains("deadline_ms") && !simj["deadline_ms"].is_null()) {
      cfg.budget.deadline_ms =
          number(simj["deadline_ms"], "simulation.deadline_ms", false);
    }
    cfg.x0 = vector(require(simj, "x0", "simulation"), "simulation.x0");
    expect_length(cfg.x0, n, "simulation.x0");

    if (doc.contains("solver")) {
      const json& s = doc["solver"];
      cfg.solver.sigma_max = s.value("sigma_max", cfg.solver.sigma_max);
      cfg.solver.sigma_min = s.value("sigma_min", cfg.solver.sigma_min);
      cfg.solver.eta = s.value("eta", cfg.solver.eta);
      cfg.solver.max_backtracks =
          s.value("max_backtracks", cfg.solver.max_backtracks);
      if (s.contains("dtau") && s["dtau"].is_number()) {
        cfg.solver.dtau = s["dtau"].get<double>();
        if (!(*cfg.solver.dtau > 0.0)) fail("solver.dtau", "must be positive");
      } else if (s.contains("dtau") &&
                 !(s["dtau"].is_string() && lower(s["dtau"].get<std::string>()) == "auto")) {
        fail("solver.dtau", "expected a number or \"auto\"");
      }
      cfg.tightening = s.value("tightening", 0.0);
      if (cfg.tightening < 0.0) fail("solver.tightening", "must be >= 0");
      if (!(cfg.solver.sigma_min > 0.0 &&
            cfg.solver.sigma_min <= cfg.solver.sigma_max)) {
        fail("solver", "need 0 < sigma_min <= sigma_max");
      }
      if (!(cfg.solver.eta > 0.0 && cfg.solver.eta < 1.0)) {
        fail("solver.eta", "must lie in (0, 1)");
      }
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path.string() + ": cannot open file");
  std::ostringstream os;
  os << f.rdbuf();
  return parse_config(os.str(), path.string());
}

}  // namespace reap
