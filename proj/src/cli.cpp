#include "reap/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

#include "reap/errors.hpp"
#include "reap/pipeline.hpp"

namespace reap {
namespace {

std::string vec(const Vector& v) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << format_bound(v(i));
  }
  os << ']';
  return os.str();
}

void describe(std::ostream& out, const RunConfig& cfg,
              const ValidationReport& report) {
  const Controller& c = *report.controller;
  out << "System: n=" << c.model.states() << ", p=" << c.model.inputs()
      << ", m=" << c.model.outputs() << ", dt=" << format_bound(c.model.dt)
      << (cfg.continuous ? " (discretized by zero-order hold)" : "") << '\n';
  if (cfg.user_supplied) {
    out << "Note: system matrices are placeholders; replace them with the "
           "model of your plant.\n";
  }
  out << "Target: xbar=" << vec(c.target.xbar) << ", ubar="
      << vec(c.target.ubar) << ", r=" << vec(c.target.r) << '\n';
  out << "Terminal method: " << to_string(c.method) << '\n';
  if (const auto* poly = std::get_if<PolyhedralTerminal>(&c.terminal)) {
    out << "omega* = " << poly->omega_star << " (" << poly->H.rows()
        << " terminal rows)\n";
  } else {
    const auto& quad = std::get<QuadraticTerminal>(c.terminal);
    out << "gamma = " << format_bound(quad.gamma) << '\n';
  }
  out << "Prediction horizon: " << c.horizon << '\n';
}

struct Loaded {
  RunConfig cfg;
  ValidationReport report;
};

// Loads and validates, printing the constraint listing and, on failure,
// the diagnostic. Returns the exit code.
int load_and_validate(const std::string& path, std::ostream& out,
                      std::ostream& err, Loaded& loaded) {
  try {
    loaded.cfg = load_config(path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  out << list_constraints(loaded.cfg.X, loaded.cfg.U);
  loaded.report = validate(loaded.cfg);
  if (!loaded.report.ok()) {
    out << loaded.report.message << '\n';
    return loaded.report.exit_code;
  }
  return kExitOk;
}

double final_error(const SimTrace& trace, const Vector& r) {
  return (trace.records.back().y - r).cwiseAbs().maxCoeff();
}

int run_sim(const Loaded& l, std::ostream& out, std::ostream& err,
            const std::string& out_dir, bool realtime) {
  SimConfig sim;
  sim.steps = l.cfg.steps;
  sim.budget = l.cfg.budget;
  sim.x0 = l.cfg.x0;
  sim.realtime = realtime;
  try {
    const SimTrace trace = run_closed_loop(*l.report.controller, sim);
    write_outputs(out_dir, trace, l.cfg.X, l.cfg.U);
    long accepted = 0;
    for (const auto& r : trace.records) accepted += r.accepted;
    out << "Simulated " << trace.records.size() << " time instants, "
        << accepted << " accepted updates, final |y - r| = "
        << format_bound(final_error(trace, l.report.controller->target.r))
        << '\n'
        << "Wrote " << out_dir << "/trace.csv\n";
  } catch (const SimulationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSimulation;
  } catch (const RegionOfAttractionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRegion;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Anytime feasible MPC toolbox"};
  app.require_subcommand(1);

  std::string config;
  auto* check = app.add_subcommand("check", "Validate a configuration");
  check->add_option("config", config, "JSON configuration")->required();

  auto* run = app.add_subcommand("run", "Closed-loop simulation");
  run->add_option("config", config, "JSON configuration")->required();
  long budget = -1;
  double deadline_ms = -1.0;
  std::string terminal;
  int steps = -1;
  std::string out_dir = "out";
  bool realtime = false;
  auto* budget_opt =
      run->add_option("--budget", budget, "Flow iterations per time instant");
  run->add_option("--deadline-ms", deadline_ms,
                  "Wall-clock budget per time instant")
      ->excludes(budget_opt);
  run->add_option("--terminal", terminal, "prediction or lyapunov");
  run->add_option("--steps", steps, "Number of time instants");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--realtime", realtime, "Pace steps to the sampling period");

  auto* sweep = app.add_subcommand("sweep", "Compare iteration budgets");
  sweep->add_option("config", config, "JSON configuration")->required();
  std::vector<long> budgets;
  sweep->add_option("--budgets", budgets, "Comma-separated budgets")
      ->required()
      ->delimiter(',');
  std::string sweep_dir = "sweep";
  sweep->add_option("--out", sweep_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  Loaded loaded;
  if (check->parsed()) {
    const int code = load_and_validate(config, out, err, loaded);
    if (code == kExitOk) {
      describe(out, loaded.cfg, loaded.report);
      out << "Status: OK\n";
    }
    return code;
  }

  if (run->parsed()) {
    try {
      loaded.cfg = load_config(config);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }
    try {
      if (!terminal.empty()) loaded.cfg.method = parse_method(terminal);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    if (steps > 0) loaded.cfg.steps = steps;
    if (budget >= 0) {
      loaded.cfg.budget.iterations = budget;
      loaded.cfg.budget.deadline_ms.reset();
    }
    if (deadline_ms > 0.0) loaded.cfg.budget.deadline_ms = deadline_ms;
    out << list_constraints(loaded.cfg.X, loaded.cfg.U);
    loaded.report = validate(loaded.cfg);
    if (!loaded.report.ok()) {
      out << loaded.report.message << '\n';
      return loaded.report.exit_code;
    }
    describe(out, loaded.cfg, loaded.report);
    return run_sim(loaded, out, err, out_dir, realtime);
  }

  // sweep
  const int code = load_and_validate(config, out, err, loaded);
  if (code != kExitOk) return code;
  describe(out, loaded.cfg, loaded.report);
  for (long b : budgets) {
    if (b < 0) {
      err << "error: budgets must be >= 0\n";
      return kExitUsage;
    }
  }
  struct SweepResult {
    long budget;
    std::optional<SimTrace> trace;
    std::string error;
  };
  std::vector<std::future<SweepResult>> jobs;
  for (long b : budgets) {
    jobs.push_back(std::async(std::launch::async, [&loaded, b] {
      SimConfig sim;
      sim.steps = loaded.cfg.steps;
      sim.budget.iterations = b;
      sim.x0 = loaded.cfg.x0;
      SweepResult r{b, std::nullopt, {}};
      try {
        r.trace = run_closed_loop(*loaded.report.controller, sim);
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      return r;
    }));
  }
  int status = kExitOk;
  out << "budget,final_abs_error,accepted,feasible\n";
  for (auto& job : jobs) {
    SweepResult r = job.get();
    if (!r.trace) {
      err << "error: budget " << r.budget << ": " << r.error << '\n';
      status = kExitSimulation;
      continue;
    }
    const std::string dir = sweep_dir + "/budget_" + std::to_string(r.budget);
    write_outputs(dir, *r.trace, loaded.cfg.X, loaded.cfg.U);
    long accepted = 0;
    for (const auto& rec : r.trace->records) accepted += rec.accepted;
    out << r.budget << ','
        << format_bound(
               final_error(*r.trace, loaded.report.controller->target.r))
        << ',' << accepted << ",1\n";
  }
  return status;
}

}  // namespace reap
