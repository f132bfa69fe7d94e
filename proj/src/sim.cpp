#include "reap/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "reap/errors.hpp"
#include "reap/numerics.hpp"

namespace reap {

const char* to_string(TerminalMethod method) {
  return method == TerminalMethod::kPrediction ? "prediction" : "lyapunov";
}

QpProblem Controller::build(const Vector& x) const {
  return build_qp(model, prediction, weights, target, X, U, terminal, x,
                  tightening);
}

Controller make_controller(const DiscreteLti& model, const BoxSet& X,
                           const BoxSet& U, const Matrix& Qx,
                           const Matrix& Qu, int horizon,
                           const SteadyTarget& target, TerminalMethod method,
                           const SolverSettings& settings,
                           double tightening) {
  Controller c;
  c.model = model;
  c.X = X;
  c.U = U;
  c.horizon = horizon;
  c.target = target;
  c.method = method;
  c.settings = settings;
  c.tightening = tightening;
  c.weights.Qx = Qx;
  c.weights.Qu = Qu;
  c.weights.Qn = solve_dare(model.A, model.B, Qx, Qu);
  c.K = terminal_gain(model.A, model.B, Qu, c.weights.Qn);
  if (method == TerminalMethod::kPrediction) {
    c.terminal = compute_omega_star(model, c.K, target, X, U);
  } else {
    const Matrix Psi = solve_discrete_lyapunov(model.A + model.B * c.K);
    c.terminal = lyapunov_terminal_set(model, c.K, Psi, target, X, U);
  }
  c.prediction = build_prediction(model, horizon);
  return c;
}

ClosedLoop::ClosedLoop(const Controller& controller, const Vector& x0,
                       Budget budget)
    : c_(controller), budget_(budget), x_(x0) {
  if (x0.size() != controller.model.states()) {
    throw ConfigError("x0 length must equal n");
  }
  plan_qp_ = c_.build(x0);
  plan_ = initialize_at_k0(plan_qp_, c_.settings);
  u_next_ = plan_.u_hat.head(c_.model.inputs());
}

namespace {

void check_box(const BoxSet& box, const Vector& v, const char* name, int k) {
  for (int i = 0; i < box.size(); ++i) {
    const char* side = nullptr;
    if (v(i) > box.upper()(i)) side = "upper";
    if (v(i) < box.lower()(i)) side = "lower";
    if (side) {
      std::ostringstream os;
      os << "constraint violated at k=" << k << ": " << name << (i + 1)
         << " " << side << " bound (value " << v(i) << ")";
      throw SimulationError(os.str());
    }
  }
}

}  // namespace

SimRecord ClosedLoop::step(const StepObserver& observer) {
  const DiscreteLti& m = c_.model;
  const int p = m.inputs();
  SimRecord rec;
  rec.k = k_;
  rec.x = x_;
  rec.u = u_next_;
  rec.y = m.C * x_ + m.D * u_next_;
  check_box(c_.X, rec.x, "x", k_);
  check_box(c_.U, rec.u, "u", k_);

  const Vector x_next = m.A * x_ + m.B * u_next_;
  QpProblem qp = c_.build(x_next);
  bool fell_back = false;
  const ReapIterate it0 =
      warm_start(plan_, m, c_.K, c_.target, qp,
                 plan_qp_.terminal_state(plan_.u_hat), c_.settings,
                 &fell_back);
  if (fell_back) ++fallbacks_;
  IterateObserver per_iterate;
  if (observer) {
    observer(qp, it0);
    per_iterate = [&](const ReapIterate& it) { observer(qp, it); };
  }
  const StepOutcome out =
      run_budgeted(it0, qp, budget_, c_.settings, per_iterate);

  rec.sigma = out.final_iterate.sigma;
  rec.iterations = out.iterations_run;
  rec.accepted = out.accepted;
  rec.cost = out.cost_after;

  plan_ = out.final_iterate;
  plan_qp_ = std::move(qp);
  u_next_ = out.applied_u.head(p);
  x_ = x_next;
  ++k_;
  return rec;
}

SimTrace run_closed_loop(const Controller& controller, const SimConfig& cfg) {
  if (cfg.steps < 1) throw ConfigError("steps must be >= 1");
  ClosedLoop loop(controller, cfg.x0, cfg.budget);
  SimTrace trace;
  trace.records.reserve(cfg.steps);
  using Clock = std::chrono::steady_clock;
  const auto period =
      std::chrono::duration<double>(controller.model.dt);
  for (int k = 0; k < cfg.steps; ++k) {
    const auto start = Clock::now();
    trace.records.push_back(loop.step());
    if (cfg.realtime) std::this_thread::sleep_until(start + period);
  }
  trace.warm_start_fallbacks = loop.fallbacks();
  return trace;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void header(std::ostream& os, char prefix, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) os << ',' << prefix << '_' << i + 1;
}

void values(std::ostream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << num(v(i));
}

struct Dims {
  Eigen::Index n = 0, p = 0, m = 0;
};

Dims dims(const SimTrace& trace) {
  if (trace.records.empty()) return {};
  const auto& r = trace.records.front();
  return {r.x.size(), r.u.size(), r.y.size()};
}

std::string series_csv(const SimTrace& trace, char prefix,
                       const Vector SimRecord::*field) {
  std::ostringstream os;
  os << 'k';
  if (!trace.records.empty()) {
    header(os, prefix, (trace.records.front().*field).size());
  }
  os << '\n';
  for (const auto& r : trace.records) {
    os << r.k;
    values(os, r.*field);
    os << '\n';
  }
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

}  // namespace

std::string trace_csv(const SimTrace& trace) {
  const Dims d = dims(trace);
  std::ostringstream os;
  os << 'k';
  header(os, 'x', d.n);
  header(os, 'u', d.p);
  header(os, 'y', d.m);
  os << ",sigma,iterations,accepted,cost\n";
  for (const auto& r : trace.records) {
    os << r.k;
    values(os, r.x);
    values(os, r.u);
    values(os, r.y);
    os << ',' << num(r.sigma) << ',' << r.iterations << ','
       << (r.accepted ? 1 : 0) << ',' << num(r.cost) << '\n';
  }
  return os.str();
}

std::string render_report(const SimTrace& trace, const BoxSet& X,
                          const BoxSet& U) {
  std::ostringstream os;
  const auto& recs = trace.records;
  long accepted = 0;
  for (const auto& r : recs) accepted += r.accepted ? 1 : 0;
  os << "Time instants: " << recs.size() << '\n';
  os << "Accepted updates: " << accepted << '\n';
  os << "Warm-start restarts: " << trace.warm_start_fallbacks << '\n';
  if (recs.empty()) return os.str();

  auto block = [&](const char* title, char prefix,
                   const Vector SimRecord::*field, const BoxSet* box) {
    os << '\n' << title << '\n';
    os << "signal,min,max,final";
    if (box) os << ",min_upper_margin,min_lower_margin";
    os << '\n';
    const auto count = (recs.front().*field).size();
    for (Eigen::Index i = 0; i < count; ++i) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& r : recs) {
        lo = std::min(lo, (r.*field)(i));
        hi = std::max(hi, (r.*field)(i));
      }
      os << prefix << '_' << i + 1 << ',' << num(lo) << ',' << num(hi) << ','
         << num((recs.back().*field)(i));
      if (box) {
        os << ',' << format_bound(box->upper()(i) - hi) << ','
           << format_bound(lo - box->lower()(i));
      }
      os << '\n';
    }
  };
  block("States", 'x', &SimRecord::x, &X);
  block("Inputs", 'u', &SimRecord::u, &U);
  block("Outputs", 'y', &SimRecord::y, nullptr);
  return os.str();
}

void write_outputs(const std::filesystem::path& dir, const SimTrace& trace,
                   const BoxSet& X, const BoxSet& U) {
  std::filesystem::create_directories(dir);
  write_file(dir / "trace.csv", trace_csv(trace));
  write_file(dir / "report.txt", render_report(trace, X, U));
  std::ostringstream sigma;
  sigma << "k,sigma\n";
  for (const auto& r : trace.records) {
    sigma << r.k << ',' << num(r.sigma) << '\n';
  }
  write_file(dir / "sigma.csv", sigma.str());
  write_file(dir / "states.csv", series_csv(trace, 'x', &SimRecord::x));
  write_file(dir / "inputs.csv", series_csv(trace, 'u', &SimRecord::u));
  write_file(dir / "outputs.csv", series_csv(trace, 'y', &SimRecord::y));
}

}  // namespace reap
