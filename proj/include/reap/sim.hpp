#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "reap/qpform.hpp"
#include "reap/solver.hpp"
#include "reap/terminal.hpp"

namespace reap {

enum class TerminalMethod { kPrediction, kLyapunov };

const char* to_string(TerminalMethod method);

/// Everything the controller needs at run time.
struct Controller {
  DiscreteLti model;
  BoxSet X;
  BoxSet U;
  Weights weights;
  int horizon = 1;
  SteadyTarget target;
  Matrix K;
  TerminalMethod method = TerminalMethod::kPrediction;
  TerminalSet terminal;
  Prediction prediction;
  SolverSettings settings;
  double tightening = 0.0;

  QpProblem build(const Vector& x) const;
};

/// Computes Qn, K and the terminal set. Errors from the underlying
/// routines propagate unchanged.
Controller make_controller(const DiscreteLti& model, const BoxSet& X,
                           const BoxSet& U, const Matrix& Qx,
                           const Matrix& Qu, int horizon,
                           const SteadyTarget& target, TerminalMethod method,
                           const SolverSettings& settings = {},
                           double tightening = 0.0);

/// Sees every flow iterate together with the problem it belongs to.
using StepObserver =
    std::function<void(const QpProblem&, const ReapIterate&)>;

struct SimConfig {
  int steps = 1;
  Budget budget;
  Vector x0;
  /// Sleep so each step lasts at least the sampling period.
  bool realtime = false;
};

struct SimRecord {
  int k = 0;
  Vector x;
  Vector u;
  Vector y;
  double sigma = 0.0;
  long iterations = 0;
  bool accepted = false;
  double cost = 0.0;
};

struct SimTrace {
  std::vector<SimRecord> records;
  /// Steps where the shifted plan was infeasible and the solver restarted.
  int warm_start_fallbacks = 0;
};

/// Plant plus controller under logical execution time: the input applied at
/// k was computed during step k-1 from the prediction of x(k).
class ClosedLoop {
 public:
  ClosedLoop(const Controller& controller, const Vector& x0, Budget budget);

  /// Applies the pending input to the current state, records the instant
  /// and computes the input for the next one.
  /// The observer also sees the warm-started iterate (tau = 0).
  SimRecord step(const StepObserver& observer = {});

  const Vector& state() const { return x_; }
  /// Overrides the current state; the already computed input is kept.
  void set_state(const Vector& x) { x_ = x; }
  const Vector& pending_input() const { return u_next_; }
  int time() const { return k_; }
  int fallbacks() const { return fallbacks_; }

 private:
  const Controller& c_;
  Budget budget_;
  Vector x_;
  Vector u_next_;
  ReapIterate plan_;
  QpProblem plan_qp_;
  int k_ = 0;
  int fallbacks_ = 0;
};

SimTrace run_closed_loop(const Controller& controller, const SimConfig& cfg);

/// CSV with header k,x_1..,u_1..,y_1..,sigma,iterations,accepted,cost.
std::string trace_csv(const SimTrace& trace);

/// Min/max/final per signal and the smallest distance to each bound.
std::string render_report(const SimTrace& trace, const BoxSet& X,
                          const BoxSet& U);

/// Writes trace.csv, report.txt, sigma.csv, states.csv, inputs.csv and
/// outputs.csv into `dir`, creating it if needed.
void write_outputs(const std::filesystem::path& dir, const SimTrace& trace,
                   const BoxSet& X, const BoxSet& U);

}  // namespace reap
