#include "reap/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "reap/errors.hpp"
#include "reap/lp.hpp"
#include "reap/projection.hpp"

namespace reap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rows with a zero gradient depend only on the measured state.
bool constant_row(const QpProblem& qp, Eigen::Index i) {
  return qp.G.row(i).cwiseAbs().maxCoeff() == 0.0;
}

struct LinearPart {
  Matrix G;
  Vector b;
};

LinearPart active_linear_rows(const QpProblem& qp) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < qp.G.rows(); ++i) {
    if (!constant_row(qp, i)) keep.push_back(i);
  }
  LinearPart out{Matrix(keep.size(), qp.G.cols()), Vector(keep.size())};
  for (size_t r = 0; r < keep.size(); ++r) {
    out.G.row(r) = qp.G.row(keep[r]);
    out.b(r) = qp.b(keep[r]);
  }
  return out;
}

double quadratic_value(const QuadraticRow& q, const Vector& u) {
  const Vector e = q.E * u + q.e0;
  return e.dot(q.Psi * e) - q.level;
}

Vector quadratic_gradient(const QuadraticRow& q, const Vector& u) {
  return 2.0 * q.E.transpose() * (q.Psi * (q.E * u + q.e0));
}

struct Phase1 {
  bool feasible = false;
  Vector u;
  double margin = 0.0;
};

// max s s.t. G_i u / |G_i| + s <= b_i / |G_i|, extra cuts, s <= 1.
Phase1 phase1(const LinearPart& lin, const Matrix& cut_G, const Vector& cut_b,
              int np) {
  const auto m = lin.G.rows() + cut_G.rows();
  LpProblem lp;
  lp.objective = Vector::Zero(np + 1);
  lp.objective(np) = 1.0;
  lp.ineq_lhs = Matrix::Zero(m + 1, np + 1);
  lp.ineq_rhs = Vector::Zero(m + 1);
  auto put = [&](Eigen::Index r, const Eigen::RowVectorXd& row, double rhs) {
    const double norm = row.norm();
    lp.ineq_lhs.block(r, 0, 1, np) = row / norm;
    lp.ineq_lhs(r, np) = 1.0;
    lp.ineq_rhs(r) = rhs / norm;
  };
  for (Eigen::Index i = 0; i < lin.G.rows(); ++i) put(i, lin.G.row(i), lin.b(i));
  for (Eigen::Index i = 0; i < cut_G.rows(); ++i) {
    put(lin.G.rows() + i, cut_G.row(i), cut_b(i));
  }
  lp.ineq_lhs(m, np) = 1.0;
  lp.ineq_rhs(m) = 1.0;
  const LpResult res = lp_solve(lp);
  Phase1 out;
  if (res.status != LpStatus::kOptimal) return out;
  out.u = res.argmax->head(np);
  out.margin = (*res.argmax)(np);
  out.feasible = out.margin > 1e-12;
  return out;
}

// Largest t in [0, 1] keeping the segment u + t d inside every row.
double max_step(const QpProblem& qp, const LinearPart& lin, const Vector& u,
                const Vector& d) {
  double t = kInf;
  const Vector Gd = lin.G * d;
  const Vector slack = lin.b - lin.G * u;
  for (Eigen::Index i = 0; i < Gd.size(); ++i) {
    if (Gd(i) > 0.0) t = std::min(t, slack(i) / Gd(i));
  }
  if (qp.quadratic) {
    const auto& q = *qp.quadratic;
    const Vector Ed = q.E * d;
    const double a = Ed.dot(q.Psi * Ed);
    const double bq = Ed.dot(q.Psi * (q.E * u + q.e0));
    const double c = quadratic_value(q, u);
    if (a > 0.0) {
      t = std::min(t, (-bq + std::sqrt(std::max(bq * bq - a * c, 0.0))) / a);
    } else if (bq > 0.0) {
      t = std::min(t, -c / (2.0 * bq));
    }
  }
  return t;
}

bool strictly_feasible(const QpProblem& qp, const Vector& u) {
  const Vector g = qp.constraints(u);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (i < qp.linear_rows() && constant_row(qp, i)) continue;
    if (!(g(i) < 0.0)) return false;
  }
  return true;
}

}  // namespace

double resolve_dtau(const QpProblem& qp, const SolverSettings& settings) {
  if (settings.dtau) {
    if (!(*settings.dtau > 0.0)) throw ConfigError("dtau must be positive");
    return *settings.dtau;
  }
  double lmax = 0.0;
  if (qp.Hq.size() > 0) {
    lmax = Eigen::SelfAdjointEigenSolver<Matrix>(qp.Hq, Eigen::EigenvaluesOnly)
               .eigenvalues()
               .maxCoeff();
  }
  if (!(lmax > 0.0)) return 1e-3;
  return 0.5 / (settings.sigma_max * lmax);
}

double sigma_update(const ReapIterate& it, const QpProblem& qp,
                    const SolverSettings& settings) {
  const Vector g = qp.constraints(it.u_hat);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (i < qp.linear_rows() && constant_row(qp, i)) continue;
    worst = std::max(worst, g(i) + qp.tightening);
  }
  const double limit = 1.0 - settings.eta;
  double sigma = settings.sigma_max;
  for (int j = 0; j <= 40; ++j) {
    if (sigma * worst <= limit) break;
    sigma *= 0.5;
  }
  return std::max(sigma, settings.sigma_min);
}

ReapIterate initialize_at_k0(const QpProblem& qp,
                             const SolverSettings& settings) {
  const int np = qp.decision_size();
  for (Eigen::Index i = 0; i < qp.linear_rows(); ++i) {
    if (constant_row(qp, i) && qp.b(i) < 0.0) {
      throw RegionOfAttractionError();
    }
  }
  const LinearPart lin = active_linear_rows(qp);

  Vector u = Vector::Zero(np);
  Matrix cut_G(0, np);
  Vector cut_b(0);
  if (lin.G.rows() > 0 || qp.quadratic) {
    Phase1 p1 = phase1(lin, cut_G, cut_b, np);
    if (!p1.feasible) throw RegionOfAttractionError();
    if (qp.quadratic) {
      // Kelley cutting planes for the convex terminal row.
      const auto& q = *qp.quadratic;
      bool done = false;
      for (int iter = 0; iter < 200; ++iter) {
        const double gq = quadratic_value(q, p1.u);
        if (gq < 0.0) {
          done = true;
          break;
        }
        const Vector grad = quadratic_gradient(q, p1.u);
        if (grad.norm() == 0.0) break;
        cut_G.conservativeResize(cut_G.rows() + 1, Eigen::NoChange);
        cut_b.conservativeResize(cut_b.size() + 1);
        cut_G.row(cut_G.rows() - 1) = grad.transpose();
        cut_b(cut_b.size() - 1) = grad.dot(p1.u) - gq;
        p1 = phase1(lin, cut_G, cut_b, np);
        if (!p1.feasible) break;
      }
      if (!done) throw HorizonError();
    }
    u = p1.u;
  }

  // Pull toward the unconstrained minimizer while staying interior.
  Eigen::LDLT<Matrix> ldlt(qp.Hq);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() && np > 0) {
    const Vector u_unc = -ldlt.solve(qp.fq);
    const Vector d = u_unc - u;
    if (u_unc.allFinite() && d.norm() > 0.0) {
      if (strictly_feasible(qp, u_unc)) {
        u = u_unc;
      } else {
        const double t = std::min(max_step(qp, lin, u, d), 1.0);
        const Vector candidate = u + 0.99 * t * d;
        if (strictly_feasible(qp, candidate)) u = candidate;
      }
    }
  }

  ReapIterate it;
  it.u_hat = u;
  it.lam_hat = Vector::Ones(qp.rows());
  it.tau = 0;
  it.dtau = resolve_dtau(qp, settings);
  it.sigma = sigma_update(it, qp, settings);
  return it;
}

ReapIterate flow_step(const ReapIterate& it, const QpProblem& qp,
                      const SolverSettings& settings) {
  ReapIterate next = it;
  next.tau = it.tau + 1;
  next.sigma = sigma_update(it, qp, settings);
  BarrierGradients grads;
  try {
    grads = barrier_gradients(qp, it.u_hat, it.lam_hat, next.sigma);
  } catch (const BarrierDomainError&) {
    return next;
  }
  const double h = next.sigma * it.dtau;
  if (h == 0.0) return next;

  Vector candidate = it.u_hat - h * grads.grad_u;
  const LinearPart lin = active_linear_rows(qp);
  if (lin.G.rows() > 0) {
    const Vector margin = 1e-10 * lin.b.cwiseAbs().cwiseMax(1.0);
    candidate =
        project_onto_polytope(lin.G, lin.b - margin, it.u_hat, candidate);
  }

  const Vector direction = candidate - it.u_hat;
  double t = 1.0;
  for (int k = 0; k <= settings.max_backtracks; ++k) {
    const Vector trial = it.u_hat + t * direction;
    if (qp.feasible(trial)) {
      next.u_hat = trial;
      next.lam_hat =
          (it.lam_hat + t * h * grads.grad_lam).cwiseMax(0.0);
      return next;
    }
    t *= 0.5;
  }
  return next;
}

ReapIterate warm_start(const ReapIterate& prev, const DiscreteLti& model,
                       const Matrix& K, const SteadyTarget& target,
                       const QpProblem& qp_next, const Vector& x_pred_N,
                       const SolverSettings& settings, bool* fell_back) {
  (void)model;
  const int p = qp_next.inputs;
  const int np = qp_next.decision_size();
  if (prev.u_hat.size() != np || prev.lam_hat.size() != qp_next.rows()) {
    throw ConfigError("warm start: iterate does not match the problem");
  }
  ReapIterate it;
  it.u_hat.resize(np);
  it.u_hat.head(np - p) = prev.u_hat.tail(np - p);
  it.u_hat.tail(p) = target.ubar + K * (x_pred_N - target.xbar);

  std::map<std::tuple<int, int, int>, Eigen::Index> index;
  for (size_t i = 0; i < qp_next.tags.size(); ++i) {
    const auto& t = qp_next.tags[i];
    index[{static_cast<int>(t.kind), t.stage, t.index}] =
        static_cast<Eigen::Index>(i);
  }
  it.lam_hat = Vector::Ones(qp_next.rows());
  for (size_t i = 0; i < qp_next.tags.size(); ++i) {
    const auto& t = qp_next.tags[i];
    if (t.kind == RowKind::kTerminal) continue;
    const auto found =
        index.find({static_cast<int>(t.kind), t.stage + 1, t.index});
    if (found != index.end()) it.lam_hat(i) = prev.lam_hat(found->second);
  }
  it.tau = 0;
  it.dtau = prev.dtau;

  if (fell_back) *fell_back = false;
  if (!qp_next.feasible(it.u_hat)) {
    if (fell_back) *fell_back = true;
    return initialize_at_k0(qp_next, settings);
  }
  it.sigma = sigma_update(it, qp_next, settings);
  return it;
}

StepOutcome run_budgeted(const ReapIterate& it0, const QpProblem& qp,
                         const Budget& budget, const SolverSettings& settings,
                         const IterateObserver& observer) {
  if (budget.iterations < 0) throw ConfigError("budget must be >= 0");
  StepOutcome out;
  out.cost_before = qp.cost(it0.u_hat);
  ReapIterate it = it0;
  if (budget.deadline_ms) {
    using Clock = std::chrono::steady_clock;
    const auto stop =
        Clock::now() + std::chrono::duration<double, std::milli>(
                           *budget.deadline_ms);
    while (Clock::now() < stop) {
      it = flow_step(it, qp, settings);
      ++out.iterations_run;
      if (observer) observer(it);
    }
  } else {
    for (long i = 0; i < budget.iterations; ++i) {
      it = flow_step(it, qp, settings);
      ++out.iterations_run;
      if (observer) observer(it);
    }
  }
  out.cost_after = qp.cost(it.u_hat);
  out.accepted = out.cost_after < out.cost_before;
  out.final_iterate = it;
  if (!out.accepted) {
    out.cost_after = out.cost_before;
    out.final_iterate.u_hat = it0.u_hat;
  }
  out.applied_u = out.final_iterate.u_hat;
  return out;
}

}  // namespace reap
