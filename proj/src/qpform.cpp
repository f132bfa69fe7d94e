#include "reap/qpform.hpp"

#include <cmath>

#include "reap/errors.hpp"

namespace reap {

Prediction build_prediction(const DiscreteLti& model, int horizon) {
  if (horizon < 1) throw ConfigError("prediction horizon must be >= 1");
  const int n = model.states();
  const int p = model.inputs();
  Prediction pred;
  pred.horizon = horizon;
  pred.Sx.resize((horizon + 1) * n, n);
  pred.Su = Matrix::Zero((horizon + 1) * n, horizon * p);

  pred.Sx.topRows(n) = Matrix::Identity(n, n);
  for (int s = 1; s <= horizon; ++s) {
    pred.Sx.middleRows(s * n, n) = model.A * pred.Sx.middleRows((s - 1) * n, n);
    // Block row s = A * (block row s-1), plus B in column block s-1.
    pred.Su.block(s * n, 0, n, (s - 1) * p) =
        model.A * pred.Su.block((s - 1) * n, 0, n, (s - 1) * p);
    pred.Su.block(s * n, (s - 1) * p, n, p) = model.B;
  }
  return pred;
}

QpProblem QpProblem::dense(Matrix H, Vector f, Matrix G, Vector b,
                           double c0) {
  if (H.rows() != H.cols() || f.size() != H.rows() ||
      G.cols() != H.cols() || b.size() != G.rows()) {
    throw ConfigError("QP: inconsistent dimensions");
  }
  QpProblem qp;
  qp.Hq = std::move(H);
  qp.fq = std::move(f);
  qp.c0 = c0;
  qp.G = std::move(G);
  qp.b = std::move(b);
  qp.tags.assign(qp.G.rows(), RowTag{RowKind::kTerminal, -1, 0});
  for (int i = 0; i < qp.G.rows(); ++i) qp.tags[i].index = i;
  return qp;
}

double QpProblem::cost(const Vector& u) const {
  if (Su.size() == 0) return 0.5 * u.dot(Hq * u) + fq.dot(u) + c0;
  const int n = states;
  const int p = inputs;
  const Vector e = free_error + Su * u;
  double J = 0.0;
  for (int s = 0; s < horizon; ++s) {
    const auto es = e.segment(s * n, n);
    const auto du = u.segment(s * p, p) - uref.segment(s * p, p);
    J += es.dot(Qx * es) + du.dot(Qu * du);
  }
  const auto eN = e.segment(horizon * n, n);
  return J + eN.dot(Qn * eN);
}

Vector QpProblem::constraints(const Vector& u) const {
  Vector g(rows());
  g.head(linear_rows()) = G * u - b;
  if (quadratic) {
    const Vector e = quadratic->E * u + quadratic->e0;
    g(linear_rows()) = e.dot(quadratic->Psi * e) - quadratic->level;
  }
  return g;
}

Matrix QpProblem::jacobian(const Vector& u) const {
  Matrix J(rows(), decision_size());
  J.topRows(linear_rows()) = G;
  if (quadratic) {
    const Vector e = quadratic->E * u + quadratic->e0;
    J.row(linear_rows()) =
        2.0 * (quadratic->E.transpose() * (quadratic->Psi * e)).transpose();
  }
  return J;
}

bool QpProblem::feasible(const Vector& u) const {
  const Vector g = constraints(u);
  return g.size() == 0 || g.maxCoeff() <= 0.0;
}

Vector QpProblem::terminal_state(const Vector& u) const {
  if (Su.size() == 0) throw ConfigError("QP has no prediction data");
  return terminal_offset + free_error.tail(states) +
         Su.bottomRows(states) * u;
}

namespace {

void append_row(QpProblem& qp, const Eigen::RowVectorXd& row, double rhs,
                RowTag tag) {
  const auto r = qp.G.rows();
  qp.G.conservativeResize(r + 1, Eigen::NoChange);
  qp.b.conservativeResize(r + 1);
  qp.G.row(r) = row;
  qp.b(r) = rhs;
  qp.tags.push_back(tag);
}

}  // namespace

QpProblem build_qp(const DiscreteLti& model, const Prediction& prediction,
                   const Weights& weights, const SteadyTarget& target,
                   const BoxSet& X, const BoxSet& U,
                   const TerminalSet& terminal, const Vector& x_now,
                   double tightening) {
  const int n = model.states();
  const int p = model.inputs();
  const int N = prediction.horizon;
  if (x_now.size() != n) throw ConfigError("state length must equal n");

  QpProblem qp;
  qp.horizon = N;
  qp.states = n;
  qp.inputs = p;
  qp.tightening = tightening;
  qp.Qx = weights.Qx;
  qp.Qu = weights.Qu;
  qp.Qn = weights.Qn;
  qp.Su = prediction.Su;
  qp.uref = target.ubar.replicate(N, 1);
  // Deviation form: uses x̄ = A x̄ + B ū so that e vanishes bit-exactly at
  // the equilibrium instead of up to the rounding of Sx x̄ - x̄.
  qp.free_error = prediction.Sx * (x_now - target.xbar) - prediction.Su * qp.uref;
  qp.terminal_offset = target.xbar;

  // Block-diagonal weights applied block by block.
  const int Np = N * p;
  Matrix QSu(prediction.Su.rows(), Np);
  Vector Qfree(qp.free_error.size());
  for (int s = 0; s <= N; ++s) {
    const Matrix& Q = s < N ? weights.Qx : weights.Qn;
    QSu.middleRows(s * n, n) = Q * prediction.Su.middleRows(s * n, n);
    Qfree.segment(s * n, n) = Q * qp.free_error.segment(s * n, n);
  }
  Matrix RU(Np, Np);
  RU.setZero();
  Vector Ruref(Np);
  for (int s = 0; s < N; ++s) {
    RU.block(s * p, s * p, p, p) = weights.Qu;
    Ruref.segment(s * p, p) = weights.Qu * target.ubar;
  }
  qp.Hq = 2.0 * (prediction.Su.transpose() * QSu + RU);
  qp.Hq = 0.5 * (qp.Hq + qp.Hq.transpose()).eval();
  qp.fq = 2.0 * (prediction.Su.transpose() * Qfree - Ruref);
  qp.c0 = qp.free_error.dot(Qfree) + qp.uref.dot(Ruref);

  qp.G.resize(0, Np);
  qp.b.resize(0);
  for (int s = 0; s < N; ++s) {
    const Matrix Sus = prediction.Su.middleRows(s * n, n);
    const Vector free = prediction.Sx.middleRows(s * n, n) * x_now;
    for (int i = 0; i < n; ++i) {
      if (std::isfinite(X.upper()(i))) {
        append_row(qp, Sus.row(i), X.upper()(i) - free(i),
                   {RowKind::kStateUpper, s, i});
      }
    }
    for (int i = 0; i < n; ++i) {
      if (std::isfinite(X.lower()(i))) {
        append_row(qp, -Sus.row(i), free(i) - X.lower()(i),
                   {RowKind::kStateLower, s, i});
      }
    }
    for (int j = 0; j < p; ++j) {
      if (std::isfinite(U.upper()(j))) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(Np);
        row(s * p + j) = 1.0;
        append_row(qp, row, U.upper()(j), {RowKind::kInputUpper, s, j});
      }
    }
    for (int j = 0; j < p; ++j) {
      if (std::isfinite(U.lower()(j))) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(Np);
        row(s * p + j) = -1.0;
        append_row(qp, row, -U.lower()(j), {RowKind::kInputLower, s, j});
      }
    }
  }

  const Matrix SuN = prediction.Su.bottomRows(n);
  const Vector freeN = prediction.Sx.bottomRows(n) * x_now;
  if (const auto* poly = std::get_if<PolyhedralTerminal>(&terminal)) {
    const Matrix rows = poly->H * SuN;
    const Vector rhs = poly->h - poly->H * freeN;
    for (int r = 0; r < rows.rows(); ++r) {
      append_row(qp, rows.row(r), rhs(r), {RowKind::kTerminal, -1, r});
    }
  } else {
    const auto& quad = std::get<QuadraticTerminal>(terminal);
    if (std::isfinite(quad.gamma)) {
      qp.quadratic = QuadraticRow{SuN, freeN - quad.xbar, quad.Psi,
                                  quad.gamma};
    }
  }
  return qp;
}

namespace {

Vector barrier_denominators(const QpProblem& qp, const Vector& g,
                            double sigma) {
  Vector d = 1.0 - sigma * (g.array() + qp.tightening);
  if (d.size() > 0 && !(d.minCoeff() > 0.0)) throw BarrierDomainError();
  return d;
}

void check_sizes(const QpProblem& qp, const Vector& u, const Vector& lam,
                 double sigma) {
  if (u.size() != qp.decision_size() || lam.size() != qp.rows()) {
    throw ConfigError("barrier: dimension mismatch");
  }
  if (!(sigma > 0.0)) throw ConfigError("barrier: sigma must be positive");
}

}  // namespace

double barrier_value(const QpProblem& qp, const Vector& u, const Vector& lam,
                     double sigma) {
  check_sizes(qp, u, lam, sigma);
  const Vector g = qp.constraints(u);
  const Vector d = barrier_denominators(qp, g, sigma);
  double penalty = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (lam(i) != 0.0) penalty += lam(i) * std::log(d(i));
  }
  return qp.cost(u) - penalty / sigma;
}

BarrierGradients barrier_gradients(const QpProblem& qp, const Vector& u,
                                   const Vector& lam, double sigma) {
  check_sizes(qp, u, lam, sigma);
  const Vector g = qp.constraints(u);
  const Vector d = barrier_denominators(qp, g, sigma);
  BarrierGradients out;
  const Vector weights = lam.array() / d.array();
  out.grad_u = qp.Hq * u + qp.fq + qp.jacobian(u).transpose() * weights;
  out.grad_lam = -d.array().log() / sigma;
  return out;
}

}  // namespace reap
