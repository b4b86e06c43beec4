#include "bipnav/qp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bipnav::qp {

namespace {

constexpr double kTol = 1e-10;
constexpr double kPivotMin = 1e-10;   // smallest acceptable Cholesky pivot (L_ii^2)
constexpr double kRegEps = 1e-9;

void validate(const QpProblem& p) {
  const int n = p.n();
  if (n <= 0 || n > 64) throw std::invalid_argument("qp: n out of range");
  if (p.Q.cols() != n || p.c.size() != n) throw std::invalid_argument("qp: Q/c shape");
  if (p.A_in.rows() != p.b_in.size()) throw std::invalid_argument("qp: A_in/b_in shape");
  if (p.A_eq.rows() != p.b_eq.size()) throw std::invalid_argument("qp: A_eq/b_eq shape");
  if (p.m() > 0 && p.A_in.cols() != n) throw std::invalid_argument("qp: A_in cols");
  if (p.p() > 0 && p.A_eq.cols() != n) throw std::invalid_argument("qp: A_eq cols");
  if (p.m() + p.p() > 256) throw std::invalid_argument("qp: too many constraint rows");
  const double scale = 1.0 + p.Q.cwiseAbs().maxCoeff();
  if ((p.Q - p.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("qp: Q not symmetric");
}

}  // namespace

const char* to_string(QpStatus s) {
  switch (s) {
    case QpStatus::kOptimal: return "optimal";
    case QpStatus::kInfeasible: return "infeasible";
    case QpStatus::kMaxIterations: return "max-iterations";
  }
  return "?";
}

double check_kkt(const QpProblem& p, const QpSolution& s) {
  const int m = p.m(), pe = p.p();
  Eigen::VectorXd lam_in = s.lambda.head(m);
  Eigen::VectorXd lam_eq = s.lambda.tail(pe);
  Eigen::VectorXd grad = p.Q * s.z + p.c;
  if (m > 0) grad += p.A_in.transpose() * lam_in;
  if (pe > 0) grad += p.A_eq.transpose() * lam_eq;
  double res = grad.cwiseAbs().maxCoeff();
  if (m > 0) {
    Eigen::VectorXd slack = p.A_in * s.z - p.b_in;
    res = std::max(res, slack.maxCoeff());                            // primal feasibility
    res = std::max(res, -std::min(0.0, lam_in.minCoeff()));           // dual feasibility
    res = std::max(res, (lam_in.array() * slack.array()).abs().maxCoeff());
  }
  if (pe > 0) res = std::max(res, (p.A_eq * s.z - p.b_eq).cwiseAbs().maxCoeff());
  return res;
}

QpSolution QpSolver::solve(const QpProblem& problem, int max_iter) {
  validate(problem);
  const int n = problem.n(), m = problem.m(), pe = problem.p();
  if (max_iter <= 0) max_iter = 50 * (m + pe + 1);

  QpSolution sol;
  sol.z = Eigen::VectorXd::Zero(n);
  sol.lambda = Eigen::VectorXd::Zero(m + pe);

  Eigen::MatrixXd Q = 0.5 * (problem.Q + problem.Q.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(Q);
  bool bad = llt.info() != Eigen::Success;
  if (!bad) {
    const auto L = llt.matrixLLT();
    for (int i = 0; i < n; ++i) bad = bad || !(L(i, i) * L(i, i) >= kPivotMin);
  }
  if (bad) {
    Q += kRegEps * Eigen::MatrixXd::Identity(n, n);
    llt.compute(Q);
    sol.regularized = true;
    if (llt.info() != Eigen::Success) throw std::invalid_argument("qp: Q not PSD");
  }

  // Rows stacked inequalities-then-equalities; index i>=m is an equality.
  const int total = m + pe;
  auto row = [&](int i) -> Eigen::RowVectorXd {
    return i < m ? problem.A_in.row(i) : problem.A_eq.row(i - m);
  };
  auto rhs = [&](int i) -> double { return i < m ? problem.b_in(i) : problem.b_eq(i - m); };

  // Trivial rows: an all-zero normal can never be tightened.
  for (int i = 0; i < total; ++i) {
    if (row(i).cwiseAbs().maxCoeff() <= 1e-14) {
      const double b = rhs(i);
      const bool ok = (i < m) ? (b >= -kTol) : (std::abs(b) <= kTol);
      if (!ok) {
        sol.status = QpStatus::kInfeasible;
        return sol;
      }
    }
  }

  Eigen::VectorXd z = llt.solve(-problem.c);  // unconstrained optimum
  std::vector<int> active;                    // working set, row indices
  Eigen::VectorXd lam_active(0);

  // Q^{-1} N and the factorization of S = N' Q^{-1} N for the working set.
  Eigen::MatrixXd QiN(n, 0);
  Eigen::LDLT<Eigen::MatrixXd> Sldlt;
  auto refresh = [&]() {
    const int q = static_cast<int>(active.size());
    Eigen::MatrixXd N(n, q);
    for (int j = 0; j < q; ++j) N.col(j) = row(active[j]).transpose();
    QiN = llt.solve(N);
    if (q > 0) Sldlt.compute(N.transpose() * QiN);
  };

  // Equalities enter the working set up front; a violated or dependent
  // equality surfaces later as an unbounded dual direction.
  for (int i = m; i < total; ++i) active.push_back(i);
  refresh();
  if (!active.empty()) {
    const int q = static_cast<int>(active.size());
    Eigen::MatrixXd N(n, q);
    for (int j = 0; j < q; ++j) N.col(j) = row(active[j]).transpose();
    Eigen::VectorXd beq(q);
    for (int j = 0; j < q; ++j) beq(j) = rhs(active[j]);
    lam_active = -Sldlt.solve(beq + N.transpose() * llt.solve(problem.c));
    z = llt.solve(-(problem.c + N * lam_active));
    // Inconsistent equalities leave residuals behind.
    for (int j = 0; j < q; ++j) {
      if (std::abs(row(active[j]).dot(z) - rhs(active[j])) > 1e-7) {
        sol.status = QpStatus::kInfeasible;
        return sol;
      }
    }
  }

  const double feas_tol = 1e-9;
  int iter = 0;
  while (true) {
    if (++iter > max_iter) {
      sol.status = QpStatus::kMaxIterations;
      break;
    }
    // Most violated inactive inequality; lowest index on ties.
    int k = -1;
    double worst = feas_tol;
    for (int i = 0; i < m; ++i) {
      bool in_active = false;
      for (int a : active)
        if (a == i) {
          in_active = true;
          break;
        }
      if (in_active) continue;
      const double v = row(i).dot(z) - rhs(i);
      if (v > worst) {
        worst = v;
        k = i;
      }
    }
    if (k < 0) {
      sol.status = QpStatus::kOptimal;
      break;
    }

    const Eigen::VectorXd a = row(k).transpose();
    // Work the violated constraint in, dropping blockers as needed. Its
    // multiplier accumulates across partial steps.
    double mu_k = 0.0;
    bool resolved = false;
    while (!resolved) {
      if (++iter > max_iter) break;
      const int q = static_cast<int>(active.size());
      const Eigen::VectorXd Qia = llt.solve(a);
      Eigen::VectorXd r(q), dz;
      if (q > 0) {
        Eigen::MatrixXd N(n, q);
        for (int j = 0; j < q; ++j) N.col(j) = row(active[j]).transpose();
        r = Sldlt.solve(N.transpose() * Qia);
        dz = -(Qia - QiN * r);
      } else {
        r.resize(0);
        dz = -Qia;
      }
      const double curvature = -a.dot(dz);  // a' H a >= 0
      const double viol = a.dot(z) - rhs(k);
      if (viol <= feas_tol) {  // satisfied after a drop
        resolved = true;
        break;
      }

      double mu_full = std::numeric_limits<double>::infinity();
      if (curvature > kTol) mu_full = viol / curvature;
      double mu_partial = std::numeric_limits<double>::infinity();
      int drop = -1;
      for (int j = 0; j < q; ++j) {
        if (active[j] >= m) continue;  // equality multipliers are free
        if (r(j) > kTol) {
          const double t = lam_active(j) / r(j);
          if (t < mu_partial - 1e-15) {
            mu_partial = t;
            drop = j;
          }
        }
      }
      if (!std::isfinite(mu_full) && drop < 0) {
        sol.status = QpStatus::kInfeasible;
        sol.z = z;
        return sol;
      }
      const double mu = std::min(mu_full, mu_partial);
      if (curvature > kTol) z += mu * dz;
      if (q > 0) lam_active -= mu * r;
      mu_k += mu;

      if (mu_partial < mu_full) {
        active.erase(active.begin() + drop);
        Eigen::VectorXd nl(active.size());
        for (int j = 0, o = 0; j < q; ++j)
          if (j != drop) nl(o++) = lam_active(j);
        lam_active = nl;
        refresh();
        // loop again on the same violated constraint
      } else {
        active.push_back(k);
        Eigen::VectorXd nl(active.size());
        nl.head(q) = lam_active;
        nl(q) = mu_k;
        lam_active = nl;
        refresh();
        resolved = true;
      }
    }
    if (iter > max_iter) {
      sol.status = QpStatus::kMaxIterations;
      break;
    }
  }

  sol.z = z;
  sol.lambda.setZero();
  for (size_t j = 0; j < active.size(); ++j) {
    const double v = lam_active(static_cast<int>(j));
    sol.lambda(active[j]) = (active[j] < m) ? std::max(0.0, v) : v;
  }
  sol.objective = 0.5 * z.dot(problem.Q * z) + problem.c.dot(z);
  sol.iterations = iter;
  sol.kkt_residual = check_kkt(problem, sol);
  if (sol.status == QpStatus::kOptimal && sol.kkt_residual > 1e-6)
    sol.status = QpStatus::kMaxIterations;  // never report a bad certificate as optimal
  return sol;
}

QpSolution solve(const QpProblem& problem, int max_iter) {
  QpSolver s;
  return s.solve(problem, max_iter);
}

}  // namespace bipnav::qp
