#pragma once

#include <Eigen/Dense>
#include <string>

namespace bipnav::qp {

// Dense convex QP in standard form:
//   min  1/2 z'Qz + c'z
//   s.t. A_in z <= b_in
//        A_eq z  = b_eq
// Desk scale: n <= 64 variables, at most 256 constraint rows total.
struct QpProblem {
  Eigen::MatrixXd Q;      // n x n, symmetric PSD
  Eigen::VectorXd c;      // n
  Eigen::MatrixXd A_in;   // m x n
  Eigen::VectorXd b_in;   // m
  Eigen::MatrixXd A_eq;   // p x n
  Eigen::VectorXd b_eq;   // p

  int n() const { return static_cast<int>(Q.rows()); }
  int m() const { return static_cast<int>(A_in.rows()); }
  int p() const { return static_cast<int>(A_eq.rows()); }
};

enum class QpStatus { kOptimal, kInfeasible, kMaxIterations };

const char* to_string(QpStatus s);

struct QpSolution {
  Eigen::VectorXd z;       // primal optimizer
  Eigen::VectorXd lambda;  // multipliers, inequalities first then equalities
  QpStatus status = QpStatus::kMaxIterations;
  double kkt_residual = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool regularized = false;  // 1e-9*I was added to Q
};

// Max of stationarity, primal violation, dual negativity and complementarity,
// each in the infinity norm. Optimal reports keep this <= 1e-6.
double check_kkt(const QpProblem& p, const QpSolution& s);

// Dual active-set method (Goldfarb-Idnani): starts from the unconstrained
// minimizer and adds violated constraints one at a time, dropping blocking
// ones. Needs no feasible starting point and certifies infeasibility when the
// dual step is unbounded. Blocking ties resolve to the lowest index so the
// solve is a pure function of the problem bits.
class QpSolver {
 public:
  QpSolution solve(const QpProblem& problem, int max_iter = 0);
};

QpSolution solve(const QpProblem& problem, int max_iter = 0);

}  // namespace bipnav::qp
