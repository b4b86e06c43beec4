// Test-only reference implementations, deliberately independent of the
// library code paths they check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "bipnav/qp.hpp"
#include "bipnav/rng.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// QP reference #1: accelerated projected-gradient ascent on the dual.
// First-order and factorization-free apart from one Cholesky of Q, so it
// shares nothing with the active-set path under test.
inline std::optional<double> qp_dual_gradient_objective(const bipnav::qp::QpProblem& p,
                                                        long max_iter = 1000000,
                                                        double kkt_stop = 1e-10) {
  const int n = p.n(), m = p.m(), pe = p.p();
  Eigen::LLT<MatrixXd> llt(p.Q + 1e-12 * MatrixXd::Identity(n, n));
  MatrixXd M(m + pe, n);
  VectorXd rhs(m + pe);
  if (m > 0) {
    M.topRows(m) = p.A_in;
    rhs.head(m) = p.b_in;
  }
  if (pe > 0) {
    M.bottomRows(pe) = p.A_eq;
    rhs.tail(pe) = p.b_eq;
  }
  if (m + pe == 0) {
    const VectorXd z = llt.solve(-p.c);
    return 0.5 * z.dot(p.Q * z) + p.c.dot(z);
  }
  const MatrixXd H = M * llt.solve(M.transpose());
  const double L = H.selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff();
  const double step = 1.0 / std::max(L, 1e-12);

  VectorXd lam = VectorXd::Zero(m + pe), prev = lam, y = lam;
  double t_momentum = 1.0;
  auto primal = [&](const VectorXd& mult) {
    return VectorXd(llt.solve(-(p.c + M.transpose() * mult)));
  };
  for (long it = 0; it < max_iter; ++it) {
    const VectorXd z = primal(y);
    VectorXd g = M * z - rhs;
    VectorXd next = y + step * g;
    for (int i = 0; i < m; ++i) next(i) = std::max(0.0, next(i));
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
    y = next + ((t_momentum - 1.0) / t_next) * (next - prev);
    for (int i = 0; i < m; ++i) y(i) = std::max(0.0, y(i));
    prev = next;
    t_momentum = t_next;
    if (it % 50 == 0) {
      bipnav::qp::QpSolution cand;
      cand.z = primal(next);
      cand.lambda = next;
      if (bipnav::qp::check_kkt(p, cand) < kkt_stop)
        return 0.5 * cand.z.dot(p.Q * cand.z) + p.c.dot(cand.z);
    }
  }
  bipnav::qp::QpSolution cand;
  cand.z = primal(prev);
  cand.lambda = prev;
  if (bipnav::qp::check_kkt(p, cand) < 1e-5)
    return 0.5 * cand.z.dot(p.Q * cand.z) + p.c.dot(cand.z);
  return std::nullopt;  // did not converge; caller decides
}

// ---------------------------------------------------------------------------
// QP reference #2: exhaustive active-set enumeration, exact for m <= ~12.
// Tries every subset of tight inequalities, solves the KKT system and keeps
// the best primal-dual feasible candidate.
inline std::optional<double> qp_enumeration_objective(const bipnav::qp::QpProblem& p,
                                                      VectorXd* argmin = nullptr) {
  const int n = p.n(), m = p.m(), pe = p.p();
  double best = std::numeric_limits<double>::infinity();
  VectorXd best_z;
  for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < m; ++i)
      if (mask & (1ul << i)) act.push_back(i);
    const int q = static_cast<int>(act.size()) + pe;
    MatrixXd K = MatrixXd::Zero(n + q, n + q);
    VectorXd r(n + q);
    K.topLeftCorner(n, n) = p.Q;
    r.head(n) = -p.c;
    for (int j = 0; j < static_cast<int>(act.size()); ++j) {
      K.block(0, n + j, n, 1) = p.A_in.row(act[j]).transpose();
      K.block(n + j, 0, 1, n) = p.A_in.row(act[j]);
      r(n + j) = p.b_in(act[j]);
    }
    for (int j = 0; j < pe; ++j) {
      const int col = n + static_cast<int>(act.size()) + j;
      K.block(0, col, n, 1) = p.A_eq.row(j).transpose();
      K.block(col, 0, 1, n) = p.A_eq.row(j);
      r(col) = p.b_eq(j);
    }
    Eigen::FullPivLU<MatrixXd> lu(K);
    if (!lu.isInvertible()) continue;
    const VectorXd sol = lu.solve(r);
    const VectorXd z = sol.head(n);
    bool ok = true;
    for (int j = 0; j < static_cast<int>(act.size()); ++j)
      if (sol(n + j) < -1e-8) ok = false;  // inequality multipliers must be nonnegative
    if (m > 0 && ok) ok = ((p.A_in * z - p.b_in).maxCoeff() <= 1e-8);
    if (pe > 0 && ok) ok = ((p.A_eq * z - p.b_eq).cwiseAbs().maxCoeff() <= 1e-8);
    if (!ok) continue;
    const double obj = 0.5 * z.dot(p.Q * z) + p.c.dot(z);
    if (obj < best) {
      best = obj;
      best_z = z;
    }
  }
  if (!best_z.size()) return std::nullopt;
  if (argmin) *argmin = best_z;
  return best;
}

// Random strictly convex, feasible QP.
inline bipnav::qp::QpProblem random_qp(bipnav::Rng& rng, int n_max = 30, int m_max = 60,
                                       bool with_equalities = true) {
  using bipnav::qp::QpProblem;
  const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max - 1)));
  const int m = static_cast<int>(rng.below(static_cast<std::uint64_t>(m_max + 1)));
  const int pe = with_equalities && n > 2 ? static_cast<int>(rng.below(3)) : 0;
  QpProblem p;
  MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = rng.normal();
  p.Q = M.transpose() * M + (0.1 + rng.uniform01()) * MatrixXd::Identity(n, n);
  p.c.resize(n);
  for (int i = 0; i < n; ++i) p.c(i) = 2.0 * rng.normal();
  VectorXd z_feas(n);
  for (int i = 0; i < n; ++i) z_feas(i) = rng.normal();
  p.A_in.resize(m, n);
  p.b_in.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) p.A_in(i, j) = rng.normal();
    p.b_in(i) = p.A_in.row(i).dot(z_feas) + rng.uniform(0.0, 2.0);
  }
  p.A_eq.resize(pe, n);
  p.b_eq.resize(pe);
  for (int i = 0; i < pe; ++i) {
    for (int j = 0; j < n; ++j) p.A_eq(i, j) = rng.normal();
    p.b_eq(i) = p.A_eq.row(i).dot(z_feas);
  }
  return p;
}

// ---------------------------------------------------------------------------
// RK4 integration of the pendulum ODE qdd = w0^2 q, per axis.
struct PendulumAxisState {
  double q, v;
};
inline PendulumAxisState rk4_pendulum(PendulumAxisState s, double w0, double t_total,
                                      int substeps) {
  const double h = t_total / substeps;
  auto deriv = [&](const PendulumAxisState& x) {
    return PendulumAxisState{x.v, w0 * w0 * x.q};
  };
  for (int i = 0; i < substeps; ++i) {
    const auto k1 = deriv(s);
    const auto k2 = deriv({s.q + 0.5 * h * k1.q, s.v + 0.5 * h * k1.v});
    const auto k3 = deriv({s.q + 0.5 * h * k2.q, s.v + 0.5 * h * k2.v});
    const auto k4 = deriv({s.q + h * k3.q, s.v + h * k3.v});
    s.q += h / 6.0 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q);
    s.v += h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Dense boundary sampling of obstacle shapes (independent point sets).
inline std::vector<Eigen::Vector2d> sample_circle(const Eigen::Vector2d& c, double r, int k) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(k);
  for (int i = 0; i < k; ++i) {
    const double a = 2.0 * M_PI * i / k;
    pts.emplace_back(c.x() + r * std::cos(a), c.y() + r * std::sin(a));
  }
  return pts;
}

inline std::vector<Eigen::Vector2d> sample_ellipse(const Eigen::Vector2d& c, double a, double b,
                                                   double rot, int k) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(k);
  const double cr = std::cos(rot), sr = std::sin(rot);
  for (int i = 0; i < k; ++i) {
    const double t = 2.0 * M_PI * i / k;
    const double x = a * std::cos(t), y = b * std::sin(t);
    pts.emplace_back(c.x() + cr * x - sr * y, c.y() + sr * x + cr * y);
  }
  return pts;
}

inline std::vector<Eigen::Vector2d> sample_polygon(const std::vector<Eigen::Vector2d>& v, int k) {
  std::vector<Eigen::Vector2d> pts;
  const int per_edge = std::max(1, k / static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    const Eigen::Vector2d a = v[i], b = v[(i + 1) % v.size()];
    for (int j = 0; j < per_edge; ++j)
      pts.emplace_back(a + (static_cast<double>(j) / per_edge) * (b - a));
  }
  return pts;
}

inline double min_distance_to(const std::vector<Eigen::Vector2d>& pts,
                              const Eigen::Vector2d& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : pts) best = std::min(best, (p - q).norm());
  return best;
}

}  // namespace oracle
