#include "bipnav/lmpc.hpp"

#include <chrono>
#include <cmath>

#include "bipnav/util.hpp"

namespace bipnav::lmpc {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

Subgoal::Subgoal(double d, double phi)
    : distance(std::clamp(d, 0.0, kSubgoalMaxDistance)),
      bearing(std::clamp(phi, -kSubgoalMaxBearing, kSubgoalMaxBearing)) {}

namespace {

// value = c + g . z over the 2N foot-placement variables
struct Affine {
  double c = 0;
  RowVectorXd g;
  explicit Affine(int n) : g(RowVectorXd::Zero(n)) {}
};

Affine combine(double wx, const Affine& ax, double wy, const Affine& ay) {
  Affine out(static_cast<int>(ax.g.size()));
  out.c = wx * ax.c + wy * ay.c;
  out.g = wx * ax.g + wy * ay.g;
  return out;
}

struct Rollout {
  // index k = 0..N; P is the CoM relative to the current stance foot in
  // world-aligned axes, so P_0 = q and the target is measured from P_0.
  std::vector<std::array<Affine, 2>> rho, vel, pos;
};

Rollout roll_dynamics(const lip::LipState& x, const MpcConfig& cfg) {
  const int N = cfg.n_steps;
  const int n = 2 * N;
  const double w0 = cfg.lip.omega0();
  const double T = cfg.lip.step_time;
  const double ch = std::cosh(w0 * T), sh = std::sinh(w0 * T);

  Rollout r;
  r.rho.assign(N + 1, {Affine(n), Affine(n)});
  r.vel.assign(N + 1, {Affine(n), Affine(n)});
  r.pos.assign(N + 1, {Affine(n), Affine(n)});
  for (int a = 0; a < 2; ++a) {
    r.rho[0][a].c = x.q(a);
    r.vel[0][a].c = x.v(a);
    r.pos[0][a].c = x.q(a);
  }
  for (int k = 0; k < N; ++k) {
    for (int a = 0; a < 2; ++a) {
      const Affine& rho = r.rho[k][a];
      const Affine& vel = r.vel[k][a];
      const Affine& pos = r.pos[k][a];
      Affine nrho(n), nvel(n), npos(n);
      nrho.c = ch * rho.c + (sh / w0) * vel.c;
      nrho.g = ch * rho.g + (sh / w0) * vel.g;
      nrho.g(2 * k + a) -= 1.0;  // foot reset
      nvel.c = (w0 * sh) * rho.c + ch * vel.c;
      nvel.g = (w0 * sh) * rho.g + ch * vel.g;
      npos.c = pos.c + (ch - 1.0) * rho.c + (sh / w0) * vel.c;
      npos.g = pos.g + (ch - 1.0) * rho.g + (sh / w0) * vel.g;
      r.rho[k + 1][a] = nrho;
      r.vel[k + 1][a] = nvel;
      r.pos[k + 1][a] = npos;
    }
  }
  return r;
}

}  // namespace

qp::QpProblem assemble_qp(const lip::LipState& x, const Subgoal& sg,
                          const std::vector<geo::HalfPlane>& half_planes,
                          const MpcConfig& cfg) {
  const int N = cfg.n_steps;
  const int n = 2 * N;
  const double T = cfg.lip.step_time;
  const double omega = sg.bearing / (N * T);

  const Rollout r = roll_dynamics(x, cfg);

  // Cartesian target from the current CoM, in stance-relative world axes.
  const double aim = x.theta + sg.bearing;
  const Eigen::Vector2d target =
      x.q + sg.distance * Eigen::Vector2d(std::cos(aim), std::sin(aim));

  qp::QpProblem p;
  p.Q = 2.0 * cfg.cost_reg * MatrixXd::Identity(n, n);
  p.c = VectorXd::Zero(n);
  for (int k = 1; k <= N; ++k) {
    for (int a = 0; a < 2; ++a) {
      const Affine& pos = r.pos[k][a];
      p.Q += 2.0 * pos.g.transpose() * pos.g;
      p.c += 2.0 * (pos.c - target(a)) * pos.g.transpose();
    }
  }

  std::vector<RowVectorXd> rows;
  std::vector<double> rhs;
  auto add_row = [&](const RowVectorXd& g, double b) {
    rows.push_back(g);
    rhs.push_back(b);
  };

  auto heading_at = [&](int k) { return x.theta + k * omega * T; };

  // (a) velocity caps at step boundaries, in the heading frame of that step
  for (int k = 1; k <= N; ++k) {
    const double th = heading_at(k);
    const Eigen::Vector2d e(std::cos(th), std::sin(th));
    const Eigen::Vector2d l(-std::sin(th), std::cos(th));
    const Affine vlong = combine(e.x(), r.vel[k][0], e.y(), r.vel[k][1]);
    const Affine vlat = combine(l.x(), r.vel[k][0], l.y(), r.vel[k][1]);
    add_row(vlong.g, cfg.v_x_max - vlong.c);
    add_row(-vlong.g, cfg.v_x_max + vlong.c);
    add_row(vlat.g, cfg.v_y_max - vlat.c);
    add_row(-vlat.g, cfg.v_y_max + vlat.c);
  }

  // (b) reachability of foot k in the frame of its landing heading; the
  // lateral window flips sign with the stance foot so feet never cross
  for (int k = 0; k < N; ++k) {
    const double th = heading_at(k + 1);
    const Eigen::Vector2d e(std::cos(th), std::sin(th));
    const Eigen::Vector2d l(-std::sin(th), std::cos(th));
    const int stance_k = (k % 2 == 0) ? x.stance_index : -x.stance_index;
    const double sign = -static_cast<double>(stance_k);
    RowVectorXd glong = RowVectorXd::Zero(n), glat = RowVectorXd::Zero(n);
    glong(2 * k) = e.x();
    glong(2 * k + 1) = e.y();
    glat(2 * k) = l.x();
    glat(2 * k + 1) = l.y();
    add_row(glong, cfg.f_max);
    add_row(-glong, -cfg.f_min);
    add_row(sign * glat, cfg.w_max);
    add_row(-sign * glat, -cfg.w_min);
  }

  // (c) maneuverability: forward speed shrinks with commanded turn rate
  for (int k = 1; k <= N; ++k) {
    const double th = heading_at(k);
    const Eigen::Vector2d e(std::cos(th), std::sin(th));
    const Affine vlong = combine(e.x(), r.vel[k][0], e.y(), r.vel[k][1]);
    add_row(vlong.g, cfg.v_x_max - cfg.k_omega * std::abs(omega) - vlong.c);
  }

  // (d) discrete barrier per tracked half-plane: h(P_{k+1}) >= zeta h(P_k)
  const int used = std::min<int>(static_cast<int>(half_planes.size()), cfg.max_half_planes);
  for (int j = 0; j < used; ++j) {
    const geo::HalfPlane& hp = half_planes[j];
    const Eigen::Vector2d base = x.stance_foot_world - hp.point;
    auto h_at = [&](int k) {
      Affine h = combine(hp.normal.x(), r.pos[k][0], hp.normal.y(), r.pos[k][1]);
      h.c += hp.normal.dot(base) - cfg.robot_radius;
      return h;
    };
    for (int k = 1; k <= N; ++k) {
      const Affine hk = h_at(k), hprev = h_at(k - 1);
      add_row(cfg.cbf_zeta * hprev.g - hk.g, hk.c - cfg.cbf_zeta * hprev.c);
    }
  }

  const int m = static_cast<int>(rows.size());
  p.A_in.resize(m, n);
  p.b_in.resize(m);
  for (int i = 0; i < m; ++i) {
    p.A_in.row(i) = rows[i];
    p.b_in(i) = rhs[i];
  }
  p.A_eq.resize(0, n);
  p.b_eq.resize(0);
  return p;
}

PlanResult LipMpc::plan(const lip::LipState& x, const Subgoal& sg,
                        const std::vector<geo::HalfPlane>& half_planes) {
  const auto t0 = std::chrono::steady_clock::now();
  PlanResult out;
  const int N = cfg_.n_steps;
  const double omega = sg.bearing / (N * cfg_.lip.step_time);

  const qp::QpProblem problem = assemble_qp(x, sg, half_planes, cfg_);
  const qp::QpSolution sol = solver_.solve(problem);

  out.diag.status = sol.status;
  out.diag.objective = sol.objective;
  out.diag.qp_iterations = sol.iterations;
  out.diag.half_planes_used =
      std::min<int>(static_cast<int>(half_planes.size()), cfg_.max_half_planes);
  out.diag.half_planes_dropped =
      static_cast<int>(half_planes.size()) - out.diag.half_planes_used;

  if (sol.status == qp::QpStatus::kOptimal) {
    out.ok = true;
    out.control = {Eigen::Vector2d(sol.z(0), sol.z(1)), omega};
    lip::LipState cur = x;
    for (int k = 0; k < N; ++k) {
      const lip::GaitControl uk{Eigen::Vector2d(sol.z(2 * k), sol.z(2 * k + 1)), omega};
      cur = lip::step_map(cur, uk, cfg_.lip).state;
      out.predicted.push_back(cur);
    }
  }
  out.diag.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace bipnav::lmpc
