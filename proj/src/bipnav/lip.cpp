#include "bipnav/lip.hpp"

#include <stdexcept>

#include "bipnav/util.hpp"

namespace bipnav::lip {

Vec2 LipState::v_heading_frame() const {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * v.x() + s * v.y(), -s * v.x() + c * v.y()};
}

LipState within_step_flow(const LipState& x, double t, const LipParams& p) {
  const double w0 = p.omega0();
  const double ch = std::cosh(w0 * t), sh = std::sinh(w0 * t);
  LipState out = x;
  out.q = x.q * ch + x.v * (sh / w0);
  out.v = x.q * (w0 * sh) + x.v * ch;
  return out;
}

StepResult step_map(const LipState& x, const GaitControl& u, const LipParams& p) {
  if (!x.q.allFinite() || !x.v.allFinite() || !std::isfinite(x.theta) ||
      !u.foot.allFinite() || !std::isfinite(u.omega))
    throw std::invalid_argument("step_map: non-finite input");
  StepResult r;
  const LipState mid = within_step_flow(x, p.step_time, p);
  r.state.q = mid.q - u.foot;
  r.state.v = mid.v;
  r.state.theta = wrap_angle(x.theta + u.omega * p.step_time);
  r.state.stance_foot_world = x.stance_foot_world + u.foot;
  r.state.stance_index = -x.stance_index;
  r.blown_up = r.state.q.norm() > kEnvelopeRadius;
  return r;
}

void step_matrices(const LipParams& p, Eigen::Matrix<double, 5, 5>& A,
                   Eigen::Matrix<double, 5, 3>& B) {
  const double w0 = p.omega0();
  const double T = p.step_time;
  const double ch = std::cosh(w0 * T), sh = std::sinh(w0 * T);
  A.setZero();
  B.setZero();
  // per-axis pendulum blocks
  A(0, 0) = ch;
  A(0, 1) = sh / w0;
  A(1, 0) = w0 * sh;
  A(1, 1) = ch;
  A(2, 2) = ch;
  A(2, 3) = sh / w0;
  A(3, 2) = w0 * sh;
  A(3, 3) = ch;
  A(4, 4) = 1.0;
  // foot reset enters the position rows, omega integrates into heading
  B(0, 0) = -1.0;
  B(2, 1) = -1.0;
  B(4, 2) = T;
}

Vec2 orbital_energy(const LipState& x, const LipParams& p) {
  const double w2 = p.gravity / p.height;
  return {0.5 * x.v.x() * x.v.x() - 0.5 * w2 * x.q.x() * x.q.x(),
          0.5 * x.v.y() * x.v.y() - 0.5 * w2 * x.q.y() * x.q.y()};
}

LipState lateral_cycle_state(const Vec2& com_world, double heading, int stance_index,
                             double half_offset, const LipParams& p) {
  // Period-two orbit: rho(T) = -rho(0) after the foot reset f_y = 2*rho(0),
  // which pins the boundary velocity to -rho(0) * w0 sinh / (1 + cosh).
  const double w0 = p.omega0();
  const double ch = std::cosh(w0 * p.step_time), sh = std::sinh(w0 * p.step_time);
  const double a = half_offset;
  const double q_lat = -stance_index * a;
  const double v_lat = stance_index * a * w0 * sh / (1.0 + ch);
  LipState x;
  const double c = std::cos(heading), s = std::sin(heading);
  x.q = Vec2(-s * q_lat, c * q_lat);
  x.v = Vec2(-s * v_lat, c * v_lat);
  x.theta = wrap_angle(heading);
  x.stance_foot_world = com_world - x.q;
  x.stance_index = stance_index;
  return x;
}

}  // namespace bipnav::lip
