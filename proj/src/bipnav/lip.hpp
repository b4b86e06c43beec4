#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace bipnav::lip {

using Vec2 = Eigen::Vector2d;

struct LipParams {
  double height = 1.0;    // CoM height H
  double step_time = 0.4; // step duration T
  double gravity = 9.81;

  double omega0() const { return std::sqrt(gravity / height); }
};

// Reduced-order robot state at the start of a walking step. q and v are the
// CoM position and velocity relative to the current stance foot, expressed in
// world-aligned axes; heading-relative views are obtained by rotating with
// theta. Keeping the axes fixed is what makes the step-to-step map exactly
// affine (see step_matrices).
struct LipState {
  Vec2 q{0, 0};
  Vec2 v{0, 0};
  double theta = 0;              // heading, wrapped to (-pi, pi]
  Vec2 stance_foot_world{0, 0};
  int stance_index = 1;          // -1 / +1, flips every step

  Vec2 com_world() const { return stance_foot_world + q; }
  // Velocity components along/orthogonal to the heading (longitudinal, lateral).
  Vec2 v_heading_frame() const;
};

// One step of control: the next stance-foot position relative to the current
// stance foot (world-aligned axes) and the turning rate held over the step.
struct GaitControl {
  Vec2 foot{0, 0};
  double omega = 0;
};

struct StepResult {
  LipState state;
  bool blown_up = false;  // |q| left the pendulum validity envelope
};

inline constexpr double kEnvelopeRadius = 1.0;  // m, fall proxy threshold

// Closed-form within-step pendulum flow for time t (no foot reset):
//   q(t) = q cosh(w0 t) + (v/w0) sinh(w0 t),  v(t) = q w0 sinh + v cosh
// applied per axis.
LipState within_step_flow(const LipState& x, double t, const LipParams& p);

// Full step-to-step map: within-step flow over T, foot reset q' = q(T) - f,
// stance foot advance, theta' = wrap(theta + omega T), stance flip.
StepResult step_map(const LipState& x, const GaitControl& u, const LipParams& p);

// Matrices (A, B) realizing step_map as an affine map on the ordered state
// [q_x, v_x, q_y, v_y, theta] with input [f_x, f_y, omega] (theta unwrapped).
void step_matrices(const LipParams& p, Eigen::Matrix<double, 5, 5>& A,
                   Eigen::Matrix<double, 5, 3>& B);

// Per-axis invariant v^2/2 - w0^2 q^2/2, conserved by the within-step flow.
Vec2 orbital_energy(const LipState& x, const LipParams& p);

// State on the period-two lateral gait cycle with step width 2*half_offset:
// the CoM starts half_offset to the side of the stance foot, swaying inward.
// The exact pendulum equilibrium is not a usable start: any placement wider
// than ~0.08 m would already break a 0.4 m/s lateral cap one step later.
LipState lateral_cycle_state(const Vec2& com_world, double heading, int stance_index,
                             double half_offset, const LipParams& p);

}  // namespace bipnav::lip
