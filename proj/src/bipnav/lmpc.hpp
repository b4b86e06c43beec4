#pragma once

#include <vector>

#include "bipnav/geometry.hpp"
#include "bipnav/lip.hpp"
#include "bipnav/qp.hpp"
#include "bipnav/util.hpp"

namespace bipnav::lmpc {

inline constexpr double kSubgoalMaxDistance = 3.0;       // m
inline constexpr double kSubgoalMaxBearing = bipnav::kPi / 4.0;  // rad

// High-level action: a target in robot-centric polar coordinates. Bounds are
// enforced at construction.
struct Subgoal {
  double distance = 0;  // d_c in [0, 3]
  double bearing = 0;   // phi_c in [-pi/4, pi/4]

  Subgoal() = default;
  Subgoal(double d, double phi);
};

struct MpcConfig {
  int n_steps = 3;
  lip::LipParams lip;          // step duration lives here
  double v_x_max = 0.8;        // longitudinal speed cap, m/s
  double v_y_max = 0.4;        // lateral speed cap, m/s
  double f_min = -0.1;         // sagittal reach, m
  double f_max = 0.6;
  double w_min = 0.1;          // lateral reach window (stance-signed), m
  double w_max = 0.45;
  double k_omega = 0.3;        // forward-speed shrink per rad/s of turn, m
  double cbf_zeta = 0.4;       // discrete barrier decay, in (0, 1]
  int max_half_planes = 3;
  double robot_radius = 0.3;
  double cost_reg = 1e-6;      // tie-break curvature on cost-invariant feet
};

struct PlanDiagnostics {
  qp::QpStatus status = qp::QpStatus::kMaxIterations;
  double objective = 0;
  int qp_iterations = 0;
  double wall_ms = 0;
  int half_planes_used = 0;
  int half_planes_dropped = 0;
};

struct PlanResult {
  bool ok = false;
  lip::GaitControl control;              // first step only
  std::vector<lip::LipState> predicted;  // N states after each planned step
  PlanDiagnostics diag;
};

// Condensed LCQP over the N foot placements (2N variables). The turning rate
// is fixed to phi_c/(N T) for every prediction step, which makes the future
// headings known and every constraint linear.
qp::QpProblem assemble_qp(const lip::LipState& x, const Subgoal& sg,
                          const std::vector<geo::HalfPlane>& half_planes,
                          const MpcConfig& cfg);

class LipMpc {
 public:
  explicit LipMpc(const MpcConfig& cfg) : cfg_(cfg) {}

  PlanResult plan(const lip::LipState& x, const Subgoal& sg,
                  const std::vector<geo::HalfPlane>& half_planes);

  const MpcConfig& config() const { return cfg_; }

 private:
  MpcConfig cfg_;
  qp::QpSolver solver_;
};

}  // namespace bipnav::lmpc
