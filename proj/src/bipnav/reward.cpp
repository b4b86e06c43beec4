#include "bipnav/reward.hpp"

#include <algorithm>
#include <cmath>

#include "bipnav/util.hpp"

namespace bipnav::reward {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Shared action normalizers: distance by its full range, bearing by its
// half-range.
double norm_d(double d) { return d / lmpc::kSubgoalMaxDistance; }
double norm_phi(double phi) { return std::abs(phi) / lmpc::kSubgoalMaxBearing; }

}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kRunning: return "running";
    case Outcome::kGoal: return "goal";
    case Outcome::kCollision: return "collision";
    case Outcome::kFall: return "fall";
    case Outcome::kTimeout: return "timeout";
  }
  return "?";
}

double r_goal(const StepContext& ctx, const RewardParams& p) {
  const double delta = ctx.d_goal_prev - ctx.d_goal_now;
  if (delta < 0) return 0.0;
  return clamp01(p.b_g + p.a_g * delta);
}

double r_heading(const StepContext& ctx, const RewardParams& p) {
  const double e = std::abs(ctx.delta_theta_goal);
  if (e > kPi / 6.0) return 0.0;
  return clamp01(1.0 - p.a_theta * e * e * e);
}

double r_action(const StepContext& ctx, const RewardParams& p) {
  const double progress = clamp01(norm_d(ctx.action_now.distance) - norm_phi(ctx.action_now.bearing));
  const double dd = norm_d(std::abs(ctx.action_now.distance - ctx.action_prev.distance));
  const double dphi = norm_phi(ctx.action_now.bearing - ctx.action_prev.bearing);
  const double smooth = clamp01(1.0 - 0.5 * (dd + dphi));
  return p.q_a * progress + (1.0 - p.q_a) * smooth;
}

double r_velocity(const StepContext& ctx, const RewardParams& p) {
  const double longitudinal = 1.0 / (1.0 + std::exp(-p.a_v * (ctx.v_long - p.b_v)));
  const double lateral = std::abs(ctx.v_lat) <= 0.4 ? 1.0 : 0.0;
  return p.q_v * longitudinal + (1.0 - p.q_v) * lateral;
}

double r_obstacle(const StepContext& ctx, const RewardParams& p) {
  if (!ctx.h_now.has_value()) return 1.0;  // nothing in the local window
  const double h_now = clamp01(*ctx.h_now / p.h_norm);
  const double h_prev = clamp01(ctx.h_prev.value_or(*ctx.h_now) / p.h_norm);
  return clamp01(h_now + (p.zeta - 1.0) * h_prev);
}

double terminal_reward(const StepContext& ctx, const RewardParams& p) {
  switch (ctx.outcome) {
    case Outcome::kRunning: return 0.0;
    case Outcome::kGoal:
      return 60.0 * std::exp(-0.4 * static_cast<double>(ctx.n_step) / p.n_max) + 40.0;
    case Outcome::kCollision:
    case Outcome::kFall: return -80.0;
    case Outcome::kTimeout: return -70.0;
  }
  return 0.0;
}

RewardBreakdown total_reward(const StepContext& ctx, const RewardParams& p) {
  RewardBreakdown b;
  b.goal = r_goal(ctx, p);
  b.heading = r_heading(ctx, p);
  b.action = r_action(ctx, p);
  b.velocity = r_velocity(ctx, p);
  b.obstacle = r_obstacle(ctx, p);
  b.terminal = terminal_reward(ctx, p);
  b.total = p.w[0] * b.goal + p.w[1] * b.heading + p.w[2] * b.action + p.w[3] * b.velocity +
            p.w[4] * b.obstacle + b.terminal;
  return b;
}

}  // namespace bipnav::reward
