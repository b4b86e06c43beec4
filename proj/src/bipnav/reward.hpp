#pragma once

#include <array>
#include <optional>

#include "bipnav/lmpc.hpp"

namespace bipnav::reward {

using lmpc::Subgoal;

struct RewardParams {
  std::array<double, 5> w{0.2, 0.1, 0.25, 0.2, 0.25};  // [goal, heading, action, velocity, obstacle]
  double a_g = 2.33, b_g = 0.3;
  double a_theta = 1.39;
  double q_a = 0.5;
  double q_v = 0.7, a_v = 15.0, b_v = 0.5;
  double zeta = 0.4;
  int n_max = 100;  // steps; episode time cap T_max = n_max * T
  // Half-plane clearance saturates at half the sensing depth.
  double h_norm = 3.0;
};

enum class Outcome { kRunning, kGoal, kCollision, kFall, kTimeout };

const char* to_string(Outcome o);

// One step's worth of reward inputs. "now" quantities are evaluated after the
// step executed, "prev" before it; the very first step passes prev = now for
// the action and half-plane channels.
struct StepContext {
  double d_goal_now = 0, d_goal_prev = 0;  // Euclidean distance to goal, m
  double delta_theta_goal = 0;             // heading error to goal, rad
  Subgoal action_now, action_prev;
  double v_long = 0, v_lat = 0;            // heading-frame CoM velocity, m/s
  std::optional<double> h_now, h_prev;     // half-plane clearance; empty = no obstacle in window
  Outcome outcome = Outcome::kRunning;
  int n_step = 0;                          // steps taken so far this episode
};

struct RewardBreakdown {
  double goal = 0, heading = 0, action = 0, velocity = 0, obstacle = 0;
  double terminal = 0;
  double total = 0;
};

double r_goal(const StepContext& ctx, const RewardParams& p);
double r_heading(const StepContext& ctx, const RewardParams& p);
double r_action(const StepContext& ctx, const RewardParams& p);
double r_velocity(const StepContext& ctx, const RewardParams& p);
double r_obstacle(const StepContext& ctx, const RewardParams& p);
double terminal_reward(const StepContext& ctx, const RewardParams& p);

RewardBreakdown total_reward(const StepContext& ctx, const RewardParams& p);

}  // namespace bipnav::reward
