#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "bipnav/rng.hpp"

namespace bipnav::geo {

using Vec2 = Eigen::Vector2d;

struct Circle {
  Vec2 center{0, 0};
  double radius = 0;
};

struct Ellipse {
  Vec2 center{0, 0};
  Vec2 semi_axes{0, 0};  // (a, b)
  double rotation = 0;   // rad, major-axis direction
};

struct ConvexPolygon {
  std::vector<Vec2> vertices;  // counterclockwise
};

struct Obstacle {
  std::variant<Circle, Ellipse, ConvexPolygon> shape;

  bool contains(const Vec2& p) const;
  // Exact Euclidean distance to the boundary, negative inside.
  double boundary_distance(const Vec2& p) const;
  // Closest boundary point to p and the outward unit normal there.
  void closest_boundary_point(const Vec2& p, Vec2& point, Vec2& normal) const;
  // Center and radius of a bounding circle, for cheap culling.
  Vec2 bounding_center() const;
  double bounding_radius() const;
};

struct Box {
  Vec2 lo{0, 0};
  Vec2 hi{0, 0};
  bool contains(const Vec2& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

struct Environment {
  int id = 0;
  Box bounds{{0, 0}, {10, 10}};
  Vec2 start{0, 0};
  Vec2 goal{0, 0};
  std::vector<Obstacle> obstacles;
};

struct Pose {
  Vec2 position{0, 0};
  double heading = 0;
};

// Robot-centric local window: forward 4.5 m, backward 1.5 m, lateral +/-3 m,
// rasterized at 64x64 (6 m x 6 m footprint, 6/64 m per cell).
inline constexpr int kGridSize = 64;
inline constexpr double kGridForward = 4.5;
inline constexpr double kGridBackward = 1.5;
inline constexpr double kGridLateral = 3.0;
inline constexpr double kGridResolution = 6.0 / kGridSize;

struct OccupancyGrid {
  // Row-major, cells[i*64+j]: i indexes the longitudinal axis (backward to
  // forward), j the lateral axis (right to left in the robot frame).
  std::array<std::uint8_t, kGridSize * kGridSize> cells{};

  std::uint8_t at(int i, int j) const { return cells[i * kGridSize + j]; }
  int occupied_count() const;
  // Center of cell (i,j) in the robot frame.
  static Vec2 cell_center(int i, int j);
};

struct HalfPlane {
  Vec2 normal{1, 0};  // unit, points away from the obstacle
  Vec2 point{0, 0};   // boundary point the tangent was taken at
  // Signed clearance of p beyond the robot-radius-inflated tangent line.
  double value(const Vec2& p, double robot_radius) const {
    return normal.dot(p - point) - robot_radius;
  }
};

struct WorldParams {
  Box bounds{{0, 0}, {10, 10}};
  double robot_radius = 0.3;
  double gen_clearance = 1.0;      // start/goal keep-out during generation
  double min_start_goal_dist = 3.0;
  double circle_r_min = 0.3, circle_r_max = 0.8;
  double ellipse_ax_min = 0.3, ellipse_ax_max = 0.9;
  double polygon_cr_min = 0.4, polygon_cr_max = 0.9;
  int max_rejections = 1000;
  // Sentinel nearest-obstacle distance when the local window is empty.
  double d_obstacle_max = 6.0;
};

struct GoalPolicy {
  bool fixed = false;
  Vec2 goal{10, 10};
  static GoalPolicy random() { return {}; }
  static GoalPolicy at(const Vec2& g) { return {true, g}; }
};

struct EnvGenError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic function of (seed, n_obstacles, goal). Start is pinned at the
// origin; obstacles are rejection-sampled clear of the start and goal discs.
Environment generate_environment(std::uint64_t seed, int n_obstacles, const GoalPolicy& goal,
                                 const WorldParams& params = {});

// Exact distance from p to the nearest obstacle boundary, negative inside.
// Returns nullopt for an empty environment.
std::optional<double> min_obstacle_distance(const Environment& env, const Vec2& p);

// Same restricted to obstacles intersecting the local window at `pose`.
std::optional<double> min_obstacle_distance_in_window(const Environment& env, const Pose& pose,
                                                      const Vec2& p);

// Supporting half-plane of the nearest obstacle, taken at the obstacle point
// nearest to p. Nullopt when there is no obstacle (callers map this to
// maximal safety).
std::optional<HalfPlane> nearest_half_plane(const Environment& env, const Vec2& p);
std::optional<double> half_plane_value(const Environment& env, const Vec2& p,
                                       double robot_radius);

// Up to k half-planes of distinct obstacles, ordered by clearance at p.
std::vector<HalfPlane> nearest_half_planes(const Environment& env, const Vec2& p, int k);

// True iff the robot disc at p intersects any obstacle.
bool collides(const Environment& env, const Vec2& p, double robot_radius);

// Cell (i,j) is occupied iff its center, mapped through the pose, lies inside
// any obstacle.
OccupancyGrid render_local_grid(const Environment& env, const Pose& pose);

// Does the obstacle intersect the local window rectangle at `pose`?
bool obstacle_in_window(const Obstacle& ob, const Pose& pose);

inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

}  // namespace bipnav::geo
