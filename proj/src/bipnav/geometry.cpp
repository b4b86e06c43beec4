#include "bipnav/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "bipnav/util.hpp"

namespace bipnav::geo {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec2 closest_on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 <= 0) return a;
  const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return a + t * d;
}

// Closest point on an origin-centered axis-aligned ellipse (a, b) to a point
// in the first quadrant, by bisection on the standard rational root function.
// Robust for all aspect ratios; ~1 ulp after 100 halvings.
Vec2 closest_on_ellipse_q1(double e0, double e1, double y0, double y1) {
  if (y0 <= 1e-15 && y1 <= 1e-15) return e0 <= e1 ? Vec2(e0, 0.0) : Vec2(0.0, e1);
  if (y1 <= 1e-15) {
    if (e0 > e1 && y0 < (e0 * e0 - e1 * e1) / e0) {  // inside the evolute
      const double x0 = e0 * e0 * y0 / (e0 * e0 - e1 * e1);
      return {x0, e1 * std::sqrt(std::max(0.0, 1.0 - (x0 / e0) * (x0 / e0)))};
    }
    return {e0, 0.0};
  }
  if (y0 <= 1e-15) {
    if (e1 > e0 && y1 < (e1 * e1 - e0 * e0) / e1) {
      const double x1 = e1 * e1 * y1 / (e1 * e1 - e0 * e0);
      return {e0 * std::sqrt(std::max(0.0, 1.0 - (x1 / e1) * (x1 / e1))), x1};
    }
    return {0.0, e1};
  }
  // F(t) = (e0 y0/(t+e0^2))^2 + (e1 y1/(t+e1^2))^2 - 1 is strictly decreasing
  // on (-emin^2, inf) with a unique root; the closest point follows from it.
  auto F = [&](double t) {
    const double r0 = e0 * y0 / (t + e0 * e0);
    const double r1 = e1 * y1 / (t + e1 * e1);
    return r0 * r0 + r1 * r1 - 1.0;
  };
  const double emin = std::min(e0, e1);
  double t_lo = -emin * emin + emin * (e0 <= e1 ? y0 : y1);
  double t_hi = -emin * emin + std::hypot(e0 * y0, e1 * y1);
  if (F(t_lo) < 0) t_lo = -emin * emin + 1e-18;
  for (int i = 0; i < 200 && t_hi - t_lo > 1e-16 * (1.0 + std::abs(t_hi)); ++i) {
    const double mid = 0.5 * (t_lo + t_hi);
    (F(mid) > 0 ? t_lo : t_hi) = mid;
  }
  const double t = 0.5 * (t_lo + t_hi);
  return {e0 * e0 * y0 / (t + e0 * e0), e1 * e1 * y1 / (t + e1 * e1)};
}

struct EllipseHit {
  Vec2 point;   // on boundary, world frame
  Vec2 normal;  // outward unit
  double signed_distance;
};

EllipseHit ellipse_closest(const Ellipse& e, const Vec2& p) {
  const Vec2 u = rotate(p - e.center, -e.rotation);
  const double a = e.semi_axes.x(), b = e.semi_axes.y();
  const double sx = u.x() < 0 ? -1.0 : 1.0;
  const double sy = u.y() < 0 ? -1.0 : 1.0;
  Vec2 q;
  if (std::abs(u.x()) <= 1e-15 && std::abs(u.y()) <= 1e-15) {
    q = a <= b ? Vec2(a, 0.0) : Vec2(0.0, b);  // center: nearest semi-axis end
  } else {
    q = closest_on_ellipse_q1(a, b, std::abs(u.x()), std::abs(u.y()));
    q = {sx * q.x(), sy * q.y()};
  }
  const double lvl = (u.x() / a) * (u.x() / a) + (u.y() / b) * (u.y() / b);
  const double d = (u - q).norm();
  Vec2 n_local(q.x() / (a * a), q.y() / (b * b));
  if (n_local.norm() <= 0) n_local = Vec2(1, 0);
  n_local.normalize();
  EllipseHit hit;
  hit.point = e.center + rotate(q, e.rotation);
  hit.normal = rotate(n_local, e.rotation);
  hit.signed_distance = lvl < 1.0 ? -d : d;
  return hit;
}

double polygon_area(const std::vector<Vec2>& v) {
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i) s += cross2(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

bool point_in_convex_ccw(const std::vector<Vec2>& v, const Vec2& p) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (cross2(v[(i + 1) % v.size()] - v[i], p - v[i]) < 0) return false;
  }
  return true;
}

// Separating-axis test for two convex CCW polygons.
bool convex_intersect(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  auto separated_by_edges_of = [](const std::vector<Vec2>& u, const std::vector<Vec2>& w) {
    for (size_t i = 0; i < u.size(); ++i) {
      const Vec2 edge = u[(i + 1) % u.size()] - u[i];
      const Vec2 axis(-edge.y(), edge.x());
      double umin = 1e300, umax = -1e300, wmin = 1e300, wmax = -1e300;
      for (const auto& q : u) {
        const double d = axis.dot(q);
        umin = std::min(umin, d);
        umax = std::max(umax, d);
      }
      for (const auto& q : w) {
        const double d = axis.dot(q);
        wmin = std::min(wmin, d);
        wmax = std::max(wmax, d);
      }
      if (umax < wmin || wmax < umin) return true;
    }
    return false;
  };
  return !separated_by_edges_of(a, b) && !separated_by_edges_of(b, a);
}

double distance_to_convex_ccw(const std::vector<Vec2>& v, const Vec2& p) {
  if (point_in_convex_ccw(v, p)) return 0.0;
  double best = 1e300;
  for (size_t i = 0; i < v.size(); ++i)
    best = std::min(best, (p - closest_on_segment(v[i], v[(i + 1) % v.size()], p)).norm());
  return best;
}

std::vector<Vec2> window_corners_world(const Pose& pose) {
  const Vec2 lo(-kGridBackward, -kGridLateral), hi(kGridForward, kGridLateral);
  std::vector<Vec2> local = {
      {lo.x(), lo.y()}, {hi.x(), lo.y()}, {hi.x(), hi.y()}, {lo.x(), hi.y()}};
  for (auto& c : local) c = pose.position + rotate(c, pose.heading);
  return local;
}

}  // namespace

bool Obstacle::contains(const Vec2& p) const {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return (p - s.center).norm() <= s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          const Vec2 u = rotate(p - s.center, -s.rotation);
          const double a = s.semi_axes.x(), b = s.semi_axes.y();
          return (u.x() / a) * (u.x() / a) + (u.y() / b) * (u.y() / b) <= 1.0;
        } else {
          return point_in_convex_ccw(s.vertices, p);
        }
      },
      shape);
}

double Obstacle::boundary_distance(const Vec2& p) const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return (p - s.center).norm() - s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return ellipse_closest(s, p).signed_distance;
        } else {
          double best = 1e300;
          for (size_t i = 0; i < s.vertices.size(); ++i) {
            const Vec2 q = closest_on_segment(s.vertices[i],
                                              s.vertices[(i + 1) % s.vertices.size()], p);
            best = std::min(best, (p - q).norm());
          }
          return point_in_convex_ccw(s.vertices, p) ? -best : best;
        }
      },
      shape);
}

void Obstacle::closest_boundary_point(const Vec2& p, Vec2& point, Vec2& normal) const {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          Vec2 d = p - s.center;
          const double len = d.norm();
          Vec2 n = len > 1e-15 ? Vec2(d / len) : Vec2(1, 0);
          point = s.center + s.radius * n;
          normal = n;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          const EllipseHit h = ellipse_closest(s, p);
          point = h.point;
          normal = h.normal;
        } else {
          double best = 1e300;
          size_t best_edge = 0;
          Vec2 best_q(0, 0);
          for (size_t i = 0; i < s.vertices.size(); ++i) {
            const Vec2 q = closest_on_segment(s.vertices[i],
                                              s.vertices[(i + 1) % s.vertices.size()], p);
            const double d = (p - q).norm();
            if (d < best) {
              best = d;
              best_edge = i;
              best_q = q;
            }
          }
          point = best_q;
          const bool inside = point_in_convex_ccw(s.vertices, p);
          if (!inside && best > 1e-12) {
            normal = (p - best_q) / best;
          } else {
            const Vec2 e = s.vertices[(best_edge + 1) % s.vertices.size()] - s.vertices[best_edge];
            normal = Vec2(e.y(), -e.x()).normalized();
          }
        }
      },
      shape);
}

Vec2 Obstacle::bounding_center() const {
  return std::visit(
      [&](const auto& s) -> Vec2 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return s.center;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return s.center;
        } else {
          Vec2 c(0, 0);
          for (const auto& v : s.vertices) c += v;
          return c / static_cast<double>(s.vertices.size());
        }
      },
      shape);
}

double Obstacle::bounding_radius() const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return std::max(s.semi_axes.x(), s.semi_axes.y());
        } else {
          Vec2 c(0, 0);
          for (const auto& v : s.vertices) c += v;
          c /= static_cast<double>(s.vertices.size());
          double r = 0;
          for (const auto& v : s.vertices) r = std::max(r, (v - c).norm());
          return r;
        }
      },
      shape);
}

int OccupancyGrid::occupied_count() const {
  int n = 0;
  for (auto c : cells) n += c;
  return n;
}

Vec2 OccupancyGrid::cell_center(int i, int j) {
  return {-kGridBackward + (i + 0.5) * kGridResolution,
          -kGridLateral + (j + 0.5) * kGridResolution};
}

Environment generate_environment(std::uint64_t seed, int n_obstacles, const GoalPolicy& goal,
                                 const WorldParams& params) {
  if (n_obstacles < 0 || n_obstacles > 8) throw EnvGenError("n_obstacles must be 0..8");
  Rng rng(derive_seed(seed, 0x9e5fu));
  Environment env;
  env.id = static_cast<int>(seed & 0x7fffffff);
  env.bounds = params.bounds;
  env.start = Vec2(0, 0);

  if (goal.fixed) {
    env.goal = goal.goal;
  } else {
    const Vec2 lo = params.bounds.lo, hi = params.bounds.hi;
    int tries = 0;
    do {
      if (++tries > params.max_rejections) throw EnvGenError("goal sampling failed");
      env.goal = Vec2(rng.uniform(lo.x() + 0.5, hi.x() - 0.5),
                      rng.uniform(lo.y() + 0.5, hi.y() - 0.5));
    } while ((env.goal - env.start).norm() < params.min_start_goal_dist);
  }

  for (int k = 0; k < n_obstacles; ++k) {
    int attempts = 0;
    while (true) {
      if (++attempts > params.max_rejections)
        throw EnvGenError("environment oversubscribed: obstacle rejection limit");
      Obstacle ob;
      const Vec2 center(rng.uniform(params.bounds.lo.x(), params.bounds.hi.x()),
                        rng.uniform(params.bounds.lo.y(), params.bounds.hi.y()));
      const int kind = static_cast<int>(rng.below(3));
      if (kind == 0) {
        ob.shape = Circle{center, rng.uniform(params.circle_r_min, params.circle_r_max)};
      } else if (kind == 1) {
        ob.shape = Ellipse{center,
                           Vec2(rng.uniform(params.ellipse_ax_min, params.ellipse_ax_max),
                                rng.uniform(params.ellipse_ax_min, params.ellipse_ax_max)),
                           rng.uniform(0.0, kPi)};
      } else {
        const int nv = rng.uniform_int(3, 6);
        const double cr = rng.uniform(params.polygon_cr_min, params.polygon_cr_max);
        std::vector<double> angles(nv);
        for (auto& a : angles) a = rng.uniform(0.0, 2.0 * kPi);
        std::sort(angles.begin(), angles.end());
        bool gaps_ok = true;
        for (int i = 0; i < nv; ++i) {
          const double next = (i + 1 < nv) ? angles[i + 1] : angles[0] + 2.0 * kPi;
          if (next - angles[i] < 0.15) gaps_ok = false;
        }
        if (!gaps_ok) continue;
        ConvexPolygon poly;
        poly.vertices.reserve(nv);
        for (double a : angles)
          poly.vertices.push_back(center + cr * Vec2(std::cos(a), std::sin(a)));
        if (polygon_area(poly.vertices) < 1e-3) continue;
        ob.shape = std::move(poly);
      }
      if (ob.boundary_distance(env.start) < params.gen_clearance) continue;
      if (ob.boundary_distance(env.goal) < params.gen_clearance) continue;
      env.obstacles.push_back(std::move(ob));
      break;
    }
  }
  return env;
}

std::optional<double> min_obstacle_distance(const Environment& env, const Vec2& p) {
  if (env.obstacles.empty()) return std::nullopt;
  double best = 1e300;
  for (const auto& ob : env.obstacles) best = std::min(best, ob.boundary_distance(p));
  return best;
}

bool obstacle_in_window(const Obstacle& ob, const Pose& pose) {
  const auto corners = window_corners_world(pose);
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return distance_to_convex_ccw(corners, s.center) <= s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          // Affine map sending the ellipse to the unit circle turns the
          // window into a convex quad; intersection reduces to a distance.
          std::vector<Vec2> quad = corners;
          for (auto& q : quad) {
            Vec2 u = rotate(q - s.center, -s.rotation);
            q = Vec2(u.x() / s.semi_axes.x(), u.y() / s.semi_axes.y());
          }
          if (polygon_area(quad) < 0) std::reverse(quad.begin(), quad.end());
          return distance_to_convex_ccw(quad, Vec2(0, 0)) <= 1.0;
        } else {
          return convex_intersect(corners, s.vertices);
        }
      },
      ob.shape);
}

std::optional<double> min_obstacle_distance_in_window(const Environment& env, const Pose& pose,
                                                      const Vec2& p) {
  double best = 1e300;
  bool any = false;
  for (const auto& ob : env.obstacles) {
    if (!obstacle_in_window(ob, pose)) continue;
    best = std::min(best, ob.boundary_distance(p));
    any = true;
  }
  if (!any) return std::nullopt;
  return best;
}

std::optional<HalfPlane> nearest_half_plane(const Environment& env, const Vec2& p) {
  auto planes = nearest_half_planes(env, p, 1);
  if (planes.empty()) return std::nullopt;
  return planes.front();
}

std::optional<double> half_plane_value(const Environment& env, const Vec2& p,
                                       double robot_radius) {
  auto hp = nearest_half_plane(env, p);
  if (!hp) return std::nullopt;
  return hp->value(p, robot_radius);
}

std::vector<HalfPlane> nearest_half_planes(const Environment& env, const Vec2& p, int k) {
  std::vector<std::pair<double, size_t>> order;
  order.reserve(env.obstacles.size());
  for (size_t i = 0; i < env.obstacles.size(); ++i)
    order.emplace_back(env.obstacles[i].boundary_distance(p), i);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  });
  std::vector<HalfPlane> out;
  for (const auto& [d, i] : order) {
    if (static_cast<int>(out.size()) >= k) break;
    HalfPlane hp;
    env.obstacles[i].closest_boundary_point(p, hp.point, hp.normal);
    out.push_back(hp);
  }
  return out;
}

bool collides(const Environment& env, const Vec2& p, double robot_radius) {
  const auto d = min_obstacle_distance(env, p);
  return d.has_value() && *d < robot_radius;
}

OccupancyGrid render_local_grid(const Environment& env, const Pose& pose) {
  OccupancyGrid grid;
  // Cull obstacles that cannot reach the window's bounding circle.
  const Vec2 window_center = pose.position + rotate(Vec2(1.5, 0.0), pose.heading);
  const double window_radius = std::hypot(3.0, 3.0);
  std::vector<const Obstacle*> near;
  for (const auto& ob : env.obstacles) {
    if ((ob.bounding_center() - window_center).norm() <=
        window_radius + ob.bounding_radius() + 1e-9)
      near.push_back(&ob);
  }
  if (near.empty()) return grid;
  const double c = std::cos(pose.heading), s = std::sin(pose.heading);
  for (int i = 0; i < kGridSize; ++i) {
    for (int j = 0; j < kGridSize; ++j) {
      const Vec2 cc = OccupancyGrid::cell_center(i, j);
      const Vec2 w(pose.position.x() + c * cc.x() - s * cc.y(),
                   pose.position.y() + s * cc.x() + c * cc.y());
      for (const Obstacle* ob : near) {
        if (ob->contains(w)) {
          grid.cells[i * kGridSize + j] = 1;
          break;
        }
      }
    }
  }
  return grid;
}

}  // namespace bipnav::geo
