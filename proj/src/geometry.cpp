#include "meshgrade/geometry.hpp"

#include <algorithm>

#include "meshgrade/error.hpp"

namespace meshgrade {

PlaneBasis least_squares_plane(const Eigen::Matrix3Xd& points) {
  const Eigen::Vector3d centroid = points.rowwise().mean();
  const Eigen::Matrix3Xd centered = points.colwise() - centroid;
  const Eigen::Matrix3d covariance = centered * centered.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(covariance);
  // Eigenvalues ascend; the two largest span the plane.
  return PlaneBasis{centroid, solver.eigenvectors().col(2),
                    solver.eigenvectors().col(1)};
}

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a,
              const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> points) {
  std::sort(points.begin(), points.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
            });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                             return a.x() == b.x() && a.y() == b.y();
                           }),
               points.end());
  const std::size_t n = points.size();
  if (n < 3) return points;

  std::vector<Eigen::Vector2d> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i > 0; --i) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], points[i - 1]) <= 0.0) --k;
    hull[k++] = points[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

RectangleSides min_enclosing_rectangle(const std::vector<Eigen::Vector2d>& hull) {
  if (hull.size() < 2) {
    throw GeometryError("enclosing rectangle of a degenerate point set");
  }
  constexpr double kAreaTie = 1e-9;  // relative
  bool found = false;
  double best_area = 0.0;
  RectangleSides best{0.0, 0.0};
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d edge = hull[(i + 1) % n] - hull[i];
    const double len = edge.norm();
    if (len == 0.0) continue;
    const Eigen::Vector2d dir = edge / len;
    const Eigen::Vector2d ortho(-dir.y(), dir.x());
    double lo_s = 0.0, hi_s = 0.0, lo_t = 0.0, hi_t = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::Vector2d rel = hull[j] - hull[i];
      const double s = rel.dot(dir);
      const double t = rel.dot(ortho);
      if (j == 0) {
        lo_s = hi_s = s;
        lo_t = hi_t = t;
      } else {
        lo_s = std::min(lo_s, s);
        hi_s = std::max(hi_s, s);
        lo_t = std::min(lo_t, t);
        hi_t = std::max(hi_t, t);
      }
    }
    const double w = hi_s - lo_s;
    const double h = hi_t - lo_t;
    const double area = w * h;
    const RectangleSides sides{std::max(w, h), std::min(w, h)};
    if (!found) {
      found = true;
      best_area = area;
      best = sides;
      continue;
    }
    const double tol = kAreaTie * std::max(best_area, area);
    if (area < best_area - tol) {
      best_area = area;
      best = sides;
    } else if (std::abs(area - best_area) <= tol &&
               sides.short_side < best.short_side) {
      best = sides;
    }
  }
  if (!found) {
    throw GeometryError("enclosing rectangle of coincident points");
  }
  return best;
}

}  // namespace meshgrade
