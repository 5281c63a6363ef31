#ifndef MESHGRADE_GEOMETRY_HPP
#define MESHGRADE_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

// Small geometric kernel shared by the element quality metrics.
// Free functions over Eigen expressions; angles are returned in degrees.

namespace meshgrade {

inline constexpr double kDegreesPerRadian = 180.0 / M_PI;

inline double to_degrees(double radians) { return radians * kDegreesPerRadian; }

// Unoriented angle between two nonzero vectors, in [0, 180] degrees.
// atan2 of cross/dot is stable near 0 and 180 where acos is not.
template <class DerivedA, class DerivedB>
double angle_between_degrees(const Eigen::MatrixBase<DerivedA>& a,
                             const Eigen::MatrixBase<DerivedB>& b) {
  const Eigen::Vector3d av = a.derived();
  const Eigen::Vector3d bv = b.derived();
  return to_degrees(std::atan2(av.cross(bv).norm(), av.dot(bv)));
}

// Folds a line/line angle into [0, 90] degrees.
inline double fold_to_right_angle(double angle_degrees) {
  return std::min(angle_degrees, 180.0 - angle_degrees);
}

// Unnormalized polygon normal, summed over the cyclic edge fan (Newell).
// For planar polygons the magnitude is twice the enclosed area.
template <class Derived>
Eigen::Vector3d polygon_normal_raw(const Eigen::MatrixBase<Derived>& corners) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  const Eigen::Index n = corners.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d p = corners.col(i);
    const Eigen::Vector3d q = corners.col((i + 1) % n);
    sum += p.cross(q);
  }
  return sum;
}

template <class DerivedA, class DerivedB, class DerivedC>
double triangle_area(const Eigen::MatrixBase<DerivedA>& a,
                     const Eigen::MatrixBase<DerivedB>& b,
                     const Eigen::MatrixBase<DerivedC>& c) {
  const Eigen::Vector3d e1 = b.derived() - a.derived();
  const Eigen::Vector3d e2 = c.derived() - a.derived();
  return 0.5 * e1.cross(e2).norm();
}

template <class Derived>
double max_edge_length(const Eigen::MatrixBase<Derived>& corners) {
  double longest = 0.0;
  const Eigen::Index n = corners.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double len = (corners.col((i + 1) % n) - corners.col(i)).norm();
    longest = std::max(longest, len);
  }
  return longest;
}

// Orthonormal in-plane basis of the least-squares plane through the given
// points (covariance eigenvectors of the two largest eigenvalues).
struct PlaneBasis {
  Eigen::Vector3d origin;
  Eigen::Vector3d u;
  Eigen::Vector3d v;
};

PlaneBasis least_squares_plane(const Eigen::Matrix3Xd& points);

// Convex hull in counter-clockwise order (monotone chain). Collinear input
// collapses to fewer than three hull points.
std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> points);

// Side lengths (long, short) of the minimum-area rectangle enclosing a
// convex polygon, restricted to hull-edge-aligned orientations (exact for
// convex input). Area ties resolve to the rectangle with the smaller short
// side, which keeps the result independent of hull traversal order.
struct RectangleSides {
  double long_side;
  double short_side;
};

RectangleSides min_enclosing_rectangle(const std::vector<Eigen::Vector2d>& hull);

}  // namespace meshgrade

#endif
