#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <vector>

namespace insight {

using Vec3 = Eigen::Vector3d;

/// World points in meters.
using PointSet = std::vector<Vec3>;

/// Axis-ordered 2D pixel box, exclusive of nothing: area = (x_max-x_min)*(y_max-y_min).
struct Box2d {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }
  bool valid() const { return x_min < x_max && y_min < y_max; }
};

/// Intersection-over-union of two pixel boxes. Symmetric, in [0, 1].
double iou(const Box2d& a, const Box2d& b);

/// 3D box with the vertical axis locked to +z and yaw fitted in the ground
/// plane. `extents` are full side lengths; yaw is canonicalized to
/// [-pi/4, pi/4) since a rectangle's principal axis is 4-fold ambiguous.
struct GravityAlignedBox {
  Vec3 center = Vec3::Zero();
  Vec3 extents = Vec3::Zero();
  double yaw = 0.0;
};

/// Arithmetic mean per coordinate. Throws ValidationError on empty input.
Vec3 centroid(const PointSet& points);

/// Fits a gravity-aligned box: yaw from the principal eigenvector of the
/// 2D covariance of the ground-plane projection, planar extents from the
/// min/max in the yawed frame, z extent from the raw min/max.
/// A single point yields a degenerate box (zero extents, yaw 0).
GravityAlignedBox fit_gravity_aligned_box(const PointSet& points);

/// True if `p` lies inside the box, inflated by `tol` on every side.
bool box_contains(const GravityAlignedBox& box, const Vec3& p, double tol = 1e-9);

}  // namespace insight
