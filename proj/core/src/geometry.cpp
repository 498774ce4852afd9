#include "insight/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "insight/errors.hpp"

namespace insight {

double iou(const Box2d& a, const Box2d& b) {
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Vec3 centroid(const PointSet& points) {
  if (points.empty()) throw ValidationError("centroid of empty point set");
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

namespace {

// Canonicalize an angle to [-pi/4, pi/4) modulo pi/2.
double canonical_yaw(double yaw) {
  const double quarter = M_PI / 2.0;
  yaw = std::fmod(yaw, quarter);
  if (yaw >= quarter / 2.0) yaw -= quarter;
  if (yaw < -quarter / 2.0) yaw += quarter;
  return yaw;
}

}  // namespace

GravityAlignedBox fit_gravity_aligned_box(const PointSet& points) {
  if (points.empty()) throw ValidationError("box fit over empty point set");

  GravityAlignedBox box;
  if (points.size() == 1) {
    box.center = points.front();
    return box;
  }

  const Vec3 mean = centroid(points);

  // 2x2 covariance of the ground-plane projection.
  double cxx = 0.0, cyy = 0.0, cxy = 0.0;
  for (const Vec3& p : points) {
    const double dx = p.x() - mean.x();
    const double dy = p.y() - mean.y();
    cxx += dx * dx;
    cyy += dy * dy;
    cxy += dx * dy;
  }
  const double n = static_cast<double>(points.size());
  cxx /= n;
  cyy /= n;
  cxy /= n;

  // Principal axis of a symmetric 2x2 matrix; atan2(0,0) = 0 covers the
  // isotropic case, where any axis is principal and yaw 0 is canonical.
  double yaw = 0.0;
  constexpr double kIsotropicEps = 1e-12;
  if (std::abs(cxy) > kIsotropicEps || std::abs(cxx - cyy) > kIsotropicEps) {
    yaw = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
  }
  yaw = canonical_yaw(yaw);

  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  double min_u = std::numeric_limits<double>::infinity();
  double max_u = -min_u;
  double min_v = min_u, max_v = -min_u;
  double min_z = min_u, max_z = -min_u;
  for (const Vec3& p : points) {
    // Rotate into the yawed frame about the mean.
    const double dx = p.x() - mean.x();
    const double dy = p.y() - mean.y();
    const double u = c * dx + s * dy;
    const double v = -s * dx + c * dy;
    min_u = std::min(min_u, u);
    max_u = std::max(max_u, u);
    min_v = std::min(min_v, v);
    max_v = std::max(max_v, v);
    min_z = std::min(min_z, p.z());
    max_z = std::max(max_z, p.z());
  }

  const double cu = 0.5 * (min_u + max_u);
  const double cv = 0.5 * (min_v + max_v);
  box.center = Vec3(mean.x() + c * cu - s * cv, mean.y() + s * cu + c * cv,
                    0.5 * (min_z + max_z));
  box.extents = Vec3(max_u - min_u, max_v - min_v, max_z - min_z);
  box.yaw = yaw;
  return box;
}

bool box_contains(const GravityAlignedBox& box, const Vec3& p, double tol) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double dx = p.x() - box.center.x();
  const double dy = p.y() - box.center.y();
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  const double dz = p.z() - box.center.z();
  return std::abs(u) <= 0.5 * box.extents.x() + tol &&
         std::abs(v) <= 0.5 * box.extents.y() + tol &&
         std::abs(dz) <= 0.5 * box.extents.z() + tol;
}

}  // namespace insight
