#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "insight/geometry.hpp"
#include "insight/rle_mask.hpp"

namespace insight {

/// Per-pixel world coordinates in meters, row-major. Invalid pixels carry
/// the all-three-NaN sentinel. Storage stays in raw 32-bit floats so that
/// decode -> encode reproduces the input bytes exactly.
class XyzRaster {
 public:
  XyzRaster() = default;
  XyzRaster(uint32_t width, uint32_t height);

  uint32_t width() const { return width_; }
  uint32_t height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  bool valid_at(std::size_t index) const;
  /// World point of a valid pixel; coordinates of a sentinel pixel are NaN.
  Vec3 point_at(std::size_t index) const;

  void set(std::size_t index, const Vec3& world);
  void set_sentinel(std::size_t index);

  const std::vector<float>& raw() const { return data_; }
  std::vector<float>& raw() { return data_; }

  std::size_t valid_count() const;

 private:
  uint32_t width_ = 0;
  uint32_t height_ = 0;
  std::vector<float> data_;  // 3 floats per pixel
};

/// XYZR binary format: magic "XYZR", u16 version (=1), u32 width,
/// u32 height, then width*height (x,y,z) triplets of f32, all
/// little-endian. Sentinel pixels are all-three-NaN.
XyzRaster read_xyz_raster(std::istream& in);
XyzRaster read_xyz_raster(const std::string& path);
void write_xyz_raster(const XyzRaster& raster, std::ostream& out);
void write_xyz_raster(const XyzRaster& raster, const std::string& path);

/// Pinhole intrinsics plus a rigid camera-to-world transform.
struct CameraModel {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  Eigen::Isometry3d pose = Eigen::Isometry3d::Identity();  // camera -> world

  /// Throws ValidationError unless fx,fy > 0, intrinsics finite and the
  /// rotation is orthonormal within 1e-6.
  void validate() const;
};

/// Scalar depth raster in meters; NaN marks invalid pixels.
struct DepthRaster {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<float> depth;  // row-major, meters
};

/// Back-projects depth through the pinhole model:
/// pixel (u,v) at depth d maps to pose * (d*(u-cx)/fx, d*(v-cy)/fy, d).
/// Invalid (NaN) or negative depths become sentinel pixels.
XyzRaster back_project(const DepthRaster& depth, const CameraModel& cam);

/// World points of the masked, non-sentinel pixels in row-major order.
/// Mask dimensions must equal raster dimensions.
PointSet extract_points(const XyzRaster& raster, const RleMask& mask);

}  // namespace insight
