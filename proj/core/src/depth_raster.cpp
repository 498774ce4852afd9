#include "insight/depth_raster.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "binary_io.hpp"
#include "insight/errors.hpp"

namespace insight {

namespace {

constexpr char kMagic[4] = {'X', 'Y', 'Z', 'R'};
constexpr uint16_t kVersion = 1;
// Canonical quiet-NaN bit pattern used when we synthesize sentinels.
constexpr uint32_t kSentinelBits = 0x7FC00000u;

float sentinel_value() {
  float f;
  uint32_t bits = kSentinelBits;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

}  // namespace

XyzRaster::XyzRaster(uint32_t width, uint32_t height)
    : width_(width), height_(height) {
  data_.assign(pixel_count() * 3, sentinel_value());
}

bool XyzRaster::valid_at(std::size_t index) const {
  const float* p = &data_[index * 3];
  return !(std::isnan(p[0]) && std::isnan(p[1]) && std::isnan(p[2]));
}

Vec3 XyzRaster::point_at(std::size_t index) const {
  const float* p = &data_[index * 3];
  return Vec3(p[0], p[1], p[2]);
}

void XyzRaster::set(std::size_t index, const Vec3& world) {
  float* p = &data_[index * 3];
  p[0] = static_cast<float>(world.x());
  p[1] = static_cast<float>(world.y());
  p[2] = static_cast<float>(world.z());
}

void XyzRaster::set_sentinel(std::size_t index) {
  float* p = &data_[index * 3];
  p[0] = p[1] = p[2] = sentinel_value();
}

std::size_t XyzRaster::valid_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    if (valid_at(i)) ++n;
  }
  return n;
}

XyzRaster read_xyz_raster(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) {
    throw ParseError(ParseErrorKind::Truncated, "raster header truncated");
  }
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError(ParseErrorKind::BadMagic, "not an XYZR raster");
  }
  uint16_t version = 0;
  uint32_t width = 0, height = 0;
  if (!detail::read_le(in, version)) {
    throw ParseError(ParseErrorKind::Truncated, "raster header truncated");
  }
  if (version != kVersion) {
    throw ParseError(ParseErrorKind::BadVersion,
                     "unsupported raster version " + std::to_string(version));
  }
  if (!detail::read_le(in, width) || !detail::read_le(in, height)) {
    throw ParseError(ParseErrorKind::Truncated, "raster header truncated");
  }

  const uint64_t pixels = static_cast<uint64_t>(width) * height;
  // 12 payload bytes per pixel; cap at 1 TiB to catch corrupt headers
  // before any allocation.
  constexpr uint64_t kMaxPayload = uint64_t(1) << 40;
  if (pixels > kMaxPayload / 12) {
    throw ParseError(ParseErrorKind::DimensionOverflow,
                     "raster dimensions overflow: " + std::to_string(width) +
                         "x" + std::to_string(height));
  }

  XyzRaster raster(width, height);
  for (std::size_t i = 0; i < raster.raw().size(); ++i) {
    if (!detail::read_f32_le(in, raster.raw()[i])) {
      throw ParseError(ParseErrorKind::Truncated, "raster payload truncated");
    }
  }
  if (in.peek() != std::istream::traits_type::eof()) {
    throw ParseError(ParseErrorKind::TrailingData,
                     "raster payload longer than declared size");
  }

  // Non-sentinel pixels must be finite in every coordinate.
  for (std::size_t i = 0; i < raster.pixel_count(); ++i) {
    const float* p = &raster.raw()[i * 3];
    const bool sentinel = std::isnan(p[0]) && std::isnan(p[1]) && std::isnan(p[2]);
    if (sentinel) continue;
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) {
      throw ParseError(ParseErrorKind::NonFinite,
                       "non-finite coordinate at pixel " + std::to_string(i));
    }
  }
  return raster;
}

XyzRaster read_xyz_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open raster file: " + path);
  return read_xyz_raster(in);
}

void write_xyz_raster(const XyzRaster& raster, std::ostream& out) {
  out.write(kMagic, 4);
  detail::write_le(out, kVersion);
  detail::write_le(out, raster.width());
  detail::write_le(out, raster.height());
  for (float f : raster.raw()) detail::write_f32_le(out, f);
}

void write_xyz_raster(const XyzRaster& raster, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write raster file: " + path);
  write_xyz_raster(raster, out);
  if (!out) throw IoError("short write: " + path);
}

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy) ||
      !std::isfinite(cx) || !std::isfinite(cy)) {
    throw ValidationError("camera intrinsics must be finite with fx, fy > 0");
  }
  const Eigen::Matrix3d r = pose.rotation();
  const Eigen::Matrix3d err = r.transpose() * r - Eigen::Matrix3d::Identity();
  if (err.cwiseAbs().maxCoeff() > 1e-6) {
    throw ValidationError("camera rotation is not orthonormal within 1e-6");
  }
}

XyzRaster back_project(const DepthRaster& depth, const CameraModel& cam) {
  cam.validate();
  if (depth.depth.size() != static_cast<std::size_t>(depth.width) * depth.height) {
    throw ValidationError("depth raster size does not match dimensions");
  }
  XyzRaster out(depth.width, depth.height);
  std::size_t i = 0;
  for (uint32_t v = 0; v < depth.height; ++v) {
    for (uint32_t u = 0; u < depth.width; ++u, ++i) {
      const float d = depth.depth[i];
      if (std::isnan(d) || d < 0.0f) continue;  // stays sentinel
      const Vec3 camera_point(d * (u - cam.cx) / cam.fx,
                              d * (v - cam.cy) / cam.fy, d);
      out.set(i, cam.pose * camera_point);
    }
  }
  return out;
}

PointSet extract_points(const XyzRaster& raster, const RleMask& mask) {
  if (mask.width != raster.width() || mask.height != raster.height()) {
    throw ValidationError("mask dimensions do not match raster dimensions");
  }
  mask.validate();
  PointSet points;
  points.reserve(mask.bit_count());
  for (const auto& [start, len] : mask.runs) {
    for (uint32_t i = 0; i < len; ++i) {
      const std::size_t index = start + i;
      // Masked sentinel pixels are depth holes, silently dropped.
      if (raster.valid_at(index)) points.push_back(raster.point_at(index));
    }
  }
  return points;
}

}  // namespace insight
