#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "insight/depth_raster.hpp"
#include "insight/detections.hpp"
#include "insight/geometry.hpp"
#include "insight/taxonomy.hpp"

namespace insight {

struct FusionConfig {
  double d_merge = 0.5;  // meters, centroid merge distance
  // Up axis is +z by construction; boxes yaw about it.
};

/// One projected detection: its 3D points and their centroid.
struct Observation {
  std::string image_id;
  std::size_t record_index = 0;  // index within the source image's records
  int class_id = -1;
  double confidence = 0.0;
  Source source = Source::Sam3;
  PointSet points;
  Vec3 centroid = Vec3::Zero();

  std::size_t point_count() const { return points.size(); }
};

/// Summary of an observation kept on the fused instance.
struct ObservationRef {
  std::string image_id;
  std::size_t record_index = 0;
  std::size_t point_count = 0;
  double confidence = 0.0;
  Source source = Source::Sam3;
};

/// A merged multi-view 3D object.
struct FusedInstance {
  std::string instance_id;  // "{area}/{class}/{seq}", stable
  uint32_t seq = 0;
  int class_id = -1;
  std::string class_name;
  std::string area_id;
  Vec3 centroid = Vec3::Zero();  // point-count-weighted mean
  double confidence = 0.0;       // max over member observations
  GravityAlignedBox box;
  std::vector<ObservationRef> observations;
  std::size_t point_count = 0;
  PointSet points;  // concatenated member points (export sidecar)
};

/// Projects one masked detection into 3D. Returns nullopt when every
/// masked pixel is a sentinel (the caller counts the skip).
std::optional<Observation> project(const DetectionRecord& det, const XyzRaster& raster,
                                   const RleMask& mask, const Taxonomy& taxonomy,
                                   std::size_t record_index = 0);

/// Global per-area instance registry. Feed observations in deterministic
/// input order (image_id ascending, record index ascending); merging is
/// order-dependent by construction. Single-writer; finalize is read-only.
class InstanceRegistry {
 public:
  InstanceRegistry(std::string area_id, const Taxonomy& taxonomy,
                   FusionConfig config = {});

  /// Merges into the nearest same-class instance whose centroid lies
  /// within d_merge (ties to the lowest instance seq), else opens a new
  /// instance. Observations of structural-surface classes always collapse
  /// to the single per-area instance of that class. Returns the instance seq.
  uint32_t insert(Observation obs);

  std::size_t instance_count() const { return instances_.size(); }
  std::size_t observation_count() const { return observations_inserted_; }

  /// Closes the registry and fits gravity-aligned boxes.
  std::vector<FusedInstance> finalize() const;

  const std::string& area_id() const { return area_id_; }

 private:
  struct Draft {
    uint32_t seq = 0;
    int class_id = -1;
    Vec3 centroid = Vec3::Zero();
    double total_weight = 0.0;  // accumulated point count
    double confidence = 0.0;
    std::vector<ObservationRef> observations;
    PointSet points;
  };

  struct CellKey {
    int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const;
  };

  CellKey cell_of(const Vec3& p) const;
  void grid_insert(uint32_t idx, const Vec3& centroid);
  void grid_remove(uint32_t idx, const Vec3& centroid);
  std::optional<uint32_t> nearest_within(int class_id, const Vec3& centroid) const;

  std::string area_id_;
  const Taxonomy* taxonomy_;
  FusionConfig config_;
  std::vector<Draft> instances_;
  // Spatial hash, one map per class, cell size d_merge.
  std::map<int, std::unordered_map<CellKey, std::vector<uint32_t>, CellHash>> grid_;
  std::map<int, uint32_t> structural_instance_;  // class -> instance index
  std::size_t observations_inserted_ = 0;
};

/// Pipeline count / reference count per class; nullopt where the
/// reference is zero.
std::map<std::string, std::optional<double>> fragmentation(
    const std::map<std::string, std::size_t>& pipeline_counts,
    const std::map<std::string, std::size_t>& reference_counts);

}  // namespace insight
