#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "insight/fusion.hpp"
#include "insight/geometry.hpp"
#include "insight/taxonomy.hpp"

namespace insight {

constexpr const char* kPointCloudSchema = "insight-pc/1";

/// Training-ready labeled point cloud: parallel arrays, one entry per
/// point. semantic ids are taxonomy class ids; instance ids are dense
/// per-area indices with -1 for unassigned points.
struct LabeledCloud {
  std::string area_id;
  std::vector<float> coords;        // 3 per point
  std::vector<int32_t> semantic_id;
  std::vector<int32_t> instance_id;
  std::vector<float> confidence;

  std::size_t size() const { return semantic_id.size(); }
  std::map<std::string, long> histogram(const Taxonomy& taxonomy) const;
};

/// Drops duplicate world points claimed by multiple instances, keeping the
/// claim of the higher-confidence instance (ties to the lower instance
/// id). Duplicates are detected on a 1e-6 m quantization grid. Returns the
/// per-instance point lists that survive, ordered like `instances`.
std::vector<PointSet> resolve_point_conflicts(const std::vector<FusedInstance>& instances);

/// Assembles the labeled cloud of one area: points concatenate in
/// instance-id order after conflict resolution.
LabeledCloud make_labeled_cloud(const std::string& area_id,
                                const std::vector<FusedInstance>& instances);

/// Directory layout: coord.f32le (N*3), segment.i32le (N),
/// instance.i32le (N), confidence.f32le (N) and manifest.json.
void write_labeled_cloud(const LabeledCloud& cloud, const Taxonomy& taxonomy,
                         const std::string& dir,
                         const std::map<std::string, std::string>& provenance = {});
LabeledCloud read_labeled_cloud(const std::string& dir);

/// Ground-truth clouds reuse the binary array layout plus a label-names
/// sidecar (labels.json); segment values index into `labels`.
struct GroundTruthCloud {
  std::string area_id;
  std::vector<float> coords;
  std::vector<int32_t> segment;      // indexes into labels
  std::vector<std::string> labels;   // source-dataset tokens

  std::size_t size() const { return segment.size(); }
};

void write_ground_truth_cloud(const GroundTruthCloud& cloud, const std::string& dir);
GroundTruthCloud read_ground_truth_cloud(const std::string& dir);

}  // namespace insight
