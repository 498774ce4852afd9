#include "insight/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "insight/errors.hpp"

namespace insight {

std::optional<Observation> project(const DetectionRecord& det, const XyzRaster& raster,
                                   const RleMask& mask, const Taxonomy& taxonomy,
                                   std::size_t record_index) {
  Observation obs;
  obs.image_id = det.image_id;
  obs.record_index = record_index;
  obs.class_id = taxonomy.id_of(det.class_name);
  obs.confidence = det.confidence;
  obs.source = det.source;
  obs.points = extract_points(raster, mask);
  if (obs.points.empty()) return std::nullopt;
  obs.centroid = centroid(obs.points);
  return obs;
}

std::size_t InstanceRegistry::CellHash::operator()(const CellKey& k) const {
  // FNV-1a over the three cell coordinates.
  uint64_t h = 1469598103934665603ull;
  for (int64_t v : {k.x, k.y, k.z}) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<uint64_t>(v >> (8 * i)) & 0xFF;
      h *= 1099511628211ull;
    }
  }
  return static_cast<std::size_t>(h);
}

InstanceRegistry::InstanceRegistry(std::string area_id, const Taxonomy& taxonomy,
                                   FusionConfig config)
    : area_id_(std::move(area_id)), taxonomy_(&taxonomy), config_(config) {
  if (!(config_.d_merge > 0.0)) throw ValidationError("d_merge must be positive");
}

InstanceRegistry::CellKey InstanceRegistry::cell_of(const Vec3& p) const {
  const double s = config_.d_merge;
  return CellKey{static_cast<int64_t>(std::floor(p.x() / s)),
                 static_cast<int64_t>(std::floor(p.y() / s)),
                 static_cast<int64_t>(std::floor(p.z() / s))};
}

void InstanceRegistry::grid_insert(uint32_t idx, const Vec3& c) {
  grid_[instances_[idx].class_id][cell_of(c)].push_back(idx);
}

void InstanceRegistry::grid_remove(uint32_t idx, const Vec3& c) {
  auto& bucket = grid_[instances_[idx].class_id][cell_of(c)];
  bucket.erase(std::remove(bucket.begin(), bucket.end(), idx), bucket.end());
}

std::optional<uint32_t> InstanceRegistry::nearest_within(int class_id,
                                                         const Vec3& c) const {
  const auto grid_it = grid_.find(class_id);
  if (grid_it == grid_.end()) return std::nullopt;

  const CellKey center = cell_of(c);
  double best_d2 = config_.d_merge * config_.d_merge;
  std::optional<uint32_t> best;
  for (int64_t dx = -1; dx <= 1; ++dx) {
    for (int64_t dy = -1; dy <= 1; ++dy) {
      for (int64_t dz = -1; dz <= 1; ++dz) {
        const auto cell_it =
            grid_it->second.find(CellKey{center.x + dx, center.y + dy, center.z + dz});
        if (cell_it == grid_it->second.end()) continue;
        for (uint32_t idx : cell_it->second) {
          const double d2 = (instances_[idx].centroid - c).squaredNorm();
          // Nearest wins; exact ties go to the lowest instance seq.
          if (d2 < best_d2 || (d2 == best_d2 && (!best || idx < *best))) {
            best_d2 = d2;
            best = idx;
          }
        }
      }
    }
  }
  return best;
}

uint32_t InstanceRegistry::insert(Observation obs) {
  if (obs.points.empty()) throw ValidationError("observation without points");
  ++observations_inserted_;

  const bool structural =
      taxonomy_->class_by_id(obs.class_id).is_structural_surface;

  std::optional<uint32_t> target;
  if (structural) {
    // One instance per (area, structural class) regardless of d_merge.
    const auto it = structural_instance_.find(obs.class_id);
    if (it != structural_instance_.end()) target = it->second;
  } else {
    target = nearest_within(obs.class_id, obs.centroid);
  }

  if (!target) {
    Draft draft;
    draft.seq = static_cast<uint32_t>(instances_.size());
    draft.class_id = obs.class_id;
    draft.centroid = obs.centroid;
    draft.total_weight = static_cast<double>(obs.point_count());
    draft.confidence = obs.confidence;
    draft.observations.push_back({obs.image_id, obs.record_index, obs.point_count(),
                                  obs.confidence, obs.source});
    draft.points = std::move(obs.points);
    instances_.push_back(std::move(draft));
    const uint32_t idx = instances_.back().seq;
    if (structural) {
      structural_instance_[obs.class_id] = idx;
    } else {
      grid_insert(idx, instances_[idx].centroid);
    }
    return idx;
  }

  Draft& inst = instances_[*target];
  const double w = static_cast<double>(obs.point_count());
  const Vec3 old_centroid = inst.centroid;
  inst.centroid = (inst.centroid * inst.total_weight + obs.centroid * w) /
                  (inst.total_weight + w);
  inst.total_weight += w;
  inst.confidence = std::max(inst.confidence, obs.confidence);
  inst.observations.push_back({obs.image_id, obs.record_index, obs.point_count(),
                               obs.confidence, obs.source});
  inst.points.insert(inst.points.end(), obs.points.begin(), obs.points.end());
  if (!structural) {
    // The weighted centroid moved; keep the spatial hash consistent.
    const CellKey before = cell_of(old_centroid);
    const CellKey after = cell_of(inst.centroid);
    if (!(before == after)) {
      grid_remove(*target, old_centroid);
      grid_insert(*target, inst.centroid);
    }
  }
  return *target;
}

std::vector<FusedInstance> InstanceRegistry::finalize() const {
  std::vector<FusedInstance> out;
  out.reserve(instances_.size());
  for (const Draft& draft : instances_) {
    FusedInstance inst;
    inst.seq = draft.seq;
    inst.class_id = draft.class_id;
    inst.class_name = taxonomy_->class_by_id(draft.class_id).name;
    inst.area_id = area_id_;
    char seq_buf[16];
    std::snprintf(seq_buf, sizeof(seq_buf), "%05u", draft.seq);
    inst.instance_id = area_id_ + "/" + inst.class_name + "/" + seq_buf;
    inst.centroid = draft.centroid;
    inst.confidence = draft.confidence;
    inst.observations = draft.observations;
    inst.points = draft.points;
    inst.point_count = draft.points.size();
    inst.box = fit_gravity_aligned_box(draft.points);
    out.push_back(std::move(inst));
  }
  return out;
}

std::map<std::string, std::optional<double>> fragmentation(
    const std::map<std::string, std::size_t>& pipeline_counts,
    const std::map<std::string, std::size_t>& reference_counts) {
  std::map<std::string, std::optional<double>> out;
  for (const auto& [cls, ref] : reference_counts) {
    const auto it = pipeline_counts.find(cls);
    const std::size_t pipeline = it == pipeline_counts.end() ? 0 : it->second;
    if (ref == 0) {
      out[cls] = std::nullopt;
    } else {
      out[cls] = static_cast<double>(pipeline) / static_cast<double>(ref);
    }
  }
  return out;
}

}  // namespace insight
