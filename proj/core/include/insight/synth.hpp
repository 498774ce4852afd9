#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "insight/geometry.hpp"
#include "insight/taxonomy.hpp"

namespace insight {

/// Fixture classes planted in one synthetic area.
struct SynthFixtureSpec {
  std::string class_name;
  std::size_t count = 0;
};

struct SynthAreaSpec {
  std::string area_id = "synth_a";
  Vec3 room_size = Vec3(10.0, 8.0, 3.0);  // meters
  std::vector<SynthFixtureSpec> fixtures;
  bool structural_surfaces = true;  // plant wall/floor/ceiling
};

/// Deterministic-by-seed synthetic building generator. Every fixture's
/// true centroid and class is recorded, so fused outputs can be checked
/// against planted truth.
struct SynthSpec {
  uint64_t seed = 1;
  std::vector<SynthAreaSpec> areas;
  int views_per_fixture = 3;  // duplication factor across viewpoints
  int points_per_view = 25;
  double fixture_size = 0.3;     // edge of the sampled fixture patch, meters
  double view_offset = 0.05;     // deterministic per-view centroid shift, meters
  double centroid_noise = 0.0;   // random jitter sigma, meters (0 = zero noise)
  double min_confidence = 0.55;  // uniform confidence range, stack A
  double max_confidence = 0.98;
  std::size_t false_positives = 0;  // per area, low-confidence noise records
  uint32_t raster_width = 32;
  uint32_t raster_height = 24;
  double min_separation = 2.0;  // fixture grid spacing, meters
  bool emit_cv_stack = true;    // write a second (offset, sparser) stack
  double cv_offset = 0.3;       // lateral displacement of stack B, meters
};

struct SynthTruthFixture {
  std::string class_name;
  Vec3 position = Vec3::Zero();
  int views = 0;
};

struct SynthTruthArea {
  std::string area_id;
  std::vector<SynthTruthFixture> fixtures;
  std::map<std::string, std::size_t> planted_per_class;
  std::map<std::string, std::size_t> raw_detections_per_class;  // stack A
};

struct SynthResult {
  std::vector<SynthTruthArea> areas;
  std::size_t rasters_written = 0;
  std::size_t detections_written = 0;
};

/// Writes the dataset under `out_dir`:
///   rasters/{image}.xyzr, masks/{image}.rlem,
///   detections/sam3.jsonl [, detections/cv.jsonl],
///   gt/{area}/ (coord.f32le, segment.i32le, labels.json), truth.json.
/// Identical seeds and specs reproduce identical bytes.
SynthResult generate_synthetic_dataset(const SynthSpec& spec, const Taxonomy& taxonomy,
                                       const std::string& out_dir);

/// Stable 64-bit stream id for seeding per-entity generators.
uint64_t derive_seed(uint64_t seed, const std::string& stream);

}  // namespace insight
