#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "insight/budget.hpp"
#include "insight/detections.hpp"
#include "insight/fusion.hpp"
#include "insight/plausibility.hpp"
#include "insight/scene_graph.hpp"
#include "insight/synth.hpp"
#include "insight/taxonomy.hpp"

namespace insight {

/// A named payload for the budget grid.
struct PayloadSpec {
  std::string name;
  double bytes = 0.0;
};

/// Everything one pipeline run needs, loadable from a single JSON file.
struct PipelineConfig {
  // Inputs.
  std::vector<std::string> detection_files;
  std::string data_root;     // base of mask/raster relative paths
  std::string rasters_dir;   // defaults to data_root + "/rasters"
  std::string gt_dir;        // ground-truth clouds, one subdir per area
  std::string out_dir = "out";

  GateConfig gate;
  FusionConfig fusion;
  PlausibilityConfig plausibility;
  bool plausibility_enabled = false;
  Role role = Role::Full;
  FloorModel floors;

  // Eval settings.
  double coverage_radius = 0.1;
  double match_radius = 1.0;
  double ocr_radius_px = 64.0;
  std::vector<double> retention_thresholds = {0.0, 0.1, 0.2, 0.3, 0.4,
                                              0.5, 0.6, 0.7, 0.8, 0.9};
  std::map<std::string, std::size_t> reference_counts;  // fragmentation refs
  std::string instances_b_dir;  // second stack for complementarity

  BudgetConfig budget;
  std::vector<PayloadSpec> payloads;
  double source_bytes = 0.0;  // geometry database size for ratios

  SynthSpec synth;
  std::string taxonomy_config;  // optional path

  int jobs = 1;
  uint64_t seed = 1;

  /// FNV-1a of the effective config; stamped into every artifact.
  std::string config_hash;
};

PipelineConfig load_pipeline_config(const std::string& path);
PipelineConfig pipeline_config_from_json_text(const std::string& text);

/// One-area demo scene used when no synth spec is configured.
SynthSpec default_synth_spec();

/// Recomputes the provenance hash from the effective settings.
void finalize_config(PipelineConfig& config);

uint64_t fnv1a64(const std::string& bytes);

}  // namespace insight
