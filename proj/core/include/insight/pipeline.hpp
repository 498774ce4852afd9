#pragma once

#include <map>
#include <string>
#include <vector>

#include "insight/config.hpp"
#include "insight/fusion.hpp"
#include "insight/scene_graph.hpp"
#include "insight/synth.hpp"

namespace insight {

// Command cores shared by the CLI and the test suites. Each run_* writes
// its artifacts under config.out_dir and returns a summary. Outputs are
// byte-identical across reruns and across --jobs settings.

struct IngestStats {
  std::size_t raw = 0;
  std::size_t schema_rejected = 0;
  std::size_t verdict_rejected = 0;
  std::size_t below_threshold = 0;
  std::size_t dedup_removed = 0;
  std::size_t survivors = 0;
  double survival_fraction = 0.0;
  std::map<std::string, std::size_t> per_source;  // of survivors
};

/// Loads every configured detection file, gates, dedups per image and
/// persists the normalized store plus statistics.
IngestStats run_ingest(const PipelineConfig& config, const Taxonomy& taxonomy);

struct FuseStats {
  std::size_t observations = 0;
  std::size_t skipped_no_mask = 0;
  std::size_t skipped_no_raster = 0;
  std::size_t skipped_empty = 0;
  std::map<std::string, std::size_t> instances_per_area;
};

/// Projects the ingest store into 3D and fuses per-area registries.
FuseStats run_fuse(const PipelineConfig& config, const Taxonomy& taxonomy);

/// Instance dump I/O (JSON + point sidecar).
void save_instances(const std::string& dir, const std::string& area_id,
                    const std::vector<FusedInstance>& instances,
                    const std::string& config_hash);
std::vector<FusedInstance> load_instances(const std::string& dir,
                                          const std::string& area_id,
                                          const Taxonomy& taxonomy,
                                          bool with_points = true);
std::vector<std::string> list_instance_areas(const std::string& dir);

struct GraphStats {
  std::map<std::string, std::size_t> nodes_per_area;
  std::size_t plausibility_removed = 0;
};

/// Builds one full scene graph per area (GraphML), optionally applying
/// the plausibility filter first.
GraphStats run_graph(const PipelineConfig& config, const Taxonomy& taxonomy);

struct FilterStats {
  std::map<std::string, std::size_t> nodes_per_area;
  double node_reduction = 0.0;
  double byte_reduction = 0.0;
};

/// Role-filters every exported graph and writes the payload report.
FilterStats run_filter(const PipelineConfig& config, const Taxonomy& taxonomy);

struct ExportStats {
  std::map<std::string, std::size_t> points_per_area;
};

/// Writes labeled point clouds per area.
ExportStats run_export(const PipelineConfig& config, const Taxonomy& taxonomy);

struct EvalStats {
  std::size_t areas = 0;
  bool accuracy_defined = false;
  double overall_accuracy = 0.0;
};

/// Runs every metric the inputs support and writes eval_report.json.
EvalStats run_eval(const PipelineConfig& config, const Taxonomy& taxonomy);

/// Computes the payload x bandwidth grid and writes budget_report.json.
void run_budget(const PipelineConfig& config);

/// Generates the synthetic dataset under config.out_dir.
SynthResult run_synth(const PipelineConfig& config, const Taxonomy& taxonomy);

/// Loads the taxonomy named by the config, or the defaults.
Taxonomy taxonomy_for(const PipelineConfig& config);

}  // namespace insight
