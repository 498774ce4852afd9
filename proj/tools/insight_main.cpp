// insight: 2D detections + registered world-XYZ depth -> fused 3D
// instances, role-filtered scene graphs, labeled point clouds and
// delivery budgets.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "insight/config.hpp"
#include "insight/errors.hpp"
#include "insight/pipeline.hpp"

namespace {

// Exit codes: 0 success, 1 validation failure, 2 missing input,
// 3 internal error.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitMissingInput = 2;
constexpr int kExitInternal = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<int> jobs;
  std::optional<uint64_t> seed;
  std::optional<std::string> role;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Pipeline config JSON");
  cmd->add_option("--out", args.out_dir, "Output directory (overrides config)");
  cmd->add_option("--jobs", args.jobs, "Worker threads for area-level parallelism");
  cmd->add_option("--seed", args.seed, "Random seed (synthetic data)");
  cmd->add_option("--role", args.role, "Role view: firefighter, ems or full");
}

insight::PipelineConfig resolve_config(const CommonArgs& args) {
  insight::PipelineConfig cfg;
  if (!args.config_path.empty()) {
    cfg = insight::load_pipeline_config(args.config_path);
  } else {
    cfg.synth = insight::default_synth_spec();
    insight::finalize_config(cfg);
  }
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.jobs) cfg.jobs = *args.jobs;
  if (args.seed) {
    cfg.seed = *args.seed;
    cfg.synth.seed = *args.seed;
  }
  if (args.role) cfg.role = insight::role_from_string(*args.role);
  insight::finalize_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"indoor building intelligence back end"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "Load, gate and deduplicate detection records");
  CLI::App* fuse = app.add_subcommand(
      "fuse", "Project detections into 3D and fuse per-area instances");
  CLI::App* graph = app.add_subcommand(
      "graph", "Build scene graphs (GraphML) from fused instances");
  CLI::App* filter = app.add_subcommand(
      "filter", "Role-filter exported scene graphs");
  CLI::App* export_cmd = app.add_subcommand(
      "export", "Write labeled point clouds from fused instances");
  CLI::App* eval = app.add_subcommand(
      "eval", "Accuracy, coverage, complementarity and retention metrics");
  CLI::App* budget = app.add_subcommand(
      "budget", "Transmission-time and compression budget grid");
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic building dataset");
  for (CLI::App* cmd : {ingest, fuse, graph, filter, export_cmd, eval, budget, synth}) {
    add_common(cmd, args);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const insight::PipelineConfig cfg = resolve_config(args);
    const insight::Taxonomy taxonomy = insight::taxonomy_for(cfg);

    if (ingest->parsed()) {
      const insight::IngestStats stats = insight::run_ingest(cfg, taxonomy);
      std::printf("ingest: %zu raw, %zu survivors (%.1f%%), %zu dedup-removed\n",
                  stats.raw, stats.survivors, 100.0 * stats.survival_fraction,
                  stats.dedup_removed);
    } else if (fuse->parsed()) {
      const insight::FuseStats stats = insight::run_fuse(cfg, taxonomy);
      std::size_t instances = 0;
      for (const auto& [_, n] : stats.instances_per_area) instances += n;
      std::printf("fuse: %zu observations -> %zu instances in %zu areas\n",
                  stats.observations, instances, stats.instances_per_area.size());
    } else if (graph->parsed()) {
      const insight::GraphStats stats = insight::run_graph(cfg, taxonomy);
      std::size_t nodes = 0;
      for (const auto& [_, n] : stats.nodes_per_area) nodes += n;
      std::printf("graph: %zu nodes across %zu areas\n", nodes,
                  stats.nodes_per_area.size());
    } else if (filter->parsed()) {
      const insight::FilterStats stats = insight::run_filter(cfg, taxonomy);
      std::printf("filter[%s]: node reduction %.1f%%, byte reduction %.1f%%\n",
                  insight::to_string(cfg.role), 100.0 * stats.node_reduction,
                  100.0 * stats.byte_reduction);
    } else if (export_cmd->parsed()) {
      const insight::ExportStats stats = insight::run_export(cfg, taxonomy);
      std::size_t points = 0;
      for (const auto& [_, n] : stats.points_per_area) points += n;
      std::printf("export: %zu points across %zu areas\n", points,
                  stats.points_per_area.size());
    } else if (eval->parsed()) {
      const insight::EvalStats stats = insight::run_eval(cfg, taxonomy);
      if (stats.accuracy_defined) {
        std::printf("eval: %zu areas, overall accuracy %.3f\n", stats.areas,
                    stats.overall_accuracy);
      } else {
        std::printf("eval: %zu areas, no overlapping-class points counted\n",
                    stats.areas);
      }
    } else if (budget->parsed()) {
      insight::run_budget(cfg);
      std::printf("budget: report written to %s/budget_report.json\n",
                  cfg.out_dir.c_str());
    } else if (synth->parsed()) {
      const insight::SynthResult result = insight::run_synth(cfg, taxonomy);
      std::printf("synth: %zu rasters, %zu detection records, %zu areas\n",
                  result.rasters_written, result.detections_written,
                  result.areas.size());
    }
    return kExitOk;
  } catch (const insight::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingInput;
  } catch (const insight::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const insight::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
