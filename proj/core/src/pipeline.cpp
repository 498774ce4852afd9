#include "insight/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "binary_io.hpp"
#include "insight/budget.hpp"
#include "insight/depth_raster.hpp"
#include "insight/detections.hpp"
#include "insight/errors.hpp"
#include "insight/eval.hpp"
#include "insight/parallel.hpp"
#include "insight/plausibility.hpp"
#include "insight/point_cloud.hpp"
#include "insight/rle_mask.hpp"

namespace insight {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kToolTag = "insight/0.1.0";
constexpr const char* kInstanceSchema = "insight-inst/1";

ordered_json provenance_json(const std::string& config_hash) {
  ordered_json j;
  j["tool"] = kToolTag;
  j["config_hash"] = config_hash;
  return j;
}

void write_json_file(const fs::path& path, const ordered_json& j) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("short write: " + path.string());
}

std::vector<std::string> sorted_subdirs(const fs::path& root) {
  std::vector<std::string> names;
  if (!fs::exists(root)) return names;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

Taxonomy taxonomy_for(const PipelineConfig& config) {
  if (config.taxonomy_config.empty()) return Taxonomy::defaults();
  return Taxonomy::from_json_file(config.taxonomy_config);
}

// ---------------------------------------------------------------------
// ingest

IngestStats run_ingest(const PipelineConfig& config, const Taxonomy& taxonomy) {
  if (config.detection_files.empty()) {
    throw ValidationError("no detection files configured");
  }

  IngestStats stats;
  std::vector<DetectionRecord> all;
  std::vector<std::string> diagnostics;
  for (const std::string& file : config.detection_files) {
    LoadResult loaded = load_detections(file, taxonomy);
    stats.raw += loaded.records.size();
    stats.schema_rejected += loaded.rejected;
    diagnostics.insert(diagnostics.end(), loaded.diagnostics.begin(),
                       loaded.diagnostics.end());
    all.insert(all.end(), std::make_move_iterator(loaded.records.begin()),
               std::make_move_iterator(loaded.records.end()));
  }

  for (const DetectionRecord& rec : all) {
    if (rec.verdict == VerifierVerdict::Rejected) {
      ++stats.verdict_rejected;
    } else if (rec.confidence < config.gate.min_confidence(rec.source)) {
      ++stats.below_threshold;
    }
  }

  const std::vector<DetectionRecord> gated = gate(all, config.gate);
  const std::vector<DetectionRecord> store = dedup_union_by_image(gated, config.gate);
  stats.dedup_removed = gated.size() - store.size();
  stats.survivors = store.size();
  stats.survival_fraction =
      stats.raw ? static_cast<double>(stats.survivors) / stats.raw : 0.0;
  for (const DetectionRecord& rec : store) ++stats.per_source[to_string(rec.source)];

  const fs::path out_root(config.out_dir);
  fs::create_directories(out_root / "ingest");
  {
    std::ofstream out(out_root / "ingest" / "store.jsonl", std::ios::binary);
    if (!out) throw IoError("cannot write ingest store");
    out << serialize_detections(store);
  }

  ordered_json j;
  j["provenance"] = provenance_json(config.config_hash);
  j["raw"] = stats.raw;
  j["schema_rejected"] = stats.schema_rejected;
  j["verdict_rejected"] = stats.verdict_rejected;
  j["below_threshold"] = stats.below_threshold;
  j["dedup_removed"] = stats.dedup_removed;
  j["survivors"] = stats.survivors;
  j["survival_fraction"] = stats.survival_fraction;
  ordered_json sources = ordered_json::object();
  for (const auto& [src, n] : stats.per_source) sources[src] = n;
  j["per_source"] = sources;

  // 2D detection diagnostics over the gated set.
  ordered_json small = ordered_json::object();
  for (const auto& [cls, stat] : small_object_stats(gated)) {
    ordered_json row;
    row["total"] = stat.total;
    row["small"] = stat.small;
    if (const auto f = stat.fraction()) {
      row["fraction"] = *f;
    } else {
      row["fraction"] = nullptr;
    }
    small[cls] = row;
  }
  j["small_objects_px2_1024"] = small;

  const OcrExclusiveStats ocr = ocr_exclusive_count(gated, config.ocr_radius_px);
  ordered_json ocr_json;
  ocr_json["match_radius_px"] = ocr.match_radius_px;
  ocr_json["total_ocr"] = ocr.total_ocr;
  ocr_json["exclusive"] = ocr.exclusive;
  ordered_json per_class = ordered_json::object();
  for (const auto& [cls, n] : ocr.per_class) per_class[cls] = n;
  ocr_json["exclusive_per_class"] = per_class;
  j["ocr"] = ocr_json;

  j["diagnostics"] = diagnostics;
  write_json_file(out_root / "ingest" / "stats.json", j);
  return stats;
}

// ---------------------------------------------------------------------
// instance dump I/O

void save_instances(const std::string& dir, const std::string& area_id,
                    const std::vector<FusedInstance>& instances,
                    const std::string& config_hash) {
  fs::create_directories(dir);
  const fs::path base = fs::path(dir) / area_id;

  ordered_json j;
  j["schema"] = kInstanceSchema;
  j["provenance"] = provenance_json(config_hash);
  j["area_id"] = area_id;
  ordered_json arr = ordered_json::array();
  for (const FusedInstance& inst : instances) {
    ordered_json ij;
    ij["instance_id"] = inst.instance_id;
    ij["seq"] = inst.seq;
    ij["class"] = inst.class_name;
    ij["centroid"] = {inst.centroid.x(), inst.centroid.y(), inst.centroid.z()};
    ij["confidence"] = inst.confidence;
    ij["box"] = {{"cx", inst.box.center.x()}, {"cy", inst.box.center.y()},
                 {"cz", inst.box.center.z()}, {"dx", inst.box.extents.x()},
                 {"dy", inst.box.extents.y()}, {"dz", inst.box.extents.z()},
                 {"yaw", inst.box.yaw}};
    ij["point_count"] = inst.point_count;
    ordered_json obs = ordered_json::array();
    for (const ObservationRef& o : inst.observations) {
      obs.push_back({{"image_id", o.image_id},
                     {"record_index", o.record_index},
                     {"point_count", o.point_count},
                     {"confidence", o.confidence},
                     {"source", to_string(o.source)}});
    }
    ij["observations"] = obs;
    arr.push_back(ij);
  }
  j["instances"] = arr;
  write_json_file(fs::path(base.string() + ".json"), j);

  // Point sidecar: magic, version, instance count, then per instance the
  // point count and f32 triplets.
  std::ofstream out(base.string() + ".points.bin", std::ios::binary);
  if (!out) throw IoError("cannot write point sidecar for " + area_id);
  out.write("IPTS", 4);
  detail::write_le<uint32_t>(out, 1);
  detail::write_le<uint64_t>(out, instances.size());
  for (const FusedInstance& inst : instances) {
    detail::write_le<uint64_t>(out, inst.points.size());
    for (const Vec3& p : inst.points) {
      detail::write_f32_le(out, static_cast<float>(p.x()));
      detail::write_f32_le(out, static_cast<float>(p.y()));
      detail::write_f32_le(out, static_cast<float>(p.z()));
    }
  }
  if (!out) throw IoError("short write: point sidecar for " + area_id);
}

std::vector<FusedInstance> load_instances(const std::string& dir,
                                          const std::string& area_id,
                                          const Taxonomy& taxonomy, bool with_points) {
  const fs::path base = fs::path(dir) / area_id;
  std::ifstream in(base.string() + ".json");
  if (!in) throw IoError("cannot open instance dump " + base.string() + ".json");
  ordered_json j;
  try {
    in >> j;
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(ParseErrorKind::BadSyntax,
                     std::string("instance dump: ") + e.what());
  }
  if (j.value("schema", std::string()) != kInstanceSchema) {
    throw ParseError(ParseErrorKind::BadSchema, "unsupported instance dump schema");
  }

  std::vector<FusedInstance> instances;
  for (const ordered_json& ij : j.at("instances")) {
    FusedInstance inst;
    inst.instance_id = ij.at("instance_id").get<std::string>();
    inst.seq = ij.at("seq").get<uint32_t>();
    inst.class_name = ij.at("class").get<std::string>();
    inst.class_id = taxonomy.id_of(inst.class_name);
    inst.area_id = j.at("area_id").get<std::string>();
    const auto c = ij.at("centroid").get<std::vector<double>>();
    inst.centroid = Vec3(c.at(0), c.at(1), c.at(2));
    inst.confidence = ij.at("confidence").get<double>();
    const ordered_json& bj = ij.at("box");
    inst.box.center = Vec3(bj.at("cx").get<double>(), bj.at("cy").get<double>(),
                           bj.at("cz").get<double>());
    inst.box.extents = Vec3(bj.at("dx").get<double>(), bj.at("dy").get<double>(),
                            bj.at("dz").get<double>());
    inst.box.yaw = bj.at("yaw").get<double>();
    inst.point_count = ij.at("point_count").get<std::size_t>();
    for (const ordered_json& oj : ij.at("observations")) {
      ObservationRef ref;
      ref.image_id = oj.at("image_id").get<std::string>();
      ref.record_index = oj.at("record_index").get<std::size_t>();
      ref.point_count = oj.at("point_count").get<std::size_t>();
      ref.confidence = oj.at("confidence").get<double>();
      ref.source = source_from_string(oj.at("source").get<std::string>());
      inst.observations.push_back(std::move(ref));
    }
    instances.push_back(std::move(inst));
  }

  if (with_points) {
    std::ifstream pts(base.string() + ".points.bin", std::ios::binary);
    if (!pts) throw IoError("cannot open point sidecar for " + area_id);
    char magic[4];
    if (!pts.read(magic, 4) || std::string_view(magic, 4) != "IPTS") {
      throw ParseError(ParseErrorKind::BadMagic, "bad point sidecar magic");
    }
    uint32_t version = 0;
    uint64_t count = 0;
    if (!detail::read_le(pts, version) || version != 1 || !detail::read_le(pts, count)) {
      throw ParseError(ParseErrorKind::BadVersion, "bad point sidecar header");
    }
    if (count != instances.size()) {
      throw ValidationError("point sidecar instance count mismatch");
    }
    for (FusedInstance& inst : instances) {
      uint64_t n = 0;
      if (!detail::read_le(pts, n)) {
        throw ParseError(ParseErrorKind::Truncated, "point sidecar truncated");
      }
      inst.points.reserve(n);
      for (uint64_t i = 0; i < n; ++i) {
        float x, y, z;
        if (!detail::read_f32_le(pts, x) || !detail::read_f32_le(pts, y) ||
            !detail::read_f32_le(pts, z)) {
          throw ParseError(ParseErrorKind::Truncated, "point sidecar truncated");
        }
        inst.points.emplace_back(x, y, z);
      }
    }
  }
  return instances;
}

std::vector<std::string> list_instance_areas(const std::string& dir) {
  std::vector<std::string> areas;
  if (!fs::exists(dir)) return areas;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path p = entry.path();
    if (p.extension() == ".json") areas.push_back(p.stem().string());
  }
  std::sort(areas.begin(), areas.end());
  return areas;
}

// ---------------------------------------------------------------------
// fuse

FuseStats run_fuse(const PipelineConfig& config, const Taxonomy& taxonomy) {
  const fs::path store_path = fs::path(config.out_dir) / "ingest" / "store.jsonl";
  if (!fs::exists(store_path)) {
    throw IoError("ingest store not found: " + store_path.string() +
                  " (run ingest first)");
  }
  if (config.rasters_dir.empty() || !fs::exists(config.rasters_dir)) {
    throw IoError("raster directory not found: " + config.rasters_dir);
  }

  const LoadResult loaded = load_detections(store_path.string(), taxonomy);

  // Area -> image -> records, in store order within each image.
  std::map<std::string, std::map<std::string, std::vector<DetectionRecord>>> by_area;
  for (const DetectionRecord& rec : loaded.records) {
    by_area[rec.area_id][rec.image_id].push_back(rec);
  }

  std::vector<std::string> areas;
  for (const auto& [area, _] : by_area) areas.push_back(area);

  struct AreaOutcome {
    std::vector<FusedInstance> instances;
    std::size_t observations = 0;
    std::size_t skipped_no_mask = 0;
    std::size_t skipped_no_raster = 0;
    std::size_t skipped_empty = 0;
    std::vector<std::string> diagnostics;
  };
  std::vector<AreaOutcome> outcomes(areas.size());

  parallel_for(areas.size(), config.jobs, [&](std::size_t ai) {
    const std::string& area = areas[ai];
    AreaOutcome& outcome = outcomes[ai];
    InstanceRegistry registry(area, taxonomy, config.fusion);

    for (const auto& [image_id, records] : by_area[area]) {
      const fs::path raster_path =
          fs::path(config.rasters_dir) / (image_id + ".xyzr");
      if (!fs::exists(raster_path)) {
        outcome.skipped_no_raster += records.size();
        outcome.diagnostics.push_back("image " + image_id + ": raster missing");
        continue;
      }
      const XyzRaster raster = read_xyz_raster(raster_path.string());

      for (std::size_t ri = 0; ri < records.size(); ++ri) {
        const DetectionRecord& rec = records[ri];
        if (!rec.mask_path) {
          ++outcome.skipped_no_mask;
          outcome.diagnostics.push_back("image " + image_id + " record " +
                                        std::to_string(ri) + ": no mask");
          continue;
        }
        fs::path mask_path(*rec.mask_path);
        if (mask_path.is_relative() && !config.data_root.empty()) {
          mask_path = fs::path(config.data_root) / mask_path;
        }
        if (!fs::exists(mask_path)) {
          ++outcome.skipped_no_mask;
          outcome.diagnostics.push_back("image " + image_id + " record " +
                                        std::to_string(ri) + ": mask missing");
          continue;
        }
        const RleMask mask = read_rle_mask(mask_path.string());
        auto obs = project(rec, raster, mask, taxonomy, ri);
        if (!obs) {
          ++outcome.skipped_empty;
          outcome.diagnostics.push_back("image " + image_id + " record " +
                                        std::to_string(ri) +
                                        ": no valid depth under mask");
          continue;
        }
        registry.insert(std::move(*obs));
        ++outcome.observations;
      }
    }
    outcome.instances = registry.finalize();
  });

  FuseStats stats;
  const std::string instances_dir = (fs::path(config.out_dir) / "instances").string();
  ordered_json diag = ordered_json::array();
  for (std::size_t ai = 0; ai < areas.size(); ++ai) {
    const AreaOutcome& outcome = outcomes[ai];
    save_instances(instances_dir, areas[ai], outcome.instances, config.config_hash);
    stats.observations += outcome.observations;
    stats.skipped_no_mask += outcome.skipped_no_mask;
    stats.skipped_no_raster += outcome.skipped_no_raster;
    stats.skipped_empty += outcome.skipped_empty;
    stats.instances_per_area[areas[ai]] = outcome.instances.size();
    for (const std::string& d : outcome.diagnostics) diag.push_back(d);
  }

  ordered_json j;
  j["provenance"] = provenance_json(config.config_hash);
  j["observations"] = stats.observations;
  j["skipped_no_mask"] = stats.skipped_no_mask;
  j["skipped_no_raster"] = stats.skipped_no_raster;
  j["skipped_empty"] = stats.skipped_empty;
  ordered_json per_area = ordered_json::object();
  for (const auto& [area, n] : stats.instances_per_area) per_area[area] = n;
  j["instances_per_area"] = per_area;
  j["diagnostics"] = diag;
  write_json_file(fs::path(config.out_dir) / "fuse_stats.json", j);
  return stats;
}

// ---------------------------------------------------------------------
// graph / filter

GraphStats run_graph(const PipelineConfig& config, const Taxonomy& taxonomy) {
  const std::string instances_dir = (fs::path(config.out_dir) / "instances").string();
  const std::vector<std::string> areas = list_instance_areas(instances_dir);
  if (areas.empty()) {
    throw IoError("no instance dumps under " + instances_dir + " (run fuse first)");
  }

  GraphStats stats;
  std::vector<std::string> documents(areas.size());
  std::vector<std::size_t> node_counts(areas.size());
  std::vector<std::size_t> removed(areas.size(), 0);
  std::vector<ReductionReport> reductions(areas.size());

  parallel_for(areas.size(), config.jobs, [&](std::size_t ai) {
    std::vector<FusedInstance> instances =
        load_instances(instances_dir, areas[ai], taxonomy, /*with_points=*/false);
    if (config.plausibility_enabled) {
      std::vector<FusedInstance> filtered =
          plausibility_apply(instances, config.plausibility, taxonomy);
      reductions[ai] = plausibility_report(instances, filtered);
      removed[ai] = instances.size() - filtered.size();
      instances = std::move(filtered);
    }
    BuildResult built =
        build_scene_graph(areas[ai], instances, taxonomy, config.floors, "");
    built.graph.graph_attributes["provenance"] =
        std::string(kToolTag) + ";cfg=" + config.config_hash;
    validate_hierarchy(built.graph);
    documents[ai] = export_graphml(built.graph);
    node_counts[ai] = built.graph.node_count();
  });

  const fs::path graphs_dir = fs::path(config.out_dir) / "graphs";
  fs::create_directories(graphs_dir);
  for (std::size_t ai = 0; ai < areas.size(); ++ai) {
    std::ofstream out(graphs_dir / (areas[ai] + ".graphml"), std::ios::binary);
    if (!out) throw IoError("cannot write graph for " + areas[ai]);
    out << documents[ai];
    stats.nodes_per_area[areas[ai]] = node_counts[ai];
    stats.plausibility_removed += removed[ai];
  }

  if (config.plausibility_enabled) {
    ordered_json j;
    j["provenance"] = provenance_json(config.config_hash);
    j["tau"] = config.plausibility.tau;
    ordered_json per_area = ordered_json::object();
    for (std::size_t ai = 0; ai < areas.size(); ++ai) {
      ordered_json rows = ordered_json::object();
      for (const auto& [cls, row] : reductions[ai].per_class) {
        ordered_json r;
        r["raw"] = row.raw;
        r["filtered"] = row.filtered;
        if (const auto red = row.reduction()) {
          r["reduction"] = *red;
        } else {
          r["reduction"] = nullptr;
        }
        rows[cls] = r;
      }
      ordered_json aj;
      aj["per_class"] = rows;
      aj["raw"] = reductions[ai].overall.raw;
      aj["filtered"] = reductions[ai].overall.filtered;
      per_area[areas[ai]] = aj;
    }
    j["per_area"] = per_area;
    write_json_file(fs::path(config.out_dir) / "reduction_report.json", j);
  }
  return stats;
}

FilterStats run_filter(const PipelineConfig& config, const Taxonomy& taxonomy) {
  const fs::path graphs_dir = fs::path(config.out_dir) / "graphs";
  std::vector<std::string> areas;
  if (fs::exists(graphs_dir)) {
    for (const auto& entry : fs::directory_iterator(graphs_dir)) {
      const std::string name = entry.path().filename().string();
      // Full graphs only: "{area}.graphml" with no role suffix.
      if (entry.path().extension() == ".graphml" &&
          name.find('.') == name.rfind(".graphml")) {
        areas.push_back(entry.path().stem().string());
      }
    }
  }
  std::sort(areas.begin(), areas.end());
  if (areas.empty()) {
    throw IoError("no graphs under " + graphs_dir.string() + " (run graph first)");
  }

  FilterStats stats;
  std::size_t full_nodes = 0, full_bytes = 0, view_nodes = 0, view_bytes = 0;
  ordered_json per_area = ordered_json::object();
  for (const std::string& area : areas) {
    std::ifstream in(graphs_dir / (area + ".graphml"), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string full_doc = ss.str();
    const SceneGraph full = import_graphml(full_doc);

    const SceneGraph view = filter_role(full, config.role, taxonomy);
    validate_hierarchy(view);
    const std::string view_doc = export_graphml(view);
    std::ofstream out(graphs_dir / (area + "." + to_string(config.role) + ".graphml"),
                      std::ios::binary);
    if (!out) throw IoError("cannot write filtered graph for " + area);
    out << view_doc;

    full_nodes += full.node_count();
    full_bytes += full_doc.size();
    view_nodes += view.node_count();
    view_bytes += view_doc.size();
    stats.nodes_per_area[area] = view.node_count();

    const PayloadReport report =
        payload_stats({"full", full_doc.size(), full.node_count()},
                      {{to_string(config.role), view_doc.size(), view.node_count()}});
    ordered_json aj;
    aj["full_nodes"] = full.node_count();
    aj["full_bytes"] = full_doc.size();
    aj["view_nodes"] = view.node_count();
    aj["view_bytes"] = view_doc.size();
    aj["node_reduction"] = report.views[0].node_reduction;
    aj["byte_reduction"] = report.views[0].byte_reduction;
    per_area[area] = aj;
  }

  stats.node_reduction = full_nodes ? 1.0 - double(view_nodes) / full_nodes : 0.0;
  stats.byte_reduction = full_bytes ? 1.0 - double(view_bytes) / full_bytes : 0.0;

  ordered_json j;
  j["provenance"] = provenance_json(config.config_hash);
  j["role"] = to_string(config.role);
  j["per_area"] = per_area;
  j["total_full_nodes"] = full_nodes;
  j["total_view_nodes"] = view_nodes;
  j["total_full_bytes"] = full_bytes;
  j["total_view_bytes"] = view_bytes;
  j["node_reduction"] = stats.node_reduction;
  j["byte_reduction"] = stats.byte_reduction;
  write_json_file(fs::path(config.out_dir) / "payload_report.json", j);
  return stats;
}

// ---------------------------------------------------------------------
// export / eval / budget / synth

ExportStats run_export(const PipelineConfig& config, const Taxonomy& taxonomy) {
  const std::string instances_dir = (fs::path(config.out_dir) / "instances").string();
  const std::vector<std::string> areas = list_instance_areas(instances_dir);
  if (areas.empty()) {
    throw IoError("no instance dumps under " + instances_dir + " (run fuse first)");
  }

  ExportStats stats;
  std::vector<std::size_t> counts(areas.size());
  parallel_for(areas.size(), config.jobs, [&](std::size_t ai) {
    const std::vector<FusedInstance> instances =
        load_instances(instances_dir, areas[ai], taxonomy, /*with_points=*/true);
    const LabeledCloud cloud = make_labeled_cloud(areas[ai], instances);
    write_labeled_cloud(cloud, taxonomy,
                        (fs::path(config.out_dir) / "pointcloud" / areas[ai]).string(),
                        {{"tool", kToolTag}, {"config_hash", config.config_hash}});
    counts[ai] = cloud.size();
  });
  for (std::size_t ai = 0; ai < areas.size(); ++ai) {
    stats.points_per_area[areas[ai]] = counts[ai];
  }
  return stats;
}

EvalStats run_eval(const PipelineConfig& config, const Taxonomy& taxonomy) {
  const fs::path pred_root = fs::path(config.out_dir) / "pointcloud";
  const std::vector<std::string> areas = sorted_subdirs(pred_root);
  if (areas.empty()) {
    throw IoError("no point clouds under " + pred_root.string() + " (run export first)");
  }
  if (config.gt_dir.empty()) throw ValidationError("gt_dir not configured");

  // Frame check: every predicted area needs ground truth.
  std::vector<std::string> missing;
  for (const std::string& area : areas) {
    if (!fs::exists(fs::path(config.gt_dir) / area / "labels.json")) {
      missing.push_back(area);
    }
  }
  if (!missing.empty()) {
    std::string msg = "areas without ground truth (mismatched frames):";
    for (const std::string& area : missing) msg += " " + area;
    throw ValidationError(msg);
  }

  std::vector<LabeledCloud> preds(areas.size());
  std::vector<GroundTruthCloud> gts(areas.size());
  parallel_for(areas.size(), config.jobs, [&](std::size_t ai) {
    preds[ai] = read_labeled_cloud((pred_root / areas[ai]).string());
    gts[ai] = read_ground_truth_cloud((fs::path(config.gt_dir) / areas[ai]).string());
  });

  std::vector<const LabeledCloud*> pred_ptrs;
  std::vector<const GroundTruthCloud*> gt_ptrs;
  for (std::size_t ai = 0; ai < areas.size(); ++ai) {
    pred_ptrs.push_back(&preds[ai]);
    gt_ptrs.push_back(&gts[ai]);
  }
  const AccuracyReport accuracy = per_point_accuracy(pred_ptrs, gt_ptrs, taxonomy);

  ordered_json j;
  j["provenance"] = provenance_json(config.config_hash);

  ordered_json acc;
  ordered_json acc_areas = ordered_json::object();
  for (const AreaAccuracy& a : accuracy.per_area) {
    ordered_json row;
    row["counted"] = a.counted;
    row["correct"] = a.correct;
    if (const auto v = a.accuracy()) {
      row["accuracy"] = *v;
    } else {
      row["accuracy"] = nullptr;
    }
    if (accuracy.total_counted > 0) {
      row["weight"] = static_cast<double>(a.counted) / accuracy.total_counted;
    }
    acc_areas[a.area_id] = row;
  }
  acc["per_area"] = acc_areas;
  ordered_json acc_classes = ordered_json::object();
  for (const auto& [cls, c] : accuracy.per_class) {
    ordered_json row;
    row["counted"] = c.counted;
    row["correct"] = c.correct;
    if (const auto v = c.accuracy()) {
      row["accuracy"] = *v;
    } else {
      row["accuracy"] = nullptr;
    }
    acc_classes[cls] = row;
  }
  acc["per_class"] = acc_classes;
  if (accuracy.overall) {
    acc["overall"] = *accuracy.overall;
  } else {
    acc["overall"] = nullptr;
  }
  j["per_point_accuracy"] = acc;

  // Spatial coverage of structural surfaces, per area.
  ordered_json coverage = ordered_json::object();
  for (std::size_t ai = 0; ai < areas.size(); ++ai) {
    ordered_json area_cov = ordered_json::object();
    for (const char* cls : {"wall", "floor", "ceiling"}) {
      const int class_id = taxonomy.id_of(cls);
      PointSet pts;
      for (std::size_t i = 0; i < preds[ai].size(); ++i) {
        if (preds[ai].semantic_id[i] == class_id) {
          pts.emplace_back(preds[ai].coords[i * 3], preds[ai].coords[i * 3 + 1],
                           preds[ai].coords[i * 3 + 2]);
        }
      }
      if (pts.empty()) continue;
      const CoverageReport rep =
          spatial_coverage(pts, cls, gts[ai], config.coverage_radius);
      ordered_json row;
      row["pred_points"] = rep.pred_points;
      row["matched"] = rep.matched;
      row["coverage"] = rep.coverage;
      row["mismatch_fraction"] = rep.mismatch_fraction;
      ordered_json top = ordered_json::array();
      for (const auto& [label, share] : rep.top_mismatch_labels) {
        top.push_back({{"label", label}, {"share", share}});
      }
      row["top_mismatch_labels"] = top;
      area_cov[cls] = row;
    }
    coverage[areas[ai]] = area_cov;
  }
  j["spatial_coverage"] = coverage;

  // Instance-level metrics over the fused dumps.
  const std::string instances_dir = (fs::path(config.out_dir) / "instances").string();
  std::vector<FusedInstance> a_instances;
  for (const std::string& area : list_instance_areas(instances_dir)) {
    std::vector<FusedInstance> loaded =
        load_instances(instances_dir, area, taxonomy, /*with_points=*/false);
    a_instances.insert(a_instances.end(), std::make_move_iterator(loaded.begin()),
                       std::make_move_iterator(loaded.end()));
  }

  const std::vector<RetentionPoint> retention =
      retention_curve(a_instances, config.retention_thresholds,
                      taxonomy.safety_classes());
  ordered_json ret = ordered_json::array();
  for (const RetentionPoint& p : retention) {
    ordered_json row;
    row["threshold"] = p.threshold;
    if (p.all_classes) {
      row["all_classes"] = *p.all_classes;
    } else {
      row["all_classes"] = nullptr;
    }
    if (p.safety_only) {
      row["safety_only"] = *p.safety_only;
    } else {
      row["safety_only"] = nullptr;
    }
    ret.push_back(row);
  }
  j["retention"] = ret;

  if (!config.instances_b_dir.empty()) {
    std::vector<FusedInstance> b_instances;
    for (const std::string& area : list_instance_areas(config.instances_b_dir)) {
      std::vector<FusedInstance> loaded = load_instances(config.instances_b_dir, area,
                                                         taxonomy, /*with_points=*/false);
      b_instances.insert(b_instances.end(), std::make_move_iterator(loaded.begin()),
                         std::make_move_iterator(loaded.end()));
    }
    const ComplementarityReport comp =
        complementarity(a_instances, b_instances, taxonomy, config.match_radius);
    ordered_json cj;
    cj["match_radius"] = comp.match_radius;
    ordered_json classes = ordered_json::object();
    for (const auto& [cls, row] : comp.per_class) {
      classes[cls] = {{"both", row.both}, {"a_only", row.a_only},
                      {"b_only", row.b_only}, {"unique", row.unique_total()}};
    }
    cj["per_class"] = classes;
    cj["unique_total"] = comp.unique_total;
    cj["both_share"] = comp.both_share;
    cj["a_only_share"] = comp.a_only_share;
    cj["b_only_share"] = comp.b_only_share;
    cj["both_share_class_mean"] = comp.both_share_class_mean;
    cj["a_only_share_class_mean"] = comp.a_only_share_class_mean;
    cj["b_only_share_class_mean"] = comp.b_only_share_class_mean;
    j["complementarity"] = cj;
  }

  // Fragmentation: explicit references win; otherwise planted truth from
  // a synthetic dataset is picked up when present.
  std::map<std::string, std::size_t> refs = config.reference_counts;
  if (refs.empty() && !config.data_root.empty()) {
    const fs::path truth_path = fs::path(config.data_root) / "truth.json";
    if (fs::exists(truth_path)) {
      std::ifstream in(truth_path);
      ordered_json truth;
      in >> truth;
      for (const ordered_json& area : truth.at("areas")) {
        for (const auto& [cls, n] : area.at("planted_per_class").items()) {
          refs[cls] += n.get<std::size_t>();
        }
      }
    }
  }
  if (!refs.empty()) {
    std::map<std::string, std::size_t> pipeline_counts;
    for (const FusedInstance& inst : a_instances) ++pipeline_counts[inst.class_name];
    ordered_json fj = ordered_json::object();
    for (const auto& [cls, ratio] : fragmentation(pipeline_counts, refs)) {
      if (ratio) {
        fj[cls] = *ratio;
      } else {
        fj[cls] = nullptr;
      }
    }
    j["fragmentation"] = fj;
  }

  write_json_file(fs::path(config.out_dir) / "eval_report.json", j);

  EvalStats stats;
  stats.areas = areas.size();
  stats.accuracy_defined = accuracy.overall.has_value();
  stats.overall_accuracy = accuracy.overall.value_or(0.0);
  return stats;
}

void run_budget(const PipelineConfig& config) {
  std::vector<PayloadSpec> payloads = config.payloads;
  if (payloads.empty()) {
    // Default grid: every exported graph document becomes a payload row.
    const fs::path graphs_dir = fs::path(config.out_dir) / "graphs";
    if (fs::exists(graphs_dir)) {
      std::vector<std::string> names;
      for (const auto& entry : fs::directory_iterator(graphs_dir)) {
        if (entry.path().extension() == ".graphml") {
          names.push_back(entry.path().filename().string());
        }
      }
      std::sort(names.begin(), names.end());
      for (const std::string& name : names) {
        payloads.push_back({name, static_cast<double>(
                                      fs::file_size(graphs_dir / name))});
      }
    }
  }
  if (payloads.empty()) {
    throw ValidationError(
        "no payloads configured and no exported graphs to measure");
  }
  ordered_json j;
  j["provenance"] = provenance_json(config.config_hash);
  j["window_seconds"] = config.budget.window_seconds;
  ordered_json budgets = ordered_json::array();
  for (double bw : config.budget.bandwidths_bps) {
    budgets.push_back(
        {{"bandwidth_bps", bw}, {"budget_bytes", config.budget.budget_bytes(bw)}});
  }
  j["budgets"] = budgets;

  ordered_json rows = ordered_json::array();
  for (const PayloadSpec& payload : payloads) {
    ordered_json row;
    row["name"] = payload.name;
    row["bytes"] = payload.bytes;
    if (config.source_bytes > 0.0) {
      row["compression_ratio"] = compression_ratio(config.source_bytes, payload.bytes);
    }
    ordered_json tiers = ordered_json::array();
    for (const WindowVerdict& v : fits_window(payload.bytes, config.budget)) {
      tiers.push_back({{"bandwidth_bps", v.bandwidth_bps},
                       {"seconds", v.seconds},
                       {"fits_window", v.fits},
                       {"margin_seconds", v.margin_seconds}});
    }
    row["tiers"] = tiers;
    rows.push_back(row);
  }
  j["payloads"] = rows;
  if (config.source_bytes > 0.0) j["source_bytes"] = config.source_bytes;
  write_json_file(fs::path(config.out_dir) / "budget_report.json", j);
}

SynthResult run_synth(const PipelineConfig& config, const Taxonomy& taxonomy) {
  return generate_synthetic_dataset(config.synth, taxonomy, config.out_dir);
}

}  // namespace insight
