#include "insight/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "insight/errors.hpp"

namespace insight {

using nlohmann::json;

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

GateConfig parse_gate(const json& j) {
  GateConfig gate;
  if (j.contains("min_confidence")) {
    const json& mc = j.at("min_confidence");
    gate.min_confidence_sam3 = mc.value("sam3", gate.min_confidence_sam3);
    gate.min_confidence_yoloe = mc.value("yoloe", gate.min_confidence_yoloe);
    gate.min_confidence_obj365_nano =
        mc.value("obj365_nano", gate.min_confidence_obj365_nano);
    gate.min_confidence_safety_nano =
        mc.value("safety_nano", gate.min_confidence_safety_nano);
    gate.min_confidence_ocr = mc.value("ocr", gate.min_confidence_ocr);
  }
  gate.dedup_iou = j.value("dedup_iou", gate.dedup_iou);
  gate.class_scoped_nms = j.value("class_scoped_nms", gate.class_scoped_nms);
  for (double t : {gate.min_confidence_sam3, gate.min_confidence_yoloe,
                   gate.min_confidence_obj365_nano, gate.min_confidence_safety_nano,
                   gate.min_confidence_ocr, gate.dedup_iou}) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw ValidationError("gate thresholds must lie in [0,1]");
    }
  }
  return gate;
}

FloorModel parse_floors(const json& j) {
  const std::string type = j.value("type", "single");
  if (type == "single") return FloorModel::single_floor();
  if (type == "elevations") {
    return FloorModel::from_elevations(j.at("bases").get<std::vector<double>>());
  }
  throw ValidationError("floor_model.type must be 'single' or 'elevations'");
}

SynthSpec parse_synth(const json& j) {
  SynthSpec spec;
  spec.seed = j.value("seed", spec.seed);
  spec.views_per_fixture = j.value("views_per_fixture", spec.views_per_fixture);
  spec.points_per_view = j.value("points_per_view", spec.points_per_view);
  spec.fixture_size = j.value("fixture_size", spec.fixture_size);
  spec.view_offset = j.value("view_offset", spec.view_offset);
  spec.centroid_noise = j.value("centroid_noise", spec.centroid_noise);
  spec.min_confidence = j.value("min_confidence", spec.min_confidence);
  spec.max_confidence = j.value("max_confidence", spec.max_confidence);
  spec.false_positives = j.value("false_positives", spec.false_positives);
  spec.raster_width = j.value("raster_width", spec.raster_width);
  spec.raster_height = j.value("raster_height", spec.raster_height);
  spec.min_separation = j.value("min_separation", spec.min_separation);
  spec.emit_cv_stack = j.value("emit_cv_stack", spec.emit_cv_stack);
  spec.cv_offset = j.value("cv_offset", spec.cv_offset);
  if (j.contains("areas")) {
    spec.areas.clear();
    for (const json& aj : j.at("areas")) {
      SynthAreaSpec area;
      area.area_id = aj.value("area_id", area.area_id);
      if (aj.contains("room_size")) {
        const auto size = aj.at("room_size").get<std::vector<double>>();
        if (size.size() != 3) throw ValidationError("room_size must be [x,y,z]");
        area.room_size = Vec3(size[0], size[1], size[2]);
      }
      area.structural_surfaces = aj.value("structural_surfaces", true);
      if (aj.contains("fixtures")) {
        for (const json& fj : aj.at("fixtures")) {
          area.fixtures.push_back(
              {fj.at("class").get<std::string>(), fj.at("count").get<std::size_t>()});
        }
      }
      spec.areas.push_back(std::move(area));
    }
  }
  return spec;
}

}  // namespace

SynthSpec default_synth_spec() {
  SynthSpec spec;
  SynthAreaSpec area;
  area.area_id = "synth_a";
  area.fixtures = {{"door", 3},   {"window", 2},           {"furniture", 2},
                   {"column", 1}, {"fire_extinguisher", 2}, {"exit_sign", 2},
                   {"aed", 1}};
  spec.areas.push_back(area);
  spec.false_positives = 5;
  return spec;
}

PipelineConfig pipeline_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrorKind::BadSyntax, std::string("config: ") + e.what());
  }

  PipelineConfig cfg;
  cfg.synth = default_synth_spec();

  if (j.contains("detections")) {
    cfg.detection_files = j.at("detections").get<std::vector<std::string>>();
  }
  cfg.data_root = j.value("data_root", cfg.data_root);
  cfg.rasters_dir = j.value("rasters_dir", cfg.rasters_dir);
  cfg.gt_dir = j.value("gt_dir", cfg.gt_dir);
  cfg.out_dir = j.value("out", cfg.out_dir);

  if (j.contains("gate")) cfg.gate = parse_gate(j.at("gate"));
  if (j.contains("fusion")) {
    cfg.fusion.d_merge = j.at("fusion").value("d_merge", cfg.fusion.d_merge);
    if (!(cfg.fusion.d_merge > 0.0)) throw ValidationError("d_merge must be positive");
  }
  if (j.contains("plausibility")) {
    const json& p = j.at("plausibility");
    cfg.plausibility.tau = p.value("tau", cfg.plausibility.tau);
    cfg.plausibility_enabled = p.value("enabled", cfg.plausibility_enabled);
    if (!(cfg.plausibility.tau >= 0.0 && cfg.plausibility.tau <= 1.0)) {
      throw ValidationError("tau must lie in [0,1]");
    }
  }
  if (j.contains("role")) cfg.role = role_from_string(j.at("role").get<std::string>());
  if (j.contains("floor_model")) cfg.floors = parse_floors(j.at("floor_model"));

  if (j.contains("eval")) {
    const json& e = j.at("eval");
    cfg.coverage_radius = e.value("coverage_radius", cfg.coverage_radius);
    cfg.match_radius = e.value("match_radius", cfg.match_radius);
    cfg.ocr_radius_px = e.value("ocr_radius_px", cfg.ocr_radius_px);
    if (e.contains("retention_thresholds")) {
      cfg.retention_thresholds = e.at("retention_thresholds").get<std::vector<double>>();
    }
    if (e.contains("reference_counts")) {
      for (const auto& [cls, n] : e.at("reference_counts").items()) {
        cfg.reference_counts[cls] = n.get<std::size_t>();
      }
    }
    cfg.instances_b_dir = e.value("instances_b", cfg.instances_b_dir);
  }

  if (j.contains("budget")) {
    const json& b = j.at("budget");
    cfg.budget.window_seconds = b.value("window_seconds", cfg.budget.window_seconds);
    if (b.contains("bandwidths_bps")) {
      cfg.budget.bandwidths_bps = b.at("bandwidths_bps").get<std::vector<double>>();
    }
    cfg.budget.overhead_factor = b.value("overhead_factor", cfg.budget.overhead_factor);
    if (b.contains("payloads")) {
      for (const json& pj : b.at("payloads")) {
        cfg.payloads.push_back(
            {pj.at("name").get<std::string>(), pj.at("bytes").get<double>()});
      }
    }
    cfg.source_bytes = b.value("source_bytes", cfg.source_bytes);
    if (!(cfg.budget.window_seconds > 0.0)) {
      throw ValidationError("budget window must be positive");
    }
    for (double bw : cfg.budget.bandwidths_bps) {
      if (!(bw > 0.0)) throw ValidationError("bandwidths must be positive");
    }
  }

  if (j.contains("synth")) cfg.synth = parse_synth(j.at("synth"));
  cfg.taxonomy_config = j.value("taxonomy", cfg.taxonomy_config);
  cfg.jobs = j.value("jobs", cfg.jobs);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.synth.seed = j.contains("synth") && j.at("synth").contains("seed")
                       ? cfg.synth.seed
                       : cfg.seed;

  finalize_config(cfg);
  return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return pipeline_config_from_json_text(ss.str());
}

void finalize_config(PipelineConfig& cfg) {
  if (cfg.rasters_dir.empty() && !cfg.data_root.empty()) {
    cfg.rasters_dir = cfg.data_root + "/rasters";
  }
  if (cfg.jobs < 1) cfg.jobs = 1;

  // Hash the fields that influence outputs; timestamps never enter.
  std::ostringstream ss;
  ss << cfg.data_root << '|' << cfg.gt_dir << '|';
  for (const std::string& f : cfg.detection_files) ss << f << ',';
  ss << '|' << cfg.gate.min_confidence_sam3 << ',' << cfg.gate.min_confidence_yoloe
     << ',' << cfg.gate.min_confidence_obj365_nano << ','
     << cfg.gate.min_confidence_safety_nano << ',' << cfg.gate.min_confidence_ocr
     << ',' << cfg.gate.dedup_iou << ',' << cfg.gate.class_scoped_nms;
  ss << '|' << cfg.fusion.d_merge << '|' << cfg.plausibility.tau << ','
     << cfg.plausibility_enabled;
  ss << '|' << to_string(cfg.role) << '|';
  for (double b : cfg.floors.bases) ss << b << ',';
  ss << '|' << cfg.coverage_radius << ',' << cfg.match_radius << ',' << cfg.ocr_radius_px;
  for (double t : cfg.retention_thresholds) ss << ',' << t;
  ss << '|' << cfg.budget.window_seconds << ',' << cfg.budget.overhead_factor;
  for (double b : cfg.budget.bandwidths_bps) ss << ',' << b;
  for (const PayloadSpec& p : cfg.payloads) ss << '|' << p.name << ':' << p.bytes;
  ss << '|' << cfg.source_bytes << '|' << cfg.seed;

  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(ss.str())));
  cfg.config_hash = buf;
}

}  // namespace insight
