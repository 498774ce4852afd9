#include "insight/detections.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "insight/errors.hpp"

namespace insight {

using nlohmann::ordered_json;

const char* to_string(Source s) {
  switch (s) {
    case Source::Sam3: return "sam3";
    case Source::Yoloe: return "yoloe";
    case Source::Obj365Nano: return "obj365_nano";
    case Source::SafetyNano: return "safety_nano";
    case Source::Ocr: return "ocr";
  }
  return "?";
}

const char* to_string(VerifierVerdict v) {
  switch (v) {
    case VerifierVerdict::Unverified: return "unverified";
    case VerifierVerdict::Accepted: return "accepted";
    case VerifierVerdict::Rejected: return "rejected";
  }
  return "?";
}

Source source_from_string(std::string_view s) {
  if (s == "sam3") return Source::Sam3;
  if (s == "yoloe") return Source::Yoloe;
  if (s == "obj365_nano") return Source::Obj365Nano;
  if (s == "safety_nano") return Source::SafetyNano;
  if (s == "ocr") return Source::Ocr;
  throw ValidationError("unknown detection source: " + std::string(s));
}

VerifierVerdict verdict_from_string(std::string_view s) {
  if (s == "unverified") return VerifierVerdict::Unverified;
  if (s == "accepted") return VerifierVerdict::Accepted;
  if (s == "rejected") return VerifierVerdict::Rejected;
  throw ValidationError("unknown verifier verdict: " + std::string(s));
}

double GateConfig::min_confidence(Source s) const {
  switch (s) {
    case Source::Sam3: return min_confidence_sam3;
    case Source::Yoloe: return min_confidence_yoloe;
    case Source::Obj365Nano: return min_confidence_obj365_nano;
    case Source::SafetyNano: return min_confidence_safety_nano;
    case Source::Ocr: return min_confidence_ocr;
  }
  return 0.0;
}

namespace {

// Parses one JSONL record. Returns nullopt plus a diagnostic for records
// that parse as JSON but violate the schema contract.
std::optional<DetectionRecord> parse_record(const ordered_json& j,
                                            const Taxonomy& taxonomy,
                                            std::size_t line,
                                            std::vector<std::string>& diagnostics) {
  auto reject = [&](const std::string& why) -> std::optional<DetectionRecord> {
    diagnostics.push_back("line " + std::to_string(line) + ": " + why);
    return std::nullopt;
  };

  if (j.value("schema", std::string()) != kDetectionSchema) {
    return reject("missing or unsupported schema (want insight-det/1)");
  }

  DetectionRecord rec;
  try {
    rec.image_id = j.at("image_id").get<std::string>();
    rec.area_id = j.at("area_id").get<std::string>();
    rec.class_name = j.at("class").get<std::string>();
    const auto& box = j.at("box2d");
    if (!box.is_array() || box.size() != 4) return reject("box2d must be [x0,y0,x1,y1]");
    rec.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
               box[3].get<double>()};
    if (j.contains("mask") && !j.at("mask").is_null()) {
      rec.mask_path = j.at("mask").get<std::string>();
    }
    rec.confidence = j.at("confidence").get<double>();
    rec.source = source_from_string(j.at("source").get<std::string>());
    rec.verdict = verdict_from_string(j.value("verifier_verdict", "unverified"));
  } catch (const ordered_json::exception& e) {
    return reject(std::string("schema violation: ") + e.what());
  } catch (const ValidationError& e) {
    return reject(e.what());
  }

  if (!taxonomy.find(rec.class_name)) {
    return reject("unknown class token: " + rec.class_name);
  }
  if (!(rec.confidence >= 0.0 && rec.confidence <= 1.0)) {
    return reject("confidence outside [0,1]: " + std::to_string(rec.confidence));
  }
  if (!rec.box.valid()) return reject("degenerate box (x_min<x_max, y_min<y_max required)");
  return rec;
}

}  // namespace

LoadResult load_detections_text(const std::string& text, const Taxonomy& taxonomy,
                                const std::string& origin) {
  LoadResult result;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      throw ParseError(ParseErrorKind::BadSyntax,
                       origin + ": malformed JSON: " + e.what(), line_no);
    }
    if (auto rec = parse_record(j, taxonomy, line_no, result.diagnostics)) {
      result.records.push_back(std::move(*rec));
    } else {
      ++result.rejected;
    }
  }
  return result;
}

LoadResult load_detections(const std::string& path, const Taxonomy& taxonomy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open detections file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_detections_text(ss.str(), taxonomy, path);
}

std::string serialize_detections(const std::vector<DetectionRecord>& records) {
  std::string out;
  for (const DetectionRecord& rec : records) {
    ordered_json j;
    j["schema"] = kDetectionSchema;
    j["image_id"] = rec.image_id;
    j["area_id"] = rec.area_id;
    j["class"] = rec.class_name;
    j["box2d"] = {rec.box.x_min, rec.box.y_min, rec.box.x_max, rec.box.y_max};
    if (rec.mask_path) {
      j["mask"] = *rec.mask_path;
    } else {
      j["mask"] = nullptr;
    }
    j["confidence"] = rec.confidence;
    j["source"] = to_string(rec.source);
    j["verifier_verdict"] = to_string(rec.verdict);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<DetectionRecord> gate(const std::vector<DetectionRecord>& records,
                                  const GateConfig& config) {
  std::vector<DetectionRecord> kept;
  kept.reserve(records.size());
  for (const DetectionRecord& rec : records) {
    if (rec.verdict == VerifierVerdict::Rejected) continue;
    if (rec.confidence < config.min_confidence(rec.source)) continue;
    kept.push_back(rec);
  }
  return kept;
}

namespace {

// Deterministic suppression order: confidence desc, then source enum
// order, then input index.
std::vector<std::size_t> suppression_order(const std::vector<DetectionRecord>& records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (records[a].confidence != records[b].confidence) {
      return records[a].confidence > records[b].confidence;
    }
    if (records[a].source != records[b].source) {
      return static_cast<int>(records[a].source) < static_cast<int>(records[b].source);
    }
    return a < b;
  });
  return order;
}

}  // namespace

std::vector<DetectionRecord> dedup_union(const std::vector<DetectionRecord>& records,
                                         const GateConfig& config) {
  const std::vector<std::size_t> order = suppression_order(records);
  std::vector<DetectionRecord> kept;
  kept.reserve(records.size());
  for (std::size_t idx : order) {
    const DetectionRecord& cand = records[idx];
    bool absorbed = false;
    for (const DetectionRecord& keeper : kept) {
      if (config.class_scoped_nms && keeper.class_name != cand.class_name) continue;
      if (iou(keeper.box, cand.box) >= config.dedup_iou) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) kept.push_back(cand);
  }
  return kept;
}

std::vector<DetectionRecord> dedup_union_by_image(
    const std::vector<DetectionRecord>& records, const GateConfig& config) {
  std::map<std::string, std::vector<DetectionRecord>> by_image;
  for (const DetectionRecord& rec : records) by_image[rec.image_id].push_back(rec);
  std::vector<DetectionRecord> out;
  out.reserve(records.size());
  for (auto& [_, group] : by_image) {
    std::vector<DetectionRecord> deduped = dedup_union(group, config);
    out.insert(out.end(), std::make_move_iterator(deduped.begin()),
               std::make_move_iterator(deduped.end()));
  }
  return out;
}

std::map<std::string, SmallObjectStat> small_object_stats(
    const std::vector<DetectionRecord>& records, double area_threshold_px2) {
  std::map<std::string, SmallObjectStat> stats;
  for (const DetectionRecord& rec : records) {
    SmallObjectStat& s = stats[rec.class_name];
    ++s.total;
    if (rec.box.area() < area_threshold_px2) ++s.small;
  }
  return stats;
}

OcrExclusiveStats ocr_exclusive_count(const std::vector<DetectionRecord>& records,
                                      double match_radius_px) {
  OcrExclusiveStats stats;
  stats.match_radius_px = match_radius_px;
  const double r2 = match_radius_px * match_radius_px;
  for (const DetectionRecord& ocr : records) {
    if (ocr.source != Source::Ocr) continue;
    ++stats.total_ocr;
    bool covered = false;
    for (const DetectionRecord& vis : records) {
      if (vis.source == Source::Ocr) continue;
      if (vis.image_id != ocr.image_id) continue;
      const double dx = vis.box.center_x() - ocr.box.center_x();
      const double dy = vis.box.center_y() - ocr.box.center_y();
      if (dx * dx + dy * dy <= r2) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      ++stats.exclusive;
      ++stats.per_class[ocr.class_name];
    }
  }
  return stats;
}

}  // namespace insight
