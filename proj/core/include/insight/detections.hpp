#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "insight/geometry.hpp"
#include "insight/taxonomy.hpp"

namespace insight {

enum class Source { Sam3, Yoloe, Obj365Nano, SafetyNano, Ocr };
enum class VerifierVerdict { Unverified, Accepted, Rejected };

const char* to_string(Source s);
const char* to_string(VerifierVerdict v);
Source source_from_string(std::string_view s);
VerifierVerdict verdict_from_string(std::string_view s);

constexpr const char* kDetectionSchema = "insight-det/1";

/// One 2D detection as produced by either vision stack.
struct DetectionRecord {
  std::string image_id;
  std::string area_id;
  std::string class_name;
  Box2d box;
  std::optional<std::string> mask_path;  // relative to the data root
  double confidence = 0.0;
  Source source = Source::Sam3;
  VerifierVerdict verdict = VerifierVerdict::Unverified;
};

/// Per-source confidence gates and the dedup IoU threshold.
struct GateConfig {
  double min_confidence_sam3 = 0.30;
  double min_confidence_yoloe = 0.20;
  double min_confidence_obj365_nano = 0.30;
  double min_confidence_safety_nano = 0.30;
  double min_confidence_ocr = 0.30;
  double dedup_iou = 0.50;
  bool class_scoped_nms = true;

  double min_confidence(Source s) const;
};

struct LoadResult {
  std::vector<DetectionRecord> records;
  std::size_t rejected = 0;               // semantically invalid records
  std::vector<std::string> diagnostics;   // one line per rejection
};

/// Reads a JSONL detection file (one record per line, schema
/// "insight-det/1"). Malformed JSON aborts with a line-numbered
/// ParseError; records violating the schema contract (unknown class,
/// confidence outside [0,1], inverted box) are skipped and counted.
LoadResult load_detections(const std::string& path, const Taxonomy& taxonomy);
LoadResult load_detections_text(const std::string& text, const Taxonomy& taxonomy,
                                const std::string& origin = "<memory>");

/// Serializes records one per line; load_detections round-trips this
/// losslessly.
std::string serialize_detections(const std::vector<DetectionRecord>& records);

/// Keeps records with confidence >= per-source threshold, dropping
/// verifier-rejected records regardless of confidence. Idempotent.
std::vector<DetectionRecord> gate(const std::vector<DetectionRecord>& records,
                                  const GateConfig& config);

/// Class-scoped IoU suppression over the records of one image: within the
/// same class any pair with IoU >= threshold collapses to the record of
/// higher confidence. Output order is confidence desc, then source order,
/// then input index. Idempotent, and no surviving same-class pair overlaps
/// at or above the threshold.
std::vector<DetectionRecord> dedup_union(const std::vector<DetectionRecord>& records,
                                         const GateConfig& config);

/// Groups by image_id (ascending) and applies dedup_union per image.
std::vector<DetectionRecord> dedup_union_by_image(
    const std::vector<DetectionRecord>& records, const GateConfig& config);

struct SmallObjectStat {
  std::size_t total = 0;
  std::size_t small = 0;
  /// small / total; nullopt when the class has no records.
  std::optional<double> fraction() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(small) / static_cast<double>(total);
  }
};

/// Per-class fraction of boxes with area strictly below the threshold.
std::map<std::string, SmallObjectStat> small_object_stats(
    const std::vector<DetectionRecord>& records, double area_threshold_px2 = 1024.0);

struct OcrExclusiveStats {
  std::map<std::string, std::size_t> per_class;
  std::size_t total_ocr = 0;
  std::size_t exclusive = 0;
  double match_radius_px = 64.0;
};

/// Counts OCR records with no same-image visual (non-OCR) detection whose
/// box center lies within the radius.
OcrExclusiveStats ocr_exclusive_count(const std::vector<DetectionRecord>& records,
                                      double match_radius_px = 64.0);

}  // namespace insight
