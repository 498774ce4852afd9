#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "insight/fusion.hpp"
#include "insight/nn_index.hpp"
#include "insight/point_cloud.hpp"
#include "insight/taxonomy.hpp"

namespace insight {

struct AreaAccuracy {
  std::string area_id;
  std::size_t counted = 0;  // points in the denominator
  std::size_t correct = 0;
  std::optional<double> accuracy() const {
    if (counted == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(counted);
  }
};

struct ClassAccuracy {
  std::size_t counted = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy() const {
    if (counted == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(counted);
  }
};

struct AccuracyReport {
  std::vector<AreaAccuracy> per_area;       // in input area order
  std::map<std::string, ClassAccuracy> per_class;
  /// Area-weighted overall accuracy: sum_k w_k a_k with w_k = n_k / sum n.
  std::optional<double> overall;
  std::size_t total_counted = 0;
};

/// Per-point accuracy over the overlapping classes of one area. For each
/// prediction point whose label is overlapping: the nearest ground-truth
/// point supplies the reference label via map_source_label; reference
/// points mapping to Excluded leave the denominator; otherwise the point
/// is correct iff the mapped ids agree. Points carrying novel (pipeline-
/// only) labels are never counted.
AreaAccuracy per_point_accuracy_area(const LabeledCloud& pred,
                                     const GroundTruthCloud& gt,
                                     const Taxonomy& taxonomy,
                                     std::map<std::string, ClassAccuracy>* per_class = nullptr);

/// Aggregates areas into the weighted report; pairs are matched by list
/// position.
AccuracyReport per_point_accuracy(const std::vector<const LabeledCloud*>& preds,
                                  const std::vector<const GroundTruthCloud*>& gts,
                                  const Taxonomy& taxonomy);

struct CoverageReport {
  std::size_t pred_points = 0;
  std::size_t matched = 0;  // nearest GT within radius
  double coverage = 0.0;    // matched / pred_points (0 when no GT)
  /// Among matched neighbors whose GT label differs from the queried
  /// class: share of mismatches, and the top-3 offending labels with
  /// their share of the mismatch set.
  double mismatch_fraction = 0.0;
  std::vector<std::pair<std::string, double>> top_mismatch_labels;
};

/// Fraction of prediction points of one class lying within `radius` of
/// any ground-truth point, plus the boundary-label diagnostic.
CoverageReport spatial_coverage(const PointSet& pred_points,
                                const std::string& pred_source_label,
                                const GroundTruthCloud& gt, double radius = 0.1);

struct ComplementarityClassRow {
  std::size_t both = 0;
  std::size_t a_only = 0;
  std::size_t b_only = 0;
  std::size_t unique_total() const { return both + a_only + b_only; }
};

struct ComplementarityReport {
  std::map<std::string, ComplementarityClassRow> per_class;
  double match_radius = 1.0;
  /// Instance-weighted shares over all matched classes.
  double both_share = 0.0;
  double a_only_share = 0.0;
  double b_only_share = 0.0;
  std::size_t unique_total = 0;
  /// Per-class averaged shares (classes with at least one instance).
  double both_share_class_mean = 0.0;
  double a_only_share_class_mean = 0.0;
  double b_only_share_class_mean = 0.0;
};

/// One-to-one greedy matching by ascending centroid distance among
/// same-class pairs within the radius. Structural surfaces and ramps are
/// excluded by default (single-instance-per-area centroids are coverage
/// artifacts, not object locations).
ComplementarityReport complementarity(const std::vector<FusedInstance>& a,
                                      const std::vector<FusedInstance>& b,
                                      const Taxonomy& taxonomy, double radius = 1.0);
ComplementarityReport complementarity(const std::vector<FusedInstance>& a,
                                      const std::vector<FusedInstance>& b,
                                      const Taxonomy& taxonomy, double radius,
                                      const std::set<int>& excluded_classes);

struct RetentionPoint {
  double threshold = 0.0;
  std::optional<double> all_classes;   // retained fraction
  std::optional<double> safety_only;
};

/// Instance retention vs confidence threshold, for all classes and for
/// the safety-critical subset. Monotone non-increasing in the threshold.
std::vector<RetentionPoint> retention_curve(const std::vector<FusedInstance>& instances,
                                            const std::vector<double>& thresholds,
                                            const std::set<int>& safety_classes);

}  // namespace insight
