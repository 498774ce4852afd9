#include "insight/eval.hpp"

#include <algorithm>
#include <cmath>

#include "insight/errors.hpp"

namespace insight {

namespace {

std::vector<Vec3> gt_points(const GroundTruthCloud& gt) {
  std::vector<Vec3> pts;
  pts.reserve(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    pts.emplace_back(gt.coords[i * 3 + 0], gt.coords[i * 3 + 1], gt.coords[i * 3 + 2]);
  }
  return pts;
}

}  // namespace

AreaAccuracy per_point_accuracy_area(const LabeledCloud& pred,
                                     const GroundTruthCloud& gt,
                                     const Taxonomy& taxonomy,
                                     std::map<std::string, ClassAccuracy>* per_class) {
  AreaAccuracy area;
  area.area_id = pred.area_id;
  if (pred.size() == 0) return area;

  // Pre-map the GT label table once.
  std::vector<MappedLabel> gt_mapped;
  gt_mapped.reserve(gt.labels.size());
  for (const std::string& label : gt.labels) {
    gt_mapped.push_back(taxonomy.map_source_label(label));
  }

  const std::set<int>& overlapping = taxonomy.overlapping_classes();
  const NnIndex index(gt_points(gt));

  for (std::size_t i = 0; i < pred.size(); ++i) {
    const int pred_class = pred.semantic_id[i];
    // Pipeline-only labels never enter the denominator.
    if (!overlapping.count(pred_class)) continue;
    if (index.empty()) continue;

    const Vec3 p(pred.coords[i * 3 + 0], pred.coords[i * 3 + 1], pred.coords[i * 3 + 2]);
    const NnIndex::Result nn = index.nearest(p);
    const MappedLabel& ref = gt_mapped[static_cast<std::size_t>(gt.segment[nn.index])];
    // Reference points with no pipeline equivalent leave the denominator.
    if (ref.excluded()) continue;

    ++area.counted;
    const bool correct = ref.class_id == pred_class;
    if (correct) ++area.correct;
    if (per_class) {
      ClassAccuracy& c = (*per_class)[taxonomy.class_by_id(pred_class).name];
      ++c.counted;
      if (correct) ++c.correct;
    }
  }
  return area;
}

AccuracyReport per_point_accuracy(const std::vector<const LabeledCloud*>& preds,
                                  const std::vector<const GroundTruthCloud*>& gts,
                                  const Taxonomy& taxonomy) {
  if (preds.size() != gts.size()) {
    throw ValidationError("prediction and ground-truth area lists differ in length");
  }
  AccuracyReport report;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    report.per_area.push_back(
        per_point_accuracy_area(*preds[k], *gts[k], taxonomy, &report.per_class));
    report.total_counted += report.per_area.back().counted;
  }
  if (report.total_counted > 0) {
    // Area-weighted mean, weights n_k / sum n_j.
    double overall = 0.0;
    for (const AreaAccuracy& a : report.per_area) {
      if (a.counted == 0) continue;
      const double w = static_cast<double>(a.counted) /
                       static_cast<double>(report.total_counted);
      overall += w * *a.accuracy();
    }
    report.overall = overall;
  }
  return report;
}

CoverageReport spatial_coverage(const PointSet& pred_points,
                                const std::string& pred_source_label,
                                const GroundTruthCloud& gt, double radius) {
  if (pred_points.empty()) throw ValidationError("spatial coverage of empty prediction");
  CoverageReport report;
  report.pred_points = pred_points.size();
  if (gt.size() == 0) return report;  // coverage 0

  const NnIndex index(gt_points(gt));
  const double r2 = radius * radius;
  std::map<std::string, std::size_t> mismatch_histogram;
  std::size_t mismatched = 0;
  for (const Vec3& p : pred_points) {
    const NnIndex::Result nn = index.nearest(p);
    if (nn.distance2 > r2) continue;
    ++report.matched;
    const std::string& label = gt.labels[static_cast<std::size_t>(gt.segment[nn.index])];
    if (label != pred_source_label) {
      ++mismatched;
      ++mismatch_histogram[label];
    }
  }
  report.coverage =
      static_cast<double>(report.matched) / static_cast<double>(report.pred_points);
  if (report.matched > 0) {
    report.mismatch_fraction =
        static_cast<double>(mismatched) / static_cast<double>(report.matched);
  }
  // Top-3 offending labels by share of the mismatch set.
  std::vector<std::pair<std::string, std::size_t>> rows(mismatch_histogram.begin(),
                                                        mismatch_histogram.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (std::size_t i = 0; i < rows.size() && i < 3; ++i) {
    report.top_mismatch_labels.emplace_back(
        rows[i].first, static_cast<double>(rows[i].second) / mismatched);
  }
  return report;
}

ComplementarityReport complementarity(const std::vector<FusedInstance>& a,
                                      const std::vector<FusedInstance>& b,
                                      const Taxonomy& taxonomy, double radius) {
  std::set<int> excluded;
  for (const SafetyClass& c : taxonomy.classes()) {
    if (c.is_structural_surface) excluded.insert(c.id);
  }
  excluded.insert(taxonomy.id_of("ramp"));
  return complementarity(a, b, taxonomy, radius, excluded);
}

ComplementarityReport complementarity(const std::vector<FusedInstance>& a,
                                      const std::vector<FusedInstance>& b,
                                      const Taxonomy& taxonomy, double radius,
                                      const std::set<int>& excluded_classes) {
  ComplementarityReport report;
  report.match_radius = radius;

  std::map<int, std::vector<const FusedInstance*>> a_by_class, b_by_class;
  for (const FusedInstance& inst : a) {
    if (!excluded_classes.count(inst.class_id)) a_by_class[inst.class_id].push_back(&inst);
  }
  for (const FusedInstance& inst : b) {
    if (!excluded_classes.count(inst.class_id)) b_by_class[inst.class_id].push_back(&inst);
  }

  std::set<int> class_ids;
  for (const auto& [id, _] : a_by_class) class_ids.insert(id);
  for (const auto& [id, _] : b_by_class) class_ids.insert(id);

  for (int class_id : class_ids) {
    const auto& av = a_by_class[class_id];
    const auto& bv = b_by_class[class_id];

    // All same-class pairs within the radius, matched greedily by
    // ascending distance with index tie-breaks.
    struct Pair {
      double d2;
      std::size_t ai, bi;
    };
    std::vector<Pair> pairs;
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < av.size(); ++i) {
      for (std::size_t j = 0; j < bv.size(); ++j) {
        const double d2 = (av[i]->centroid - bv[j]->centroid).squaredNorm();
        if (d2 <= r2) pairs.push_back({d2, i, j});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
      if (x.d2 != y.d2) return x.d2 < y.d2;
      if (x.ai != y.ai) return x.ai < y.ai;
      return x.bi < y.bi;
    });

    std::vector<bool> a_used(av.size(), false), b_used(bv.size(), false);
    ComplementarityClassRow row;
    for (const Pair& p : pairs) {
      if (a_used[p.ai] || b_used[p.bi]) continue;
      a_used[p.ai] = true;
      b_used[p.bi] = true;
      ++row.both;
    }
    row.a_only = av.size() - row.both;
    row.b_only = bv.size() - row.both;
    if (row.unique_total() > 0) {
      report.per_class[taxonomy.class_by_id(class_id).name] = row;
    }
  }

  std::size_t both = 0, a_only = 0, b_only = 0;
  double both_mean = 0.0, a_mean = 0.0, b_mean = 0.0;
  std::size_t classes_with_instances = 0;
  for (const auto& [_, row] : report.per_class) {
    both += row.both;
    a_only += row.a_only;
    b_only += row.b_only;
    const double total = static_cast<double>(row.unique_total());
    ++classes_with_instances;
    both_mean += row.both / total;
    a_mean += row.a_only / total;
    b_mean += row.b_only / total;
  }
  report.unique_total = both + a_only + b_only;
  if (report.unique_total > 0) {
    report.both_share = static_cast<double>(both) / report.unique_total;
    report.a_only_share = static_cast<double>(a_only) / report.unique_total;
    report.b_only_share = static_cast<double>(b_only) / report.unique_total;
  }
  if (classes_with_instances > 0) {
    report.both_share_class_mean = both_mean / classes_with_instances;
    report.a_only_share_class_mean = a_mean / classes_with_instances;
    report.b_only_share_class_mean = b_mean / classes_with_instances;
  }
  return report;
}

std::vector<RetentionPoint> retention_curve(const std::vector<FusedInstance>& instances,
                                            const std::vector<double>& thresholds,
                                            const std::set<int>& safety_classes) {
  std::size_t total = instances.size();
  std::size_t safety_total = 0;
  for (const FusedInstance& inst : instances) {
    if (safety_classes.count(inst.class_id)) ++safety_total;
  }

  std::vector<RetentionPoint> curve;
  for (double tau : thresholds) {
    RetentionPoint point;
    point.threshold = tau;
    std::size_t kept = 0, safety_kept = 0;
    for (const FusedInstance& inst : instances) {
      if (inst.confidence >= tau) {
        ++kept;
        if (safety_classes.count(inst.class_id)) ++safety_kept;
      }
    }
    if (total > 0) point.all_classes = static_cast<double>(kept) / total;
    if (safety_total > 0) {
      point.safety_only = static_cast<double>(safety_kept) / safety_total;
    }
    curve.push_back(point);
  }
  return curve;
}

}  // namespace insight
