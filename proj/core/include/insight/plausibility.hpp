#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "insight/fusion.hpp"
#include "insight/taxonomy.hpp"

namespace insight {

struct PlausibilityConfig {
  double tau = 0.70;  // confidence gate
};

/// Confidence gate followed by the per-(subarea, class) top-K cap. Per
/// group, instances below tau drop, the rest sort by confidence desc then
/// instance_id asc, and the first K survive; classes without a cap pass
/// only the gate. Output is a subset of the input and the pass is
/// idempotent.
std::vector<FusedInstance> plausibility_apply(const std::vector<FusedInstance>& instances,
                                              const PlausibilityConfig& config,
                                              const Taxonomy& taxonomy);

struct ReductionRow {
  std::size_t raw = 0;
  std::size_t filtered = 0;
  /// 1 - filtered/raw; nullopt when raw is zero.
  std::optional<double> reduction() const {
    if (raw == 0) return std::nullopt;
    return 1.0 - static_cast<double>(filtered) / static_cast<double>(raw);
  }
};

struct ReductionReport {
  std::map<std::string, ReductionRow> per_class;
  ReductionRow overall;
};

ReductionReport plausibility_report(const std::vector<FusedInstance>& raw,
                                    const std::vector<FusedInstance>& filtered);

}  // namespace insight
