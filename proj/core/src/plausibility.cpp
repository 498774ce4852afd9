#include "insight/plausibility.hpp"

#include <algorithm>

#include "insight/errors.hpp"

namespace insight {

std::vector<FusedInstance> plausibility_apply(const std::vector<FusedInstance>& instances,
                                              const PlausibilityConfig& config,
                                              const Taxonomy& taxonomy) {
  if (!(config.tau >= 0.0 && config.tau <= 1.0)) {
    throw ValidationError("tau must lie in [0,1]");
  }

  // Group survivors of the confidence gate by (subarea, class).
  std::map<std::pair<std::string, int>, std::vector<const FusedInstance*>> groups;
  for (const FusedInstance& inst : instances) {
    if (inst.confidence < config.tau) continue;
    groups[{inst.area_id, inst.class_id}].push_back(&inst);
  }

  std::vector<FusedInstance> out;
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const FusedInstance* a, const FusedInstance* b) {
                if (a->confidence != b->confidence) return a->confidence > b->confidence;
                return a->instance_id < b->instance_id;
              });
    const std::optional<int> cap = taxonomy.per_subarea_cap(key.second);
    const std::size_t keep =
        cap ? std::min(group.size(), static_cast<std::size_t>(*cap)) : group.size();
    for (std::size_t i = 0; i < keep; ++i) out.push_back(*group[i]);
  }
  return out;
}

ReductionReport plausibility_report(const std::vector<FusedInstance>& raw,
                                    const std::vector<FusedInstance>& filtered) {
  ReductionReport report;
  for (const FusedInstance& inst : raw) {
    ++report.per_class[inst.class_name].raw;
    ++report.overall.raw;
  }
  for (const FusedInstance& inst : filtered) {
    ++report.per_class[inst.class_name].filtered;
    ++report.overall.filtered;
  }
  return report;
}

}  // namespace insight
