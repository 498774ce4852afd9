#include "insight/budget.hpp"

#include "insight/errors.hpp"

namespace insight {

double transmit_time(double payload_bytes, double bandwidth_bps, double overhead_factor) {
  if (!(bandwidth_bps > 0.0)) throw ValidationError("bandwidth must be positive");
  return payload_bytes * 8.0 / bandwidth_bps * overhead_factor;
}

double compression_ratio(double source_bytes, double graph_bytes) {
  if (!(graph_bytes > 0.0)) throw ValidationError("graph size must be positive");
  return source_bytes / graph_bytes;
}

std::vector<WindowVerdict> fits_window(double payload_bytes, const BudgetConfig& config) {
  std::vector<WindowVerdict> verdicts;
  for (double bw : config.bandwidths_bps) {
    WindowVerdict v;
    v.bandwidth_bps = bw;
    v.seconds = transmit_time(payload_bytes, bw, config.overhead_factor);
    v.margin_seconds = config.window_seconds - v.seconds;
    v.fits = v.seconds <= config.window_seconds;
    verdicts.push_back(v);
  }
  return verdicts;
}

}  // namespace insight
