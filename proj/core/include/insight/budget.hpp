#pragma once

#include <string>
#include <vector>

namespace insight {

// Decimal units throughout: MB = 1e6 bytes, GB = 1e9 bytes.
constexpr double kMegabyte = 1e6;
constexpr double kGigabyte = 1e9;

struct BudgetConfig {
  double window_seconds = 30.0;
  std::vector<double> bandwidths_bps = {1e6, 5e6, 25e6};
  /// Multiplier on transmission time; 1.0 = raw division, no protocol
  /// overhead.
  double overhead_factor = 1.0;

  /// Bytes deliverable inside the window at `bandwidth_bps`.
  double budget_bytes(double bandwidth_bps) const {
    return window_seconds * bandwidth_bps / 8.0;
  }
};

/// Seconds to move `payload_bytes` at `bandwidth_bps`: bytes * 8 / bw.
double transmit_time(double payload_bytes, double bandwidth_bps,
                     double overhead_factor = 1.0);

/// source / graph. Throws ValidationError when graph_bytes is zero.
double compression_ratio(double source_bytes, double graph_bytes);

struct WindowVerdict {
  double bandwidth_bps = 0.0;
  double seconds = 0.0;
  double margin_seconds = 0.0;  // window - seconds
  bool fits = false;            // seconds <= window (boundary inclusive)
};

/// Verdict per configured bandwidth tier.
std::vector<WindowVerdict> fits_window(double payload_bytes, const BudgetConfig& config);

}  // namespace insight
