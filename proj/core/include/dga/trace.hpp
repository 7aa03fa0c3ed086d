#pragma once

#include <limits>
#include <ostream>
#include <vector>

namespace dga {

/// One per-round metric record. dist_sq and delta_h_omega_sq are only
/// meaningful when a reference solution / metric was supplied; they stay
/// NaN (and serialize as empty CSV cells) otherwise.
struct TraceRow {
  long round = 0;
  double feas_sq = 0.0;
  double opt_sq = 0.0;        // ||x^{k+1} - x^k||^2
  double consensus_sq = 0.0;  // y^T W y
  double dist_sq = std::numeric_limits<double>::quiet_NaN();
  double delta_h_omega_sq = std::numeric_limits<double>::quiet_NaN();
  double wall_time_s = 0.0;   // compute phases only
};

struct IterationTrace {
  std::vector<TraceRow> rows;

  long rounds() const { return static_cast<long>(rows.size()) - 1; }
  const TraceRow& back() const { return rows.back(); }
};

/// CSV with the fixed header
/// round,feas_sq,opt_sq,consensus_sq,dist_sq,delta_h_omega_sq,wall_time_s
void write_csv(const IterationTrace& trace, std::ostream& out);

}  // namespace dga
