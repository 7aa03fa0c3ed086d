#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dga/graph.hpp"

namespace dga {

/// Message store of one exchange round. Payloads are copies; the mailbox
/// never aliases agent state, so post-round mutation cannot leak through
/// it. deposit() accepts anything so that audits can catch bad traffic.
class RoundMailbox {
public:
  struct Entry {
    int from = 0;
    int to = 0;
    Vec payload;
  };

  void reserve(std::size_t count) { entries_.reserve(count); }
  void deposit(int from, int to, Vec payload) {
    entries_.push_back({from, to, std::move(payload)});
  }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t message_count() const { return entries_.size(); }
  std::size_t scalar_volume() const;

  /// Payload of the (from -> to) message; nullptr if absent. Linear scan --
  /// audit/test use only, the solver hot path iterates entries() directly.
  const Vec* message(int from, int to) const;

private:
  std::vector<Entry> entries_;
};

/// Delivers y_i along every edge in both directions and computes
/// t_i = sum_{j in N_i} p_ij (y_i - y_j) strictly from mailbox contents.
std::pair<RoundMailbox, Vec> exchange(const NetworkGraph& g, const Vec& y, int m);

struct StopCriteria {
  long max_rounds = 100000;
  double feasibility_tol = 1e-8;
  double step_tol = 1e-8;  // applied to ||x^{k+1}-x^k|| / alpha
};

struct LocalityViolation {
  long round = 0;
  int from = -1;
  int to = -1;
  std::string what;
};

struct LocalityReport {
  bool ok = true;
  std::vector<LocalityViolation> violations;
  std::size_t messages_per_round = 0;
};

/// Checks that every message travels along a graph edge and carries exactly
/// an m-vector (the dual copy y_i) -- nothing else may cross agent
/// boundaries.
LocalityReport audit_mailbox(const NetworkGraph& g, const RoundMailbox& mailbox,
                             int m, long round = 0);

}  // namespace dga
