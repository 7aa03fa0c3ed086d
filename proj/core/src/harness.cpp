#include "dga/harness.hpp"

#include <sstream>

namespace dga {

std::size_t RoundMailbox::scalar_volume() const {
  std::size_t v = 0;
  for (const auto& e : entries_) v += static_cast<std::size_t>(e.payload.size());
  return v;
}

const Vec* RoundMailbox::message(int from, int to) const {
  for (const auto& e : entries_)
    if (e.from == from && e.to == to) return &e.payload;
  return nullptr;
}

std::pair<RoundMailbox, Vec> exchange(const NetworkGraph& g, const Vec& y, int m) {
  const int n = g.size();
  if (y.size() != static_cast<Eigen::Index>(n) * m)
    throw std::invalid_argument("exchange: y must hold n blocks of size m");

  RoundMailbox mailbox;
  mailbox.reserve(2 * g.edges().size());
  for (const auto& e : g.edges()) {
    mailbox.deposit(e.i, e.j, y.segment(static_cast<Eigen::Index>(e.i) * m, m));
    mailbox.deposit(e.j, e.i, y.segment(static_cast<Eigen::Index>(e.j) * m, m));
  }

  // Each delivered message contributes w * (y_receiver - payload) to the
  // receiver's aggregate; only mailbox payloads cross agent boundaries.
  Vec t = Vec::Zero(y.size());
  for (const auto& e : mailbox.entries()) {
    double w = 0.0;
    for (const auto& [j, wj] : g.neighbors(e.to))
      if (j == e.from) {
        w = wj;
        break;
      }
    t.segment(static_cast<Eigen::Index>(e.to) * m, m) +=
        w * (y.segment(static_cast<Eigen::Index>(e.to) * m, m) - e.payload);
  }
  return {std::move(mailbox), std::move(t)};
}

LocalityReport audit_mailbox(const NetworkGraph& g, const RoundMailbox& mailbox,
                             int m, long round) {
  LocalityReport report;
  report.messages_per_round = mailbox.message_count();
  for (const auto& e : mailbox.entries()) {
    if (e.from < 0 || e.from >= g.size() || e.to < 0 || e.to >= g.size() ||
        !g.adjacent(e.from, e.to)) {
      report.violations.push_back(
          {round, e.from, e.to, "message does not travel along a graph edge"});
      continue;
    }
    if (e.payload.size() != m) {
      std::ostringstream what;
      what << "payload has dimension " << e.payload.size() << ", expected the "
           << m << "-dimensional dual copy y_i";
      report.violations.push_back({round, e.from, e.to, what.str()});
    }
  }
  std::size_t expected = 2 * g.edges().size();
  if (report.messages_per_round != expected) {
    std::ostringstream what;
    what << "round carried " << report.messages_per_round << " messages, expected "
         << expected;
    report.violations.push_back({round, -1, -1, what.str()});
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace dga
