#include "dga/trace.hpp"

#include <cmath>
#include <cstdio>

namespace dga {

namespace {
void put(std::ostream& out, double v) {
  if (std::isnan(v)) return;  // empty cell
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}
}  // namespace

void write_csv(const IterationTrace& trace, std::ostream& out) {
  out << "round,feas_sq,opt_sq,consensus_sq,dist_sq,delta_h_omega_sq,wall_time_s\n";
  for (const auto& r : trace.rows) {
    out << r.round << ',';
    put(out, r.feas_sq);
    out << ',';
    put(out, r.opt_sq);
    out << ',';
    put(out, r.consensus_sq);
    out << ',';
    put(out, r.dist_sq);
    out << ',';
    put(out, r.delta_h_omega_sq);
    out << ',';
    put(out, r.wall_time_s);
    out << '\n';
  }
}

}  // namespace dga
