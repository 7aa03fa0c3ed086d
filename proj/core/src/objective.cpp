#include "dga/objective.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dga {

namespace {
constexpr double kExpClamp = 700.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

double checked_exp(double arg) {
  if (arg > kExpClamp) {
    std::ostringstream msg;
    msg << "QuadExp: exponent " << arg << " exceeds the overflow clamp " << kExpClamp;
    throw domain_overflow_error(msg.str());
  }
  return std::exp(arg);
}

double saturated_exp(double arg) { return std::exp(std::min(arg, kExpClamp)); }
}  // namespace

SeparableObjective::SeparableObjective(Quadratic q) : v_(std::move(q)) {
  const auto& quad = std::get<Quadratic>(v_);
  if (quad.a.size() != quad.b.size())
    throw std::invalid_argument("Quadratic: a and b must have equal dimension");
  if ((quad.a.array() < 0.0).any())
    throw std::invalid_argument("Quadratic: curvature coefficients must be >= 0");
  dim_ = static_cast<int>(quad.a.size());
}

SeparableObjective::SeparableObjective(QuadExp q) : v_(std::move(q)) {
  const auto& qe = std::get<QuadExp>(v_);
  if (qe.a.size() != qe.b.size() || qe.a.size() != qe.delta.size() ||
      qe.a.size() != qe.ell.size())
    throw std::invalid_argument("QuadExp: coefficient vectors must have equal dimension");
  if ((qe.a.array() < 0.0).any() || (qe.delta.array() < 0.0).any() ||
      (qe.ell.array() < 0.0).any())
    throw std::invalid_argument("QuadExp: a, delta, ell must be >= 0");
  dim_ = static_cast<int>(qe.a.size());
}

SeparableObjective::SeparableObjective(CustomObjective c) : v_(std::move(c)) {
  const auto& cu = std::get<CustomObjective>(v_);
  if (cu.dim <= 0 || !cu.value || !cu.gradient)
    throw std::invalid_argument("CustomObjective: dim, value and gradient are required");
  if (cu.l_f < cu.mu || cu.mu < 0.0)
    throw std::invalid_argument("CustomObjective: need l_f >= mu >= 0");
  dim_ = cu.dim;
}

double SeparableObjective::value(const Vec& u) const {
  if (u.size() != dim_) throw std::invalid_argument("objective: dimension mismatch");
  if (const auto* q = std::get_if<Quadratic>(&v_))
    return (q->a.array() * u.array().square() + q->b.array() * u.array()).sum();
  if (const auto* q = std::get_if<QuadExp>(&v_)) {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j)
      s += q->a(j) * u(j) * u(j) + q->b(j) * u(j) +
           q->delta(j) * checked_exp(q->ell(j) * u(j));
    return s;
  }
  return std::get<CustomObjective>(v_).value(u);
}

Vec SeparableObjective::gradient(const Vec& u) const {
  if (u.size() != dim_) throw std::invalid_argument("objective: dimension mismatch");
  if (const auto* q = std::get_if<Quadratic>(&v_))
    return 2.0 * q->a.array() * u.array() + q->b.array();
  if (const auto* q = std::get_if<QuadExp>(&v_)) {
    Vec g(dim_);
    for (int j = 0; j < dim_; ++j)
      g(j) = 2.0 * q->a(j) * u(j) + q->b(j) +
             q->delta(j) * q->ell(j) * checked_exp(q->ell(j) * u(j));
    return g;
  }
  return std::get<CustomObjective>(v_).gradient(u);
}

double SeparableObjective::coord_derivative(int j, double u) const {
  if (const auto* q = std::get_if<Quadratic>(&v_))
    return 2.0 * q->a(j) * u + q->b(j);
  if (const auto* q = std::get_if<QuadExp>(&v_))
    return 2.0 * q->a(j) * u + q->b(j) +
           q->delta(j) * q->ell(j) * saturated_exp(q->ell(j) * u);
  throw std::logic_error("coord_derivative: not available for custom objectives");
}

bool SeparableObjective::separable_per_coordinate() const {
  return !std::holds_alternative<CustomObjective>(v_);
}

std::pair<double, double> SeparableObjective::smoothness_on(const Vec& lo,
                                                            const Vec& hi) const {
  if (const auto* c = std::get_if<CustomObjective>(&v_)) return {c->l_f, c->mu};
  double l_f = 0.0;
  double mu = kInf;
  if (const auto* q = std::get_if<Quadratic>(&v_)) {
    for (int j = 0; j < dim_; ++j) {
      l_f = std::max(l_f, 2.0 * q->a(j));
      mu = std::min(mu, 2.0 * q->a(j));
    }
    return {l_f, mu};
  }
  const auto& q = std::get<QuadExp>(v_);
  for (int j = 0; j < dim_; ++j) {
    double curv_hi = 2.0 * q.a(j);
    double curv_lo = 2.0 * q.a(j);
    if (q.delta(j) > 0.0 && q.ell(j) > 0.0) {
      if (!std::isfinite(hi(j)))
        throw std::invalid_argument(
            "smoothness_on: QuadExp with ell > 0 needs a finite upper bound to "
            "certify l_f; declare one");
      curv_hi += q.delta(j) * q.ell(j) * q.ell(j) * checked_exp(q.ell(j) * hi(j));
      curv_lo += q.delta(j) * q.ell(j) * q.ell(j) *
                 (std::isfinite(lo(j)) ? std::exp(q.ell(j) * lo(j)) : 0.0);
    }
    l_f = std::max(l_f, curv_hi);
    mu = std::min(mu, curv_lo);
  }
  return {l_f, mu};
}

FeasibleSet::FeasibleSet(Kind k, int dim, Vec lo, Vec hi)
    : kind_(k), dim_(dim), lo_(std::move(lo)), hi_(std::move(hi)) {}

FeasibleSet FeasibleSet::full_space(int dim) {
  return FeasibleSet(Kind::full_space, dim, Vec::Constant(dim, -kInf),
                     Vec::Constant(dim, kInf));
}

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size())
    throw std::invalid_argument("FeasibleSet::box: dimension mismatch");
  if ((lo.array() > hi.array()).any())
    throw std::invalid_argument("FeasibleSet::box: requires lower <= upper");
  int dim = static_cast<int>(lo.size());
  return FeasibleSet(Kind::box, dim, std::move(lo), std::move(hi));
}

FeasibleSet FeasibleSet::fixed(Vec point) {
  int dim = static_cast<int>(point.size());
  Vec lo = point;
  return FeasibleSet(Kind::fixed_point, dim, std::move(lo), std::move(point));
}

Vec FeasibleSet::project(const Vec& u) const {
  if (u.size() != dim_) throw std::invalid_argument("project: dimension mismatch");
  if (kind_ == Kind::full_space) return u;
  return u.cwiseMax(lo_).cwiseMin(hi_);
}

double FeasibleSet::lower(int j) const { return lo_(j); }
double FeasibleSet::upper(int j) const { return hi_(j); }

double FeasibleSet::membership_violation(const Vec& u) const {
  if (kind_ == Kind::full_space) return 0.0;
  double v = 0.0;
  for (int j = 0; j < dim_; ++j) {
    v = std::max(v, lo_(j) - u(j));
    v = std::max(v, u(j) - hi_(j));
  }
  return std::max(v, 0.0);
}

}  // namespace dga
