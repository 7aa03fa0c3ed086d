#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <utility>
#include <variant>

#include "dga/graph.hpp"

namespace dga {

/// Thrown when exp(ell*u) would overflow; the exponent is clamped at 700
/// before the error is raised so the message can report the magnitude.
class domain_overflow_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// f(u) = sum_j a_j u_j^2 + b_j u_j
struct Quadratic {
  Vec a;
  Vec b;
};

/// f(u) = sum_j a_j u_j^2 + b_j u_j + delta_j exp(ell_j u_j)
struct QuadExp {
  Vec a;
  Vec b;
  Vec delta;
  Vec ell;
};

/// User-supplied objective with declared constants.
struct CustomObjective {
  int dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  double l_f = 0.0;
  double mu = 0.0;
};

class SeparableObjective {
public:
  explicit SeparableObjective(Quadratic q);
  explicit SeparableObjective(QuadExp q);
  explicit SeparableObjective(CustomObjective c);

  int dim() const { return dim_; }
  double value(const Vec& u) const;
  Vec gradient(const Vec& u) const;

  /// df/du_j at u; available for the built-in (coordinatewise) variants.
  /// The QuadExp exponential is saturated at exp(700) so the sign stays
  /// usable inside bracketing searches.
  double coord_derivative(int j, double u) const;
  bool separable_per_coordinate() const;

  bool is_quadratic() const { return std::holds_alternative<Quadratic>(v_); }
  const Quadratic& quadratic() const { return std::get<Quadratic>(v_); }
  const QuadExp& quad_exp() const { return std::get<QuadExp>(v_); }

  /// Certified (l_f, mu) over the box [lo, hi] (entries may be +-inf).
  /// Throws if the exponential term has no finite upper bound to certify.
  std::pair<double, double> smoothness_on(const Vec& lo, const Vec& hi) const;

private:
  std::variant<Quadratic, QuadExp, CustomObjective> v_;
  int dim_;
};

class FeasibleSet {
public:
  enum class Kind { full_space, box, fixed_point };

  static FeasibleSet full_space(int dim);
  static FeasibleSet box(Vec lo, Vec hi);
  static FeasibleSet fixed(Vec point);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  Vec project(const Vec& u) const;
  double lower(int j) const;  // -inf for full space
  double upper(int j) const;  // +inf for full space
  /// max componentwise distance of u from the set (0 if u is a member).
  double membership_violation(const Vec& u) const;

private:
  FeasibleSet(Kind k, int dim, Vec lo, Vec hi);
  Kind kind_;
  int dim_;
  Vec lo_, hi_;
};

}  // namespace dga
