#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "buckspec/errors.hpp"
#include "buckspec/rules.hpp"
#include "buckspec/types.hpp"

namespace buckspec {

namespace detail {

constexpr double root_slop = 1e-12;  // forgiveness for roundoff at root == max value

struct Quadratic {
  double a = 0.0, b = 0.0, c = 0.0;

  double eval(double x) const { return (a * x + b) * x + c; }

  // Larger real root via the cancellation-free split.
  double largest_root() const {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double r1 = q / a;
    const double r2 = q != 0.0 ? c / q : r1;
    return std::max(r1, r2);
  }
};

inline double quadratic_rule_coefficient(RuleId rule, const RuleParams& params) {
  switch (rule) {
    case RuleId::cy_euclid:
      check_rule_dimension(params.n);
      return 4.0 * (params.n + 2.0) / (static_cast<double>(params.n) * params.n);
    case RuleId::cy_improved:
      check_rule_dimension(params.n);
      return 4.0 * (params.n + 4.0 / 3.0) / (static_cast<double>(params.n) * params.n);
    case RuleId::cy_conjecture:
      check_rule_dimension(params.n);
      return 4.0 / params.n;
    case RuleId::cor12:
      check_rule_order(params.order);
      return 4.0 * thm11_constant(params.order);
    default:
      fail(errc::rule_not_applicable, "not a plain quadratic rule");
  }
}

// Sum of squared gaps minus coef * linear gap moment, expanded in the target.
inline Quadratic plain_quadratic(double coef, std::span<const double> values) {
  const double k = static_cast<double>(values.size());
  double s1 = 0.0, s2 = 0.0;
  for (double v : values) {
    s1 += v;
    s2 += v * v;
  }
  return {k, -(2.0 + coef) * s1, (1.0 + coef) * s2};
}

// thm11 with a fixed delta sequence, expanded in the target. The leading
// coefficient can go non-positive when the deltas are too large, in which
// case no finite target violates the rule.
inline Quadratic thm11_quadratic(std::span<const double> values, int l,
                                 std::span<const double> deltas) {
  const double cl = thm11_constant(l);
  const Rational e2 = thm11_sq_exponent(l), e1 = thm11_lin_exponent(l);
  double a = 0.0, b = 0.0, c = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const double w = 1.0 - cl * deltas[i] * pow_rational(v, e2);
    const double u = pow_rational(v, e1) / deltas[i];
    a += w;
    b += -2.0 * v * w - u;
    c += v * v * w + v * u;
  }
  return {a, b, c};
}

inline double checked_largest_root(const Quadratic& quad, double floor_value, RuleId rule) {
  const double root = quad.largest_root();
  if (std::isnan(root))
    fail(errc::infeasible_prefix,
         std::string(to_string(rule)) + " has no admissible next eigenvalue for this prefix");
  if (root < floor_value) {
    if (root >= floor_value * (1.0 - root_slop)) return floor_value;
    fail(errc::infeasible_prefix, std::string(to_string(rule)) +
                                      " root undercuts the largest known eigenvalue");
  }
  return root;
}

// Largest root of the fixed-uniform-delta quadratic, +infinity when that
// delta admits no bound.
inline double thm11_uniform_root(std::span<const double> values, int l, double delta,
                                 double floor_value) {
  const std::vector<double> deltas(values.size(), delta);
  const Quadratic quad = thm11_quadratic(values, l, deltas);
  if (!(quad.a > 0.0)) return std::numeric_limits<double>::infinity();
  const double root = quad.largest_root();
  if (std::isnan(root) || root < floor_value * (1.0 - root_slop))
    return std::numeric_limits<double>::infinity();
  return std::max(root, floor_value);
}

}  // namespace detail

struct UniformDeltaBound {
  double delta = 0.0;
  double bound = 0.0;
};

// Golden-section minimization of the fixed-delta root over the open interval
// of deltas that keep the leading coefficient positive, seeded by a coarse
// grid scan. Iteration counts are fixed for reproducibility.
inline UniformDeltaBound optimize_uniform_delta(std::span<const double> values, int l) {
  detail::check_rule_order(l);
  const double cl = thm11_constant(l);
  double sum_w = 0.0;
  for (double v : values) sum_w += pow_rational(v, thm11_sq_exponent(l));
  const double delta_max = static_cast<double>(values.size()) / (cl * sum_w);
  const double floor_value = values.back();

  constexpr int grid = 64;
  int best = 0;
  double best_root = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= grid; ++j) {
    const double delta = delta_max * j / (grid + 1);
    const double root = detail::thm11_uniform_root(values, l, delta, floor_value);
    if (root < best_root) {
      best_root = root;
      best = j;
    }
  }
  if (!std::isfinite(best_root))
    fail(errc::infeasible_prefix, "no delta admits a bound for this prefix");

  double lo = delta_max * (best - 1) / (grid + 1);
  double hi = delta_max * (best + 1) / (grid + 1);
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = detail::thm11_uniform_root(values, l, x1, floor_value);
  double f2 = detail::thm11_uniform_root(values, l, x2, floor_value);
  for (int iter = 0; iter < 90; ++iter) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = detail::thm11_uniform_root(values, l, x1, floor_value);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = detail::thm11_uniform_root(values, l, x2, floor_value);
    }
  }
  const double delta = f1 <= f2 ? x1 : x2;
  return {delta, std::min(f1, f2)};
}

// Largest target satisfying the rule, found by doubling then bisecting the
// sign change of lhs - rhs; +infinity sentinel when the rule never binds.
inline BoundResult bound_by_bisection(RuleId rule, const RuleParams& params,
                                      std::span<const double> values) {
  const std::vector<double> checked =
      validate_spectrum(std::vector<double>(values.begin(), values.end()));
  const auto f = [&](double target) {
    const auto sides = detail::rule_sides(rule, params, checked, target);
    return sides.lhs - sides.rhs;
  };

  BoundResult out;
  out.rule = rule;
  out.k = static_cast<int>(checked.size());
  out.method = BoundMethod::bisection;

  double lo = checked.back();
  if (f(lo) > 0.0)
    fail(errc::infeasible_prefix, std::string(to_string(rule)) +
                                      " already fails at the largest known eigenvalue");
  double hi = lo + 1.0;
  bool bracketed = false;
  for (int iter = 0; iter < 1100 && std::isfinite(hi); ++iter) {
    if (f(hi) > 0.0) {
      bracketed = true;
      break;
    }
    hi *= 2.0;
  }
  if (!bracketed) {
    out.bound = std::numeric_limits<double>::infinity();
    out.residual = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.bound = lo;
  out.residual = f(lo);
  return out;
}

inline BoundResult bound_from_rule(RuleId rule, const RuleParams& params,
                                   std::span<const double> values,
                                   DeltaPolicy policy = DeltaPolicy::optimize_uniform) {
  const std::vector<double> checked =
      validate_spectrum(std::vector<double>(values.begin(), values.end()));
  const double floor_value = checked.back();

  BoundResult out;
  out.rule = rule;
  out.k = static_cast<int>(checked.size());

  switch (rule) {
    case RuleId::cy_euclid:
    case RuleId::cy_improved:
    case RuleId::cy_conjecture:
    case RuleId::cor12: {
      const double coef = detail::quadratic_rule_coefficient(rule, params);
      const detail::Quadratic quad = detail::plain_quadratic(coef, checked);
      out.method = BoundMethod::closed_form_quadratic;
      out.bound = detail::checked_largest_root(quad, floor_value, rule);
      out.residual = quad.eval(out.bound);
      return out;
    }
    case RuleId::thm11: {
      detail::check_rule_order(params.order);
      if (policy == DeltaPolicy::fixed) {
        const auto deltas = detail::checked_delta_seq(params, checked.size());
        const detail::Quadratic quad = detail::thm11_quadratic(checked, params.order, deltas);
        if (!(quad.a > 0.0))
          fail(errc::unbounded_for_delta,
               "delta sequence too large: the rule admits every next eigenvalue");
        out.method = BoundMethod::closed_form_quadratic;
        out.bound = detail::checked_largest_root(quad, floor_value, rule);
        out.residual = quad.eval(out.bound);
        return out;
      }
      const UniformDeltaBound opt = optimize_uniform_delta(checked, params.order);
      const std::vector<double> deltas(checked.size(), opt.delta);
      const detail::Quadratic quad = detail::thm11_quadratic(checked, params.order, deltas);
      out.method = BoundMethod::closed_form_quadratic;
      out.bound = opt.bound;
      out.residual = quad.eval(out.bound);
      return out;
    }
    case RuleId::thm31:
      detail::check_rule_order(params.order);
      return bound_by_bisection(rule, params, checked);
    case RuleId::sphere:
    case RuleId::chebyshev:
      break;
  }
  fail(errc::rule_not_applicable,
       "no bound extraction for rule " + std::string(to_string(rule)));
}

}  // namespace buckspec
