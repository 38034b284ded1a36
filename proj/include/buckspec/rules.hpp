#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "buckspec/errors.hpp"
#include "buckspec/gap_moment.hpp"
#include "buckspec/types.hpp"

namespace buckspec {

// Constant multiplying the squared-gap moment in the thm11/cor12 rules.
inline double thm11_constant(int l) { return 2.0 * l * l - 11.0 * l / 3.0 + 5.0 / 3.0; }

// Constant inside the first square-root factor of the thm31 rule.
inline double thm31_constant(int l) { return static_cast<double>(l) * (2 * l - 1); }

inline Rational thm11_sq_exponent(int l) { return Rational(l - 2, l - 1); }
inline Rational thm11_lin_exponent(int l) { return Rational(1, l - 1); }
inline Rational thm31_sq_exponent(int l) { return Rational(l - 1, l); }
inline Rational thm31_lin_exponent(int l) { return Rational(1, l); }

namespace detail {

inline void check_rule_order(int l) {
  if (l < 2) fail(errc::invalid_order, "rule needs order >= 2, got " + std::to_string(l));
}

inline void check_rule_dimension(int n) {
  if (n < 2) fail(errc::invalid_argument, "rule needs dimension n >= 2, got " + std::to_string(n));
}

inline std::vector<double> checked_delta_seq(const RuleParams& params, std::size_t k) {
  if (params.delta_seq.size() < k)
    fail(errc::bad_delta_seq, "need " + std::to_string(k) + " delta entries, got " +
                                  std::to_string(params.delta_seq.size()));
  std::vector<double> seq(params.delta_seq.begin(), params.delta_seq.begin() + k);
  double prev = std::numeric_limits<double>::infinity();
  for (double d : seq) {
    if (!(d > 0.0) || !std::isfinite(d)) fail(errc::bad_delta_seq, "delta entries must be positive");
    if (d > prev) fail(errc::bad_delta_seq, "delta entries must be non-increasing");
    prev = d;
  }
  return seq;
}

struct RuleSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Both sides of a rule with the next eigenvalue set to `target`. The prefix
// must be validated and target >= its maximum. For thm11 an empty delta_seq
// selects the uniform delta that minimizes the right-hand side.
inline RuleSides rule_sides(RuleId rule, const RuleParams& params, std::span<const double> prefix,
                            double target) {
  const double sq_gaps = gap_moment(prefix, target, 2, Rational(0, 1));
  switch (rule) {
    case RuleId::cy_euclid: {
      check_rule_dimension(params.n);
      const double coef = 4.0 * (params.n + 2.0) / (static_cast<double>(params.n) * params.n);
      return {sq_gaps, coef * gap_moment(prefix, target, 1, Rational(1, 1))};
    }
    case RuleId::cy_improved: {
      check_rule_dimension(params.n);
      const double coef =
          4.0 * (params.n + 4.0 / 3.0) / (static_cast<double>(params.n) * params.n);
      return {sq_gaps, coef * gap_moment(prefix, target, 1, Rational(1, 1))};
    }
    case RuleId::cy_conjecture: {
      check_rule_dimension(params.n);
      return {sq_gaps, 4.0 / params.n * gap_moment(prefix, target, 1, Rational(1, 1))};
    }
    case RuleId::sphere: {
      check_rule_dimension(params.n);
      const double d = params.delta;
      if (!(d > 0.0) || !std::isfinite(d))
        fail(errc::invalid_argument, "sphere rule needs delta > 0");
      const double shift = params.n - 2.0;
      double rhs = 0.0;
      for (double v : prefix) {
        const double g = target - v;
        rhs += g * g * (d * v + d * d * (v - shift) / (4.0 * (d * v + shift))) +
               (g / d) * (v + shift * shift / 4.0);
      }
      return {2.0 * sq_gaps, rhs};
    }
    case RuleId::thm11: {
      check_rule_order(params.order);
      const int l = params.order;
      if (params.delta_seq.empty()) {
        const double p2 = gap_moment(prefix, target, 2, thm11_sq_exponent(l));
        const double p1 = gap_moment(prefix, target, 1, thm11_lin_exponent(l));
        return {sq_gaps, 2.0 * std::sqrt(thm11_constant(l) * p2 * p1)};
      }
      const auto seq = checked_delta_seq(params, prefix.size());
      const Rational e2 = thm11_sq_exponent(l), e1 = thm11_lin_exponent(l);
      double weighted = 0.0, inverse = 0.0;
      for (std::size_t i = 0; i < prefix.size(); ++i) {
        const double g = target - prefix[i];
        weighted += seq[i] * g * g * pow_rational(prefix[i], e2);
        inverse += g * pow_rational(prefix[i], e1) / seq[i];
      }
      return {sq_gaps, thm11_constant(l) * weighted + inverse};
    }
    case RuleId::cor12: {
      check_rule_order(params.order);
      return {sq_gaps, 4.0 * thm11_constant(params.order) *
                           gap_moment(prefix, target, 1, Rational(1, 1))};
    }
    case RuleId::thm31: {
      check_rule_order(params.order);
      const int l = params.order;
      const double p2 = gap_moment(prefix, target, 2, thm31_sq_exponent(l));
      const double p1 = gap_moment(prefix, target, 1, thm31_lin_exponent(l));
      return {sq_gaps, 2.0 * std::sqrt(thm31_constant(l) * p2) * std::sqrt(p1)};
    }
    case RuleId::chebyshev:
      break;
  }
  fail(errc::rule_not_applicable, "no evaluation for rule " + std::string(to_string(rule)));
}

}  // namespace detail

inline InequalityReport eval_rule(RuleId rule, const RuleParams& params,
                                  std::span<const double> values,
                                  Tolerance tol = exact_tolerance) {
  if (values.size() < 2)
    fail(errc::insufficient_values, "rule evaluation needs at least 2 values");
  const std::vector<double> checked =
      validate_spectrum(std::vector<double>(values.begin(), values.end()));
  const std::size_t k = checked.size() - 1;
  const std::span<const double> prefix(checked.data(), k);

  const auto sides = detail::rule_sides(rule, params, prefix, checked[k]);
  InequalityReport report;
  report.rule = rule;
  report.k = static_cast<int>(k);
  report.lhs = sides.lhs;
  report.rhs = sides.rhs;
  report.slack = sides.rhs - sides.lhs;
  report.holds = within_tolerance(report.slack, report.rhs, tol);
  report.conjecture = rule == RuleId::cy_conjecture;
  report.tol = tol;
  return report;
}

// Product-of-moments comparison: the pair of fractional-exponent moments is
// bounded by the pair of plain moments. Equality whenever l = 2 (the
// exponents collapse to 0 and 1) or all values coincide.
inline InequalityReport chebyshev_check(std::span<const double> values, int l,
                                        Tolerance tol = exact_tolerance) {
  detail::check_rule_order(l);
  if (values.size() < 2)
    fail(errc::insufficient_values, "chebyshev check needs at least 2 values");
  const std::vector<double> checked =
      validate_spectrum(std::vector<double>(values.begin(), values.end()));
  const std::size_t k = checked.size() - 1;
  const std::span<const double> prefix(checked.data(), k);
  const double target = checked[k];

  InequalityReport report;
  report.rule = RuleId::chebyshev;
  report.k = static_cast<int>(k);
  report.lhs = gap_moment(prefix, target, 2, thm11_sq_exponent(l)) *
               gap_moment(prefix, target, 1, thm11_lin_exponent(l));
  report.rhs = gap_moment(prefix, target, 2, Rational(0, 1)) *
               gap_moment(prefix, target, 1, Rational(1, 1));
  report.slack = report.rhs - report.lhs;
  report.holds = within_tolerance(report.slack, report.rhs, tol);
  report.tol = tol;
  return report;
}

// The uniform delta minimizing the thm11 right-hand side once the next
// eigenvalue is known. Degenerate when target equals the largest prefix
// value: both moments vanish and the ratio is 0/0.
inline double closed_form_delta(std::span<const double> values, double target, int l) {
  detail::check_rule_order(l);
  const std::vector<double> checked =
      validate_spectrum(std::vector<double>(values.begin(), values.end()));
  const double top = checked.back();
  if (target < top)
    fail(errc::target_below_max, "target below the largest known eigenvalue");
  if (target == top) fail(errc::degenerate, "target equals the largest known eigenvalue");
  const double p2 = gap_moment(checked, target, 2, thm11_sq_exponent(l));
  const double p1 = gap_moment(checked, target, 1, thm11_lin_exponent(l));
  return std::sqrt(p1) / std::sqrt(thm11_constant(l) * p2);
}

}  // namespace buckspec
