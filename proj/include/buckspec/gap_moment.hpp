#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>

#include "buckspec/errors.hpp"

namespace buckspec {

// Exact integer exponent pair p/q, applied through std::pow only at
// evaluation time. The q == 1 and p == 0 cases short-circuit so that integer
// powers stay exact.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend constexpr bool operator==(const Rational&, const Rational&) = default;
};

inline double pow_rational(double x, Rational e) {
  if (e.num == 0) return 1.0;
  if (e.num == e.den) return x;
  if (e.den == 1) {
    if (e.num == 2) return x * x;
    return std::pow(x, static_cast<double>(e.num));
  }
  if (e.num == 1 && e.den == 2) return std::sqrt(x);
  return std::pow(x, e.value());
}

namespace detail {

class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

// Shared kernel of every rule: sum over i of (target - v_i)^a * v_i^e, summed
// in ascending index order; compensated summation above 64 terms.
inline double gap_moment(std::span<const double> values, double target, int gap_power,
                         Rational value_exponent) {
  if (values.empty()) fail(errc::empty, "gap_moment needs at least one value");
  if (gap_power != 1 && gap_power != 2)
    fail(errc::invalid_argument, "gap_power must be 1 or 2, got " + std::to_string(gap_power));
  for (double v : values)
    if (target < v) fail(errc::target_below_max, "target " + std::to_string(target) +
                                                     " below value " + std::to_string(v));

  const bool compensated = values.size() > 64;
  detail::KahanSum kahan;
  double plain = 0.0;
  for (double v : values) {
    const double g = target - v;
    const double term = (gap_power == 2 ? g * g : g) * pow_rational(v, value_exponent);
    if (compensated)
      kahan.add(term);
    else
      plain += term;
  }
  return compensated ? kahan.value() : plain;
}

}  // namespace buckspec
