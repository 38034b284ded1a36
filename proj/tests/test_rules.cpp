#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "buckspec/rules.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace buckspec;
using Catch::Approx;
using testutil::code_of;

namespace {

RuleParams params_with(int order, int n = 2) {
  RuleParams p;
  p.order = order;
  p.n = n;
  return p;
}

using vec = std::vector<double>;

}  // namespace

TEST_CASE("quadratic gap rule on a small list") {
  const vec values{1.0, 1.0, 1.0, 2.0};
  const InequalityReport r = eval_rule(RuleId::cor12, params_with(2), values);
  REQUIRE(r.k == 3);
  REQUIRE(r.lhs == Approx(3.0).epsilon(1e-12));
  REQUIRE(r.rhs == Approx(28.0).epsilon(1e-12));
  REQUIRE(r.slack == Approx(25.0).epsilon(1e-12));
  REQUIRE(r.holds);
  REQUIRE_FALSE(r.conjecture);
}

TEST_CASE("euclidean plate rule can fail on a spread pair") {
  const vec values{1.0, 6.0};
  const InequalityReport r = eval_rule(RuleId::cy_euclid, params_with(2, 2), values);
  REQUIRE(r.lhs == Approx(25.0).epsilon(1e-12));
  REQUIRE(r.rhs == Approx(20.0).epsilon(1e-12));
  REQUIRE(r.slack == Approx(-5.0).epsilon(1e-12));
  REQUIRE_FALSE(r.holds);
}

TEST_CASE("clamped rule is tight on its extremal pair") {
  SECTION("slack vanishes at the extremal gap") {
    const vec values{1.0, 25.0};
    const InequalityReport r = eval_rule(RuleId::thm31, params_with(2), values);
    REQUIRE(r.lhs == Approx(576.0).epsilon(1e-12));
    REQUIRE(std::abs(r.slack) <= 1e-9 * r.rhs);
    REQUIRE(r.holds);
  }
  SECTION("a smaller gap leaves positive slack") {
    const vec values{1.0, 1.0 + 2.0 * std::sqrt(6.0)};
    const InequalityReport r = eval_rule(RuleId::thm31, params_with(2), values);
    REQUIRE(r.rhs == Approx(53.12073214561544).epsilon(1e-12));
    REQUIRE(r.slack > 0.0);
    REQUIRE(r.holds);
  }
  SECTION("holds along the clamped rod spectrum") {
    const vec gamma = oracles::beam_clamped_values(6);
    for (std::size_t k = 1; k + 1 <= gamma.size(); ++k) {
      const vec head(gamma.begin(), gamma.begin() + k + 1);
      const InequalityReport r = eval_rule(RuleId::thm31, params_with(2), head);
      REQUIRE(r.holds);
      REQUIRE(r.slack > 0.0);
    }
  }
}

TEST_CASE("sphere rule reproduces a hand evaluation") {
  RuleParams p = params_with(2, 3);
  p.delta = 0.5;
  const vec values{1.0, 2.0};
  const InequalityReport r = eval_rule(RuleId::sphere, p, values);

  const double n = 3.0;
  const double d = 0.5;
  const double lam = 1.0;
  const double g = 2.0 - 1.0;
  const double first =
      g * g * (d * lam + d * d * (lam - (n - 2.0)) / (4.0 * (d * lam + n - 2.0)));
  const double second = (g / d) * (lam + (n - 2.0) * (n - 2.0) / 4.0);
  REQUIRE(r.lhs == Approx(2.0 * g * g).epsilon(1e-12));
  REQUIRE(r.rhs == Approx(first + second).epsilon(1e-12));
  REQUIRE(r.holds == (r.slack >= 0.0));
}

TEST_CASE("every rule collapses to equality on a constant list") {
  const vec values{1.0, 1.0, 1.0, 1.0};
  const std::vector<RuleId> ids{RuleId::cy_euclid,     RuleId::sphere, RuleId::cy_improved,
                                RuleId::cy_conjecture, RuleId::thm11,  RuleId::cor12,
                                RuleId::thm31};
  for (const RuleId id : ids) {
    RuleParams p = params_with(2, 2);
    if (id == RuleId::sphere) p.n = 3;
    const InequalityReport r = eval_rule(id, p, values);
    INFO(to_string(id));
    REQUIRE(r.lhs == 0.0);
    REQUIRE(r.rhs == 0.0);
    REQUIRE(r.slack == 0.0);
    REQUIRE(r.holds);
    REQUIRE(r.conjecture == (id == RuleId::cy_conjecture));
  }
}

TEST_CASE("rule right-hand sides are ordered by their coefficients") {
  const vec values{1.0, 1.3, 2.0, 2.6, 4.1};
  const RuleParams p = params_with(2, 2);
  const double conj = eval_rule(RuleId::cy_conjecture, p, values).rhs;
  const double impr = eval_rule(RuleId::cy_improved, p, values).rhs;
  const double eucl = eval_rule(RuleId::cy_euclid, p, values).rhs;
  const double cor = eval_rule(RuleId::cor12, p, values).rhs;
  REQUIRE(conj <= impr);
  REQUIRE(impr <= eucl);
  REQUIRE(eucl <= cor);
}

TEST_CASE("weighted gap rule matches a direct sum") {
  RuleParams p = params_with(2);
  p.delta_seq = {0.5, 0.25, 0.125};
  const vec values{1.0, 2.0, 3.0, 5.0};
  const InequalityReport r = eval_rule(RuleId::thm11, p, values);

  const double C = thm11_constant(2);
  double lhs = 0.0;
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double g = 5.0 - values[i];
    const double d = p.delta_seq[i];
    lhs += g * g;
    first += d * g * g;  // order 2: the eigenvalue power inside the first sum is 0
    second += (1.0 / d) * g * values[i];
  }
  REQUIRE(r.lhs == Approx(lhs).epsilon(1e-12));
  REQUIRE(r.rhs == Approx(C * first + second).epsilon(1e-12));
}

TEST_CASE("uniform-weight gap rule uses the optimized closed form") {
  const RuleParams p = params_with(3);
  const vec values{1.0, 2.0, 4.0, 7.0};
  const InequalityReport r = eval_rule(RuleId::thm11, p, values);

  const double C = thm11_constant(3);
  double p1 = 0.0;
  double p2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double g = 7.0 - values[i];
    p1 += g * std::sqrt(values[i]);
    p2 += g * g * std::sqrt(values[i]);
  }
  REQUIRE(r.rhs == Approx(2.0 * std::sqrt(C * p2 * p1)).epsilon(1e-12));
  REQUIRE(r.holds);
}

TEST_CASE("rule evaluation validates its inputs") {
  REQUIRE(code_of([] { eval_rule(RuleId::cor12, params_with(2), vec{1.0}); }) ==
          errc::insufficient_values);
  REQUIRE(code_of([] { eval_rule(RuleId::cor12, params_with(2), vec{}); }) ==
          errc::insufficient_values);
  REQUIRE(code_of([] { eval_rule(RuleId::cor12, params_with(1), vec{1.0, 2.0}); }) ==
          errc::invalid_order);
  REQUIRE(code_of([] { eval_rule(RuleId::chebyshev, params_with(2), vec{1.0, 2.0}); }) ==
          errc::rule_not_applicable);
  REQUIRE_THROWS_AS(eval_rule(RuleId::cor12, params_with(2), vec{2.0, 1.0}), error);
  REQUIRE_THROWS_AS(eval_rule(RuleId::cor12, params_with(2), vec{-1.0, 2.0}), error);
  REQUIRE(code_of([] { eval_rule(RuleId::cy_euclid, params_with(2, 1), vec{1.0, 2.0}); }) ==
          errc::invalid_argument);
}

TEST_CASE("weight sequences are checked before use") {
  const vec values{1.0, 2.0, 3.0};
  RuleParams p = params_with(2);

  p.delta_seq = {1.0};
  REQUIRE(code_of([&] { eval_rule(RuleId::thm11, p, values); }) == errc::bad_delta_seq);

  p.delta_seq = {1.0, -1.0};
  REQUIRE(code_of([&] { eval_rule(RuleId::thm11, p, values); }) == errc::bad_delta_seq);

  p.delta_seq = {1.0, 2.0};
  REQUIRE(code_of([&] { eval_rule(RuleId::thm11, p, values); }) == errc::bad_delta_seq);

  p.delta_seq = {1.0, 0.5};
  REQUIRE_NOTHROW(eval_rule(RuleId::thm11, p, values));
}

TEST_CASE("chebyshev check on hand lists") {
  SECTION("equal values give exact equality") {
    const InequalityReport r = chebyshev_check(vec{3.0, 3.0, 3.0, 3.0}, 4);
    REQUIRE(r.slack == 0.0);
    REQUIRE(r.holds);
  }
  SECTION("order two makes both sides identical expressions") {
    const vec values{1.0, 4.0, 9.0, 16.0, 25.0};
    const InequalityReport r = chebyshev_check(values, 2);
    REQUIRE(r.lhs == r.rhs);
    REQUIRE(r.slack == 0.0);
  }
  SECTION("higher order leaves positive slack on a spread list") {
    const InequalityReport r = chebyshev_check(vec{1.0, 4.0, 9.0, 16.0}, 3);
    REQUIRE(r.slack > 0.0);
    REQUIRE(r.holds);
  }
  SECTION("constant head below a larger target stays an equality") {
    for (const int l : {3, 4, 7}) {
      const InequalityReport r = chebyshev_check(vec{2.5, 2.5, 2.5, 40.0}, l);
      INFO("l = " << l);
      REQUIRE(std::abs(r.slack) <= 1e-12 * r.rhs);
      REQUIRE(r.holds);
    }
  }
  SECTION("rejects short lists and bad orders") {
    REQUIRE(code_of([] { chebyshev_check(vec{1.0}, 2); }) == errc::insufficient_values);
    REQUIRE(code_of([] { chebyshev_check(vec{1.0, 2.0}, 1); }) == errc::invalid_order);
  }
}

TEST_CASE("closed-form weight for the optimized gap rule") {
  SECTION("single value, order two") {
    const double d = closed_form_delta(vec{1.0}, 2.0, 2);
    REQUIRE(d == Approx(std::sqrt(3.0 / 7.0)).epsilon(1e-12));
  }
  SECTION("single value at unit gap is the reciprocal root of the constant") {
    for (const int l : {3, 4}) {
      const double d = closed_form_delta(vec{1.0}, 2.0, l);
      REQUIRE(d == Approx(1.0 / std::sqrt(thm11_constant(l))).epsilon(1e-12));
    }
  }
  SECTION("two values, order two") {
    const double d = closed_form_delta(vec{1.0, 2.0}, 3.0, 2);
    REQUIRE(d == Approx(0.5855400437691198).epsilon(1e-12));
  }
  SECTION("minimizes the uniform-weight right-hand side") {
    const vec values{1.0, 2.0};
    const double target = 3.0;
    const double best = closed_form_delta(values, target, 2);

    const double C = thm11_constant(2);
    const auto rhs_at = [&](double d) {
      double first = 0.0;
      double second = 0.0;
      for (const double v : values) {
        const double g = target - v;
        first += d * g * g;
        second += (1.0 / d) * g * v;
      }
      return C * first + second;
    };

    const double floor = rhs_at(best);
    for (int i = 1; i <= 400; ++i) {
      const double d = 2.0 * static_cast<double>(i) / 400.0;
      REQUIRE(rhs_at(d) >= floor * (1.0 - 1e-12));
    }

    vec full(values);
    full.push_back(target);
    RuleParams fixed = params_with(2);
    fixed.delta_seq = {best, best};
    const InequalityReport r = eval_rule(RuleId::thm11, fixed, full);
    const InequalityReport opt = eval_rule(RuleId::thm11, params_with(2), full);
    REQUIRE(r.rhs == Approx(opt.rhs).epsilon(1e-12));
  }
  SECTION("rejects bad targets") {
    REQUIRE(code_of([] { closed_form_delta(vec{1.0, 2.0}, 1.5, 2); }) ==
            errc::target_below_max);
    REQUIRE(code_of([] { closed_form_delta(vec{1.0, 2.0}, 2.0, 2); }) == errc::degenerate);
    REQUIRE(code_of([] { closed_form_delta(vec{1.0}, 2.0, 1); }) == errc::invalid_order);
  }
}

TEST_CASE("gap rule coefficients at low orders") {
  REQUIRE(thm11_constant(2) == Approx(7.0 / 3.0).epsilon(1e-15));
  REQUIRE(thm11_constant(3) == Approx(26.0 / 3.0).epsilon(1e-15));
  REQUIRE(thm31_constant(2) == Approx(6.0).epsilon(1e-15));
  REQUIRE(thm31_constant(3) == Approx(15.0).epsilon(1e-15));
}
