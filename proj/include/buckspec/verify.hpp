#pragma once

#include <span>
#include <string>
#include <vector>

#include "buckspec/errors.hpp"
#include "buckspec/rules.hpp"
#include "buckspec/types.hpp"

namespace buckspec {

struct RuleSelection {
  RuleId id = RuleId::cor12;
  RuleParams params;
};

// Whether a rule may be asserted against a computed spectrum. The sphere rule
// is evaluator-only (no matching solver geometry); the dimension-dependent
// rules need a planar second-order buckling spectrum.
inline bool rule_applicable(RuleId rule, const ProblemSpec& problem, const RuleParams& params) {
  switch (rule) {
    case RuleId::thm11:
    case RuleId::cor12:
      return problem.kind == ProblemKind::buckling;
    case RuleId::cy_euclid:
    case RuleId::cy_improved:
    case RuleId::cy_conjecture:
      return problem.kind == ProblemKind::buckling && problem.order == 2 &&
             problem.domain.kind == DomainKind::rectangle && params.n == 2;
    case RuleId::thm31:
      return problem.kind == ProblemKind::clamped;
    case RuleId::sphere:
    case RuleId::chebyshev:
      return false;
  }
  return false;
}

// One report per (rule, k) for k = 1..k_max, evaluating each rule on the
// prefix of the first k values against the (k+1)-th.
inline std::vector<InequalityReport> verify_spectrum(const Spectrum& spectrum,
                                                     std::span<const RuleSelection> rules,
                                                     int k_max,
                                                     Tolerance tol = discrete_tolerance) {
  if (k_max < 1) fail(errc::invalid_argument, "k_max must be >= 1");
  if (spectrum.values.size() < static_cast<std::size_t>(k_max) + 1)
    fail(errc::insufficient_values,
         "need " + std::to_string(k_max + 1) + " values, spectrum has " +
             std::to_string(spectrum.values.size()));
  const std::vector<double> values = validate_spectrum(spectrum.values);

  std::vector<InequalityReport> reports;
  reports.reserve(rules.size() * static_cast<std::size_t>(k_max));
  for (const RuleSelection& rule : rules) {
    if (!rule_applicable(rule.id, spectrum.problem, rule.params))
      fail(errc::rule_not_applicable,
           std::string(to_string(rule.id)) + " does not apply to this spectrum");
    RuleParams params = rule.params;
    params.order = spectrum.problem.order;
    for (int k = 1; k <= k_max; ++k) {
      RuleParams at_k = params;
      if (!at_k.delta_seq.empty() && at_k.delta_seq.size() > static_cast<std::size_t>(k))
        at_k.delta_seq.resize(k);
      reports.push_back(
          eval_rule(rule.id, at_k, std::span<const double>(values.data(), k + 1), tol));
    }
  }
  return reports;
}

}  // namespace buckspec
