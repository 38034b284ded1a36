#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "buckspec/errors.hpp"

namespace buckspec {

enum class DomainKind { interval, rectangle, cylinder };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::interval: return "interval";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::cylinder: return "cylinder";
  }
  return "?";
}

inline DomainKind parse_domain_kind(const std::string& s) {
  if (s == "interval") return DomainKind::interval;
  if (s == "rectangle") return DomainKind::rectangle;
  if (s == "cylinder") return DomainKind::cylinder;
  fail(errc::invalid_argument, "unknown domain kind '" + s + "'");
}

// Geometry of the region the eigenproblem lives on. INTERVAL is a rod of
// length h; RECTANGLE an a-by-b box; CYLINDER a periodic strip of
// circumference L and height h.
struct DomainSpec {
  DomainKind kind = DomainKind::interval;
  std::vector<double> lengths;

  static DomainSpec interval(double h) { return {DomainKind::interval, {h}}; }
  static DomainSpec rectangle(double a, double b) { return {DomainKind::rectangle, {a, b}}; }
  static DomainSpec cylinder(double circumference, double height) {
    return {DomainKind::cylinder, {circumference, height}};
  }

  std::size_t expected_length_count() const {
    return kind == DomainKind::interval ? 1u : 2u;
  }

  void validate() const {
    if (lengths.size() != expected_length_count())
      fail(errc::invalid_argument, "domain '" + std::string(to_string(kind)) + "' needs " +
                                       std::to_string(expected_length_count()) + " lengths, got " +
                                       std::to_string(lengths.size()));
    for (double len : lengths)
      if (!(len > 0.0) || !std::isfinite(len))
        fail(errc::invalid_argument, "domain lengths must be positive and finite");
  }

  double aspect_ratio() const {
    if (lengths.size() < 2) return 1.0;
    auto [lo, hi] = std::minmax(lengths[0], lengths[1]);
    return hi / lo;
  }
};

enum class ProblemKind { buckling, clamped };

inline const char* to_string(ProblemKind k) {
  return k == ProblemKind::buckling ? "buckling" : "clamped";
}

inline ProblemKind parse_problem_kind(const std::string& s) {
  if (s == "buckling") return ProblemKind::buckling;
  if (s == "clamped") return ProblemKind::clamped;
  fail(errc::invalid_argument, "unknown problem kind '" + s + "'");
}

// One eigenvalue problem instance: order l, which operator pair, and where.
struct ProblemSpec {
  int order = 2;
  ProblemKind kind = ProblemKind::buckling;
  DomainSpec domain;

  void validate() const {
    if (order < 2) fail(errc::invalid_order, "order must be >= 2, got " + std::to_string(order));
    domain.validate();
  }
};

// Discretization parameters a spectrum was produced with.
struct Resolution {
  std::vector<int> degrees;
  int quadrature = 0;
  int mode_cutoff = 0;
};

// Checks positivity and sorted order without reordering; out-of-order input
// signals an upstream bug and is rejected rather than repaired.
inline std::vector<double> validate_spectrum(std::vector<double> values) {
  if (values.empty()) fail(errc::empty, "no eigenvalues given");
  double prev = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (!(v > 0.0) || !std::isfinite(v))
      fail(errc::non_positive_value,
           "eigenvalue " + std::to_string(i + 1) + " = " + std::to_string(v));
    if (v < prev)
      fail(errc::out_of_order, "eigenvalue " + std::to_string(i + 1) + " below its predecessor");
    prev = v;
  }
  return values;
}

// Computed eigenvalues (ascending, multiplicities by repetition) with
// per-value relative-change estimates from the last refinement step.
struct Spectrum {
  ProblemSpec problem;
  std::vector<double> values;
  std::vector<double> convergence;
  Resolution resolution;
  bool converged = true;
};

enum class RuleId {
  cy_euclid,
  sphere,
  cy_improved,
  cy_conjecture,
  thm11,
  cor12,
  thm31,
  chebyshev,  // internal tag for the product-of-moments check
};

inline const char* to_string(RuleId r) {
  switch (r) {
    case RuleId::cy_euclid: return "cy-euclid";
    case RuleId::sphere: return "sphere";
    case RuleId::cy_improved: return "cy-improved";
    case RuleId::cy_conjecture: return "cy-conjecture";
    case RuleId::thm11: return "thm11";
    case RuleId::cor12: return "cor12";
    case RuleId::thm31: return "thm31";
    case RuleId::chebyshev: return "chebyshev";
  }
  return "?";
}

inline RuleId parse_rule_id(const std::string& s) {
  if (s == "cy-euclid") return RuleId::cy_euclid;
  if (s == "sphere") return RuleId::sphere;
  if (s == "cy-improved") return RuleId::cy_improved;
  if (s == "cy-conjecture") return RuleId::cy_conjecture;
  if (s == "thm11") return RuleId::thm11;
  if (s == "cor12") return RuleId::cor12;
  if (s == "thm31") return RuleId::thm31;
  fail(errc::invalid_argument, "unknown rule '" + s + "'");
}

// Free parameters of the rules: n for the dimension-dependent ones, delta for
// the sphere rule, delta_seq for thm11 (empty means optimized uniform delta),
// order for the rules that depend on l.
struct RuleParams {
  int n = 2;
  int order = 2;
  double delta = 1.0;
  std::vector<double> delta_seq;
};

struct Tolerance {
  double abs_tol = 1e-9;
  double rel_tol = 1e-12;
};

inline constexpr Tolerance exact_tolerance{1e-9, 1e-12};
inline constexpr Tolerance discrete_tolerance{1e-9, 1e-6};

inline bool within_tolerance(double slack, double rhs, Tolerance tol) {
  return slack >= -std::max(tol.abs_tol, tol.rel_tol * std::abs(rhs));
}

struct InequalityReport {
  RuleId rule = RuleId::cor12;
  int k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool holds = false;
  bool conjecture = false;  // informational only, excluded from pass/fail gates
  Tolerance tol;
};

enum class BoundMethod { closed_form_quadratic, bisection };

inline const char* to_string(BoundMethod m) {
  return m == BoundMethod::closed_form_quadratic ? "closed-form-quadratic" : "bisection";
}

// Largest admissible next eigenvalue extracted from a rule; bound may be
// +infinity when the rule never binds.
struct BoundResult {
  RuleId rule = RuleId::cor12;
  int k = 0;
  double bound = 0.0;
  BoundMethod method = BoundMethod::closed_form_quadratic;
  double residual = 0.0;  // lhs - rhs at the returned bound
};

enum class DeltaPolicy { fixed, optimize_uniform };

}  // namespace buckspec
