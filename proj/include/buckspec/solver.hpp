#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "buckspec/assembly.hpp"
#include "buckspec/eigensolve.hpp"
#include "buckspec/types.hpp"

namespace buckspec {

inline constexpr int eigen_count_padding = 4;  // guards window-edge degeneracies
inline constexpr int refine_degree_step = 4;

namespace detail {

inline std::vector<double> planar_values(const ProblemSpec& problem, const SolveConfig& config) {
  const DiscreteForms forms = assemble_forms(problem, config);
  const Eigen::Index dim = forms.A.rows();
  if (config.k > dim)
    fail(errc::k_too_large, "requested " + std::to_string(config.k) +
                                " eigenvalues from dimension " + std::to_string(dim));
  const int request = static_cast<int>(std::min<Eigen::Index>(config.k + eigen_count_padding, dim));
  const GeneralizedEigenSolution sol = solve_generalized(forms, request);
  return {sol.values.data(), sol.values.data() + config.k};
}

// Smallest eigenvalue any mode m can contribute, from the mode-only term of
// the Rayleigh quotient: (2 pi m / L)^(2(l-1)) for buckling, ^(2l) for clamped.
inline double cylinder_mode_floor(const ProblemSpec& problem, int m) {
  const double km = 2.0 * std::numbers::pi * m / problem.domain.lengths[0];
  const int power = problem.kind == ProblemKind::buckling ? 2 * (problem.order - 1)
                                                          : 2 * problem.order;
  return std::pow(km, power);
}

inline std::vector<double> cylinder_values(const ProblemSpec& problem, const SolveConfig& config) {
  problem.validate();
  if (problem.domain.aspect_ratio() > max_aspect_ratio)
    fail(errc::ill_proportioned, "aspect ratio exceeds " + std::to_string(max_aspect_ratio));
  if (config.mode_cutoff < 0) fail(errc::invalid_argument, "mode cutoff must be >= 0");

  const int l = problem.order;
  const double circumference = problem.domain.lengths[0];
  const double height = problem.domain.lengths[1];
  const bool buckling = problem.kind == ProblemKind::buckling;

  const auto degrees = detail::resolve_degrees(config, config.degrees.size() == 2 ? 2 : 1);
  const int n = degrees.back();
  const int q = detail::resolve_quadrature(config, n, l);
  const Basis1D basis = build_basis_1d(l, height, n);
  const auto g = derivative_overlaps(basis, l, q);

  const int request = std::min(config.k + eigen_count_padding, n);
  std::vector<double> merged;
  const int half = l / 2;
  for (int m = 0; m <= config.mode_cutoff; ++m) {
    const double ksq = std::pow(2.0 * std::numbers::pi * m / circumference, 2);
    DiscreteForms forms{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    // (d^2/dt^2 - k^2)^h expanded binomially against the 1D overlaps; odd l
    // adds the first-derivative and k^2 zeroth-order factors of the gradient.
    for (int r = 0; r <= half; ++r)
      for (int s = 0; s <= half; ++s) {
        const double coef = detail::binom(half, r) * detail::binom(half, s) *
                            std::pow(-ksq, 2 * half - r - s);
        if (l % 2 == 0) {
          forms.A += coef * g[2 * r][2 * s];
        } else {
          forms.A += coef * (g[2 * r + 1][2 * s + 1] + ksq * g[2 * r][2 * s]);
        }
      }
    forms.B = buckling ? (g[1][1] + ksq * g[0][0]).eval() : g[0][0];
    detail::symmetrize(forms.A);
    detail::check_forms(forms);

    const GeneralizedEigenSolution sol = solve_generalized(forms, request);
    for (int i = 0; i < sol.values.size(); ++i) {
      merged.push_back(sol.values(i));
      if (m > 0) merged.push_back(sol.values(i));  // cos and sin branches
    }
  }
  std::sort(merged.begin(), merged.end());
  if (static_cast<int>(merged.size()) < config.k)
    fail(errc::k_too_large, "modes produced only " + std::to_string(merged.size()) + " values");
  merged.resize(config.k);

  if (merged.back() > cylinder_mode_floor(problem, config.mode_cutoff + 1))
    fail(errc::mode_cutoff_too_low,
         "mode " + std::to_string(config.mode_cutoff + 1) + " could contribute below the " +
             std::to_string(config.k) + "-th merged value");
  return merged;
}

inline std::vector<double> solve_values(const ProblemSpec& problem, const SolveConfig& config) {
  problem.validate();
  if (config.k < 1) fail(errc::invalid_argument, "eigenvalue count must be >= 1");
  std::vector<double> values = problem.domain.kind == DomainKind::cylinder
                                   ? cylinder_values(problem, config)
                                   : planar_values(problem, config);
  return validate_spectrum(std::move(values));
}

inline std::vector<double> relative_change(const std::vector<double>& values,
                                           const std::vector<double>& coarser) {
  std::vector<double> change(values.size(), 1.0);
  for (std::size_t i = 0; i < values.size() && i < coarser.size(); ++i)
    change[i] = std::abs(values[i] - coarser[i]) / std::abs(values[i]);
  return change;
}

inline Resolution make_resolution(const ProblemSpec& problem, const SolveConfig& config) {
  Resolution res;
  const bool cyl = problem.domain.kind == DomainKind::cylinder;
  const int dims = problem.domain.kind == DomainKind::rectangle
                       ? 2
                       : static_cast<int>(config.degrees.size());
  res.degrees = resolve_degrees(config, dims);
  int q = 0;
  for (int n : res.degrees) q = std::max(q, resolve_quadrature(config, n, problem.order));
  res.quadrature = q;
  res.mode_cutoff = cyl ? config.mode_cutoff : 0;
  return res;
}

}  // namespace detail

// One solve at the configured degrees, plus a companion solve one refinement
// step coarser to fill the per-value convergence estimates.
inline Spectrum compute_spectrum(const ProblemSpec& problem, const SolveConfig& config) {
  Spectrum spectrum;
  spectrum.problem = problem;
  spectrum.values = detail::solve_values(problem, config);
  spectrum.resolution = detail::make_resolution(problem, config);

  SolveConfig coarser = config;
  bool comparable = false;
  for (int& n : coarser.degrees)
    if (n - refine_degree_step >= 1) {
      n -= refine_degree_step;
      comparable = true;
    }
  spectrum.convergence.assign(spectrum.values.size(), 1.0);
  if (comparable) {
    try {
      spectrum.convergence =
          detail::relative_change(spectrum.values, detail::solve_values(problem, coarser));
    } catch (const error&) {
      // coarser space too small for K values; estimates stay at 1.0
    }
  }
  return spectrum;
}

inline Spectrum cylinder_mode_solve(const ProblemSpec& problem, const SolveConfig& config) {
  if (problem.domain.kind != DomainKind::cylinder)
    fail(errc::invalid_argument, "cylinder_mode_solve needs a cylinder domain");
  return compute_spectrum(problem, config);
}

// Raises the per-dimension degree in steps of refine_degree_step until the
// K-th eigenvalue moves by less than rel_tol between consecutive degrees;
// flags (never throws) when the policy is unmet at the degree cap.
inline Spectrum refine_until(const ProblemSpec& problem, int K, double rel_tol, int max_degree) {
  problem.validate();
  if (!(rel_tol > 0.0)) fail(errc::invalid_argument, "rel_tol must be positive");
  if (K < 1) fail(errc::invalid_argument, "eigenvalue count must be >= 1");

  const int start = ((std::max(8, K + 1) + refine_degree_step - 1) / refine_degree_step) *
                    refine_degree_step;
  if (max_degree < start)
    fail(errc::invalid_argument, "max degree " + std::to_string(max_degree) +
                                     " below start degree " + std::to_string(start));
  const int cap = std::min(max_degree, max_basis_count);

  SolveConfig config;
  config.k = K;
  config.refine.rel_tol = rel_tol;
  config.refine.max_degree = max_degree;
  config.degrees = {start};

  std::vector<double> prev = detail::solve_values(problem, config);
  std::vector<double> prev_change(prev.size(), 1.0);
  bool converged = false;
  for (int n = start + refine_degree_step; n <= cap; n += refine_degree_step) {
    config.degrees = {n};
    std::vector<double> values = detail::solve_values(problem, config);
    std::vector<double> change = detail::relative_change(values, prev);
    prev = std::move(values);
    prev_change = std::move(change);
    if (prev_change[K - 1] < rel_tol) {
      converged = true;
      break;
    }
  }

  Spectrum spectrum;
  spectrum.problem = problem;
  spectrum.values = std::move(prev);
  spectrum.convergence = std::move(prev_change);
  spectrum.resolution = detail::make_resolution(problem, config);
  spectrum.converged = converged;
  return spectrum;
}

}  // namespace buckspec
