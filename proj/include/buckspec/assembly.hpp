#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "buckspec/basis.hpp"
#include "buckspec/errors.hpp"
#include "buckspec/types.hpp"

namespace buckspec {

inline constexpr double max_aspect_ratio = 1e3;

struct RefinePolicy {
  double rel_tol = 1e-8;
  int max_degree = max_basis_count;
};

struct SolveConfig {
  std::vector<int> degrees;  // basis count per dimension; one entry broadcasts
  int quadrature = 0;        // points per dimension; 0 selects the exact count
  int mode_cutoff = 8;       // highest Fourier mode on cylinders
  int k = 6;                 // eigenvalues to return
  RefinePolicy refine;
};

struct DiscreteForms {
  Eigen::MatrixXd A;  // order-l energy form
  Eigen::MatrixXd B;  // comparison form: first-derivative (buckling) or L2 (clamped)
};

// Smallest point count that integrates every entry of A and B exactly
// (integrand degree 2(2l + N - 1)), and the padded default.
inline int min_exact_quadrature(int basis_count, int l) { return basis_count + 2 * l; }
inline int auto_quadrature(int basis_count, int l) {
  return (2 * (basis_count + 2 * l) + 1 + 1) / 2 + 2;
}

namespace detail {

inline std::vector<int> resolve_degrees(const SolveConfig& config, int dims) {
  if (config.degrees.empty()) fail(errc::invalid_argument, "no basis degrees configured");
  std::vector<int> degrees = config.degrees;
  if (static_cast<int>(degrees.size()) == 1 && dims == 2) degrees.push_back(degrees[0]);
  if (static_cast<int>(degrees.size()) != dims)
    fail(errc::invalid_argument, "expected " + std::to_string(dims) + " degree entries");
  return degrees;
}

inline int resolve_quadrature(const SolveConfig& config, int basis_count, int l) {
  const int q = config.quadrature > 0 ? config.quadrature : auto_quadrature(basis_count, l);
  if (q < min_exact_quadrature(basis_count, l))
    fail(errc::quadrature_inexact, std::to_string(q) + " points cannot integrate degree " +
                                       std::to_string(2 * (basis_count + 2 * l - 1)) +
                                       " integrands exactly");
  return q;
}

inline void check_forms(const DiscreteForms& forms) {
  if (!forms.A.allFinite() || !forms.B.allFinite())
    fail(errc::conditioning, "assembled forms contain non-finite entries");
  for (Eigen::Index i = 0; i < forms.B.rows(); ++i)
    if (!(forms.B(i, i) > 0.0))
      fail(errc::conditioning, "comparison form has a non-positive diagonal entry");
}

// target += coef * (gx kron gy)
inline void add_kron(Eigen::MatrixXd& target, double coef, const Eigen::MatrixXd& gx,
                     const Eigen::MatrixXd& gy) {
  const Eigen::Index nx = gx.rows(), ny = gy.rows();
  for (Eigen::Index j = 0; j < nx; ++j)
    for (Eigen::Index jp = 0; jp < gx.cols(); ++jp) {
      const double cg = coef * gx(j, jp);
      if (cg == 0.0) continue;
      target.block(j * ny, jp * ny, ny, gy.cols()) += cg * gy;
    }
}

inline void symmetrize(Eigen::MatrixXd& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace detail

inline DiscreteForms assemble_forms(const ProblemSpec& problem, const SolveConfig& config) {
  problem.validate();
  if (problem.domain.kind == DomainKind::cylinder)
    fail(errc::invalid_argument, "cylinder domains are assembled per Fourier mode");

  const int l = problem.order;
  const bool buckling = problem.kind == ProblemKind::buckling;

  if (problem.domain.kind == DomainKind::interval) {
    const auto degrees = detail::resolve_degrees(config, 1);
    const int n = degrees[0];
    const int q = detail::resolve_quadrature(config, n, l);
    const Basis1D basis = build_basis_1d(l, problem.domain.lengths[0], n);
    const auto g = derivative_overlaps(basis, l, q);
    DiscreteForms forms{g[l][l], buckling ? g[1][1] : g[0][0]};
    detail::check_forms(forms);
    return forms;
  }

  if (problem.domain.aspect_ratio() > max_aspect_ratio)
    fail(errc::ill_proportioned, "aspect ratio exceeds " + std::to_string(max_aspect_ratio));

  const auto degrees = detail::resolve_degrees(config, 2);
  const int nx = degrees[0], ny = degrees[1];
  const Basis1D bx = build_basis_1d(l, problem.domain.lengths[0], nx);
  const Basis1D by = build_basis_1d(l, problem.domain.lengths[1], ny);
  const auto gx = derivative_overlaps(bx, l, detail::resolve_quadrature(config, nx, l));
  const auto gy = derivative_overlaps(by, l, detail::resolve_quadrature(config, ny, l));

  const Eigen::Index dim = static_cast<Eigen::Index>(nx) * ny;
  DiscreteForms forms{Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim)};

  // The energy of (-Laplace)^l splits binomially into 1D derivative factors:
  // even l = 2m uses the m-fold Laplacian squared, odd l = 2m+1 its gradient.
  const int m = l / 2;
  if (l % 2 == 0) {
    for (int r = 0; r <= m; ++r)
      for (int s = 0; s <= m; ++s) {
        const double coef = detail::binom(m, r) * detail::binom(m, s);
        detail::add_kron(forms.A, coef, gx[2 * r][2 * s], gy[2 * (m - r)][2 * (m - s)]);
      }
  } else {
    for (int r = 0; r <= m; ++r)
      for (int s = 0; s <= m; ++s) {
        const double coef = detail::binom(m, r) * detail::binom(m, s);
        detail::add_kron(forms.A, coef, gx[2 * r + 1][2 * s + 1], gy[2 * (m - r)][2 * (m - s)]);
        detail::add_kron(forms.A, coef, gx[2 * r][2 * s], gy[2 * (m - r) + 1][2 * (m - s) + 1]);
      }
  }
  if (buckling) {
    detail::add_kron(forms.B, 1.0, gx[1][1], gy[0][0]);
    detail::add_kron(forms.B, 1.0, gx[0][0], gy[1][1]);
  } else {
    detail::add_kron(forms.B, 1.0, gx[0][0], gy[0][0]);
  }
  detail::symmetrize(forms.A);
  detail::symmetrize(forms.B);
  detail::check_forms(forms);
  return forms;
}

}  // namespace buckspec
