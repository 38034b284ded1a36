#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "buckspec/errors.hpp"
#include "buckspec/quadrature.hpp"

namespace buckspec {

namespace detail {

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

inline constexpr int max_basis_count = 32;

// Polynomials (x(h-x))^l * J_j(2x/h - 1), j = 0..N-1, with J_j the Jacobi
// polynomials orthogonal under the weight (1-u^2)^(2l), i.e. under the square
// of the boundary factor. The boundary factor forces the function and its
// first l-1 derivatives to vanish at both endpoints; degrees run
// 2l .. 2l+N-1, so the span at count N is the full space of such polynomials
// and grows by one degree per added function. Matching the weight to the
// factor keeps the Gram matrices well conditioned at high degree, where the
// plain Legendre parametrization of the same spaces degenerates numerically.
//
// Evaluation works in the centered variable xi = x - h/2 with
// s(xi) = (c^2 - xi^2)^l, c = h/2, which keeps endpoint cancellation mild
// enough that the derivative-vanishing checks at 1e-10 are meaningful.
class Basis1D {
 public:
  Basis1D(int l, double h, int count) : l_(l), h_(h), n_(count) {
    if (l < 1) fail(errc::invalid_argument, "basis order must be >= 1, got " + std::to_string(l));
    if (!(h > 0.0) || !std::isfinite(h))
      fail(errc::invalid_argument, "interval length must be positive and finite");
    if (count < 1)
      fail(errc::invalid_argument, "basis count must be >= 1, got " + std::to_string(count));
    if (count > max_basis_count)
      fail(errc::n_too_large, "basis count " + std::to_string(count) + " exceeds cap " +
                                  std::to_string(max_basis_count));
  }

  int order() const { return l_; }
  double length() const { return h_; }
  int count() const { return n_; }
  int max_degree() const { return 2 * l_ + n_ - 1; }

  // Row j, column p: the alpha-th derivative of basis function j at x[p].
  template <class Real>
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> derivative_values_as(
      int alpha, std::span<const Real> x) const {
    using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    if (alpha < 0) fail(errc::invalid_argument, "derivative order must be >= 0");
    const int np = static_cast<int>(x.size());
    RealMatrix out = RealMatrix::Zero(n_, np);
    const Real c = Real(0.5) * Real(h_);

    // Jacobi values and derivatives at the reference coordinate, one point
    // at a time: jac(d, j) = J_j^(d)(u). With both parameters equal to
    // a = 2l the three-term recurrence for degree n reads
    //   J_n = A_n u J_{n-1} - C_n J_{n-2},
    //   A_n = (2n+2a-1)(2n+2a) / (2n(n+2a)),
    //   C_n = (n+a-1)^2 (2n+2a) / (n(n+2a)(2n+2a-2)),
    // which at a = 0 is the Legendre recurrence.
    const int a = 2 * l_;
    RealMatrix jac(alpha + 1, n_);
    std::vector<Real> sder(alpha + 1);
    for (int p = 0; p < np; ++p) {
      const Real xi = x[p] - c;
      const Real u = xi / c;

      for (int d = 0; d <= alpha; ++d) {
        jac(d, 0) = d == 0 ? Real(1) : Real(0);
        if (n_ > 1) jac(d, 1) = d == 0 ? (a + 1) * u : (d == 1 ? Real(a + 1) : Real(0));
      }
      for (int j = 1; j + 1 < n_; ++j) {
        const int n = j + 1;
        const Real an = Real((2 * n + 2 * a - 1) * (2 * n + 2 * a)) / Real(2 * n * (n + 2 * a));
        const Real cn = Real((n + a - 1) * (n + a - 1) * (2 * n + 2 * a)) /
                        Real(n * (n + 2 * a) * (2 * n + 2 * a - 2));
        for (int d = 0; d <= alpha; ++d) {
          const Real lower = d > 0 ? d * jac(d - 1, j) : Real(0);
          jac(d, j + 1) = an * (u * jac(d, j) + lower) - cn * jac(d, j - 1);
        }
      }

      // Derivatives of s(xi) = sum_r binom(l,r) (c^2)^(l-r) (-1)^r xi^(2r).
      for (int m = 0; m <= alpha; ++m) {
        Real acc = 0;
        for (int r = (m + 1) / 2; r <= l_; ++r) {
          Real fall = 1;
          for (int t = 0; t < m; ++t) fall *= (2 * r - t);
          if (fall == Real(0)) continue;
          const Real coeff =
              Real(detail::binom(l_, r)) * std::pow(c * c, l_ - r) * ((r % 2) ? Real(-1) : Real(1));
          acc += coeff * fall * std::pow(xi, 2 * r - m);
        }
        sder[m] = acc;
      }

      for (int j = 0; j < n_; ++j) {
        Real v = 0;
        Real cpow = std::pow(c, -Real(alpha));
        for (int m = 0; m <= alpha; ++m) {
          v += Real(detail::binom(alpha, m)) * sder[m] * jac(alpha - m, j) * cpow;
          cpow *= c;
        }
        out(j, p) = v;
      }
    }
    return out;
  }

  Eigen::MatrixXd derivative_values(int alpha, std::span<const double> x) const {
    return derivative_values_as<double>(alpha, x);
  }

 private:
  int l_;
  double h_;
  int n_;
};

inline Basis1D build_basis_1d(int l, double h, int count) { return Basis1D(l, h, count); }

// overlaps[a][b](j,k) = integral over (0,h) of phi_j^(a) phi_k^(b),
// computed with a Gauss-Legendre rule of quad_points mapped to (0,h).
// Nodes, basis values, and the accumulation all run in extended precision;
// the blocks are rounded to double only once fully formed, which keeps the
// entries accurate to their own last bits even where the integrands cancel.
inline std::vector<std::vector<Eigen::MatrixXd>> derivative_overlaps(const Basis1D& basis,
                                                                     int max_order,
                                                                     int quad_points) {
  using Real = long double;
  using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  const BasicQuadratureRule<Real> rule = gauss_legendre_rule<Real>(quad_points);
  const Real c = Real(0.5) * Real(basis.length());
  std::vector<Real> x(rule.points.size());
  Eigen::Matrix<Real, Eigen::Dynamic, 1> w(rule.size());
  for (int p = 0; p < rule.size(); ++p) {
    x[p] = c + c * rule.points[p];
    w[p] = c * rule.weights[p];
  }

  std::vector<RealMatrix> vals(max_order + 1);
  for (int a = 0; a <= max_order; ++a)
    vals[a] = basis.derivative_values_as<Real>(a, std::span<const Real>(x));

  std::vector<std::vector<Eigen::MatrixXd>> overlaps(
      max_order + 1, std::vector<Eigen::MatrixXd>(max_order + 1));
  for (int a = 0; a <= max_order; ++a) {
    for (int b = 0; b <= a; ++b) {
      RealMatrix g = vals[a] * w.asDiagonal() * vals[b].transpose();
      if (a == b) g = Real(0.5) * (g + g.transpose()).eval();
      overlaps[a][b] = g.cast<double>();
      if (a != b) overlaps[b][a] = overlaps[a][b].transpose();
    }
  }
  return overlaps;
}

}  // namespace buckspec
