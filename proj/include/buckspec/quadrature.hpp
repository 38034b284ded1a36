#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "buckspec/errors.hpp"

namespace buckspec {

// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2q-1.
template <class Real>
struct BasicQuadratureRule {
  std::vector<Real> points;
  std::vector<Real> weights;

  int size() const { return static_cast<int>(points.size()); }
};

using QuadratureRule = BasicQuadratureRule<double>;

template <class Real>
BasicQuadratureRule<Real> gauss_legendre_rule(int q) {
  if (q < 1) fail(errc::invalid_argument, "quadrature needs >= 1 point, got " + std::to_string(q));
  BasicQuadratureRule<Real> rule;
  rule.points.resize(q);
  rule.weights.resize(q);
  const Real tol = 8 * std::numeric_limits<Real>::epsilon();
  // Newton iteration from the Chebyshev-angle initial guess; nodes come out
  // symmetric, so only the lower half is computed and the rest mirrored.
  for (int i = 0; i < (q + 1) / 2; ++i) {
    Real x = std::cos(Real(std::numbers::pi) * (i + Real(0.75)) / (q + Real(0.5)));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (int j = 1; j < q; ++j) {
        const Real p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < tol) {
        p0 = 1;
        p1 = x;
        for (int j = 1; j < q; ++j) {
          const Real p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
          p0 = p1;
          p1 = p2;
        }
        dp = q * (x * p1 - p0) / (x * x - 1);
        break;
      }
    }
    const Real w = 2 / ((1 - x * x) * dp * dp);
    rule.points[i] = -x;
    rule.weights[i] = w;
    rule.points[q - 1 - i] = x;
    rule.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) rule.points[q / 2] = 0;
  return rule;
}

inline QuadratureRule gauss_legendre(int q) { return gauss_legendre_rule<double>(q); }

}  // namespace buckspec
