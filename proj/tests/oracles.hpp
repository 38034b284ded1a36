#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Critical loads of the clamped rod under end compression. The characteristic
// equation factors into sin(mu/2) = 0 and tan(mu/2) = mu/2, so the values
// interleave (2k pi)^2 with (2 x_k)^2 where tan(x_k) = x_k on
// (k pi, k pi + pi/2); rescaling to length h divides by h^2.
inline std::vector<double> rod_buckling_values(int count, double h = 1.0) {
  std::vector<double> values;
  const double pi = std::acos(-1.0);
  for (int k = 1; static_cast<int>(values.size()) < count; ++k) {
    values.push_back(std::pow(2.0 * k * pi / h, 2));
    if (static_cast<int>(values.size()) == count) break;
    const double x = bisect([](double t) { return std::sin(t) - t * std::cos(t); },
                            k * pi + 1e-9, k * pi + 0.5 * pi);
    values.push_back(std::pow(2.0 * x / h, 2));
  }
  return values;
}

// Vibration values of the clamped-clamped unit beam: beta^4 with
// cos(beta) cosh(beta) = 1, one root per (k pi, (k+1) pi).
inline std::vector<double> beam_clamped_values(int count) {
  std::vector<double> values;
  const double pi = std::acos(-1.0);
  for (int k = 1; static_cast<int>(values.size()) < count; ++k) {
    const double beta = bisect([](double b) { return std::cos(b) * std::cosh(b) - 1.0; },
                               k * pi, (k + 1) * pi);
    values.push_back(std::pow(beta, 4));
  }
  return values;
}

// Smallest buckling load of the clamped unit square on an n-by-n grid:
// 13-point bilaplacian (ghost rows mirrored across the clamped walls) against
// the 5-point laplacian, smallest eigenvalue by inverse power iteration.
inline double square_buckling_fd(int n) {
  const int m = n - 1;
  const double h = 1.0 / n;
  const auto id = [m](int i, int j) { return (i - 1) * m + (j - 1); };

  std::vector<Eigen::Triplet<double>> ta, tb;
  ta.reserve(static_cast<std::size_t>(m) * m * 13);
  tb.reserve(static_cast<std::size_t>(m) * m * 5);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      const int row = id(i, j);
      double center = 20.0;
      if (i == 1) center += 1.0;
      if (i == m) center += 1.0;
      if (j == 1) center += 1.0;
      if (j == m) center += 1.0;
      ta.emplace_back(row, row, center);
      const auto add = [&](int ii, int jj, double w) {
        if (ii >= 1 && ii <= m && jj >= 1 && jj <= m) ta.emplace_back(row, id(ii, jj), w);
      };
      add(i - 1, j, -8.0);
      add(i + 1, j, -8.0);
      add(i, j - 1, -8.0);
      add(i, j + 1, -8.0);
      add(i - 1, j - 1, 2.0);
      add(i - 1, j + 1, 2.0);
      add(i + 1, j - 1, 2.0);
      add(i + 1, j + 1, 2.0);
      add(i - 2, j, 1.0);
      add(i + 2, j, 1.0);
      add(i, j - 2, 1.0);
      add(i, j + 2, 1.0);

      tb.emplace_back(row, row, 4.0);
      const auto addb = [&](int ii, int jj) {
        if (ii >= 1 && ii <= m && jj >= 1 && jj <= m) tb.emplace_back(row, id(ii, jj), -1.0);
      };
      addb(i - 1, j);
      addb(i + 1, j);
      addb(i, j - 1);
      addb(i, j + 1);
    }

  Eigen::SparseMatrix<double> A(m * m, m * m), B(m * m, m * m);
  A.setFromTriplets(ta.begin(), ta.end());
  B.setFromTriplets(tb.begin(), tb.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(A);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(m * m);
  x /= x.norm();
  double lambda = 0.0;
  for (int iter = 0; iter < 5000; ++iter) {
    Eigen::VectorXd y = factor.solve(B * x);
    y /= y.norm();
    const double next = y.dot(A * y) / y.dot(B * y);
    const bool settled = iter > 0 && std::abs(next - lambda) <= 1e-13 * next;
    lambda = next;
    x = y;
    if (settled) break;
  }
  return lambda / (h * h);
}

// Second-order extrapolation over meshes n and 2n.
inline double square_buckling_richardson(int n) {
  return (4.0 * square_buckling_fd(2 * n) - square_buckling_fd(n)) / 3.0;
}

}  // namespace oracles
