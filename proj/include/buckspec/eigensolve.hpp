#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "buckspec/assembly.hpp"
#include "buckspec/errors.hpp"

namespace buckspec {

inline constexpr double pivot_drop_threshold = 1e-10;

struct GeneralizedEigenSolution {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, B-orthonormal
};

// Solves A x = lambda B x for the K smallest eigenvalues. Both forms are first
// equilibrated by the inverse square root of B's diagonal (a congruence, so the
// eigenvalues are unchanged); B is then reduced by a spectral factorization,
// directions whose B-eigenvalue falls below pivot_drop_threshold times the
// largest are dropped, the rest are whitened, and the projected problem goes
// through a dense symmetric eigensolver.
inline GeneralizedEigenSolution solve_generalized(const DiscreteForms& forms, int K) {
  const Eigen::Index dim = forms.A.rows();
  if (forms.A.cols() != dim || forms.B.rows() != dim || forms.B.cols() != dim)
    fail(errc::invalid_argument, "forms must be square and of equal size");
  if (K < 1) fail(errc::invalid_argument, "eigenvalue count must be >= 1");
  if (K > dim)
    fail(errc::k_too_large, "requested " + std::to_string(K) + " eigenvalues from dimension " +
                                std::to_string(dim));

  const Eigen::VectorXd bdiag = forms.B.diagonal();
  if (!bdiag.allFinite() || !(bdiag.minCoeff() > 0.0))
    fail(errc::conditioning, "comparison form has a non-positive diagonal");
  const Eigen::VectorXd scale = bdiag.array().rsqrt();
  Eigen::MatrixXd aeq = scale.asDiagonal() * forms.A * scale.asDiagonal();
  Eigen::MatrixXd beq = scale.asDiagonal() * forms.B * scale.asDiagonal();
  aeq = 0.5 * (aeq + aeq.transpose()).eval();
  beq = 0.5 * (beq + beq.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bsolve(beq);
  if (bsolve.info() != Eigen::Success)
    fail(errc::conditioning, "comparison form eigendecomposition failed");
  const Eigen::VectorXd beig = bsolve.eigenvalues();
  const double bmax = beig(dim - 1);
  if (!(bmax > 0.0) || !std::isfinite(bmax))
    fail(errc::conditioning, "comparison form is not positive definite");

  const double cutoff = pivot_drop_threshold * bmax;
  Eigen::Index kept = 0;
  while (kept < dim && beig(dim - 1 - kept) >= cutoff) ++kept;
  if (kept == 0) fail(errc::conditioning, "comparison form has no usable directions");
  if (K > kept)
    fail(errc::k_too_large, "only " + std::to_string(kept) + " well-conditioned directions for " +
                                std::to_string(K) + " requested eigenvalues");

  Eigen::MatrixXd whiten = bsolve.eigenvectors().rightCols(kept);
  for (Eigen::Index j = 0; j < kept; ++j)
    whiten.col(j) /= std::sqrt(beig(dim - kept + j));

  Eigen::MatrixXd projected = whiten.transpose() * aeq * whiten;
  projected = 0.5 * (projected + projected.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> asolve(projected);
  if (asolve.info() != Eigen::Success)
    fail(errc::conditioning, "projected eigendecomposition failed");

  GeneralizedEigenSolution out;
  out.values = asolve.eigenvalues().head(K);
  out.vectors = scale.asDiagonal() * (whiten * asolve.eigenvectors().leftCols(K));

  // A Rayleigh-quotient pass in extended precision against the raw forms
  // tightens each value: the quotient is quadratic in the eigenvector error,
  // so the roundoff the reduction chain leaves in the values drops out.
  using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const LongMatrix araw = forms.A.cast<long double>();
  const LongMatrix braw = forms.B.cast<long double>();
  for (int j = 0; j < K; ++j) {
    const LongVector x = out.vectors.col(j).cast<long double>();
    const long double den = x.dot(braw * x);
    if (!(den > 0.0L)) continue;
    out.values(j) = static_cast<double>(x.dot(araw * x) / den);
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return out.values(a) < out.values(b); });
  GeneralizedEigenSolution sorted;
  sorted.values.resize(K);
  sorted.vectors.resize(dim, K);
  for (int j = 0; j < K; ++j) {
    sorted.values(j) = out.values(order[static_cast<std::size_t>(j)]);
    sorted.vectors.col(j) = out.vectors.col(order[static_cast<std::size_t>(j)]);
  }
  return sorted;
}

}  // namespace buckspec
