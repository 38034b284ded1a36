#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "buckspec/buckspec.hpp"
#include "test_util.hpp"

using namespace buckspec;
using Catch::Approx;
using testutil::code_of;

namespace {

DiscreteForms make_forms(std::initializer_list<double> a_diag,
                         std::initializer_list<double> b_diag) {
  const Eigen::Index n = static_cast<Eigen::Index>(a_diag.size());
  DiscreteForms forms{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  Eigen::Index i = 0;
  for (double v : a_diag) forms.A(i, i) = v, ++i;
  i = 0;
  for (double v : b_diag) forms.B(i, i) = v, ++i;
  return forms;
}

}  // namespace

TEST_CASE("diagonal pairs solve to their ratios") {
  const auto identity = make_forms({2.0, 8.0}, {1.0, 1.0});
  const GeneralizedEigenSolution s1 = solve_generalized(identity, 2);
  REQUIRE(s1.values(0) == Approx(2.0).epsilon(1e-13));
  REQUIRE(s1.values(1) == Approx(8.0).epsilon(1e-13));

  const auto scaled = make_forms({2.0, 8.0}, {2.0, 2.0});
  const GeneralizedEigenSolution s2 = solve_generalized(scaled, 2);
  REQUIRE(s2.values(0) == Approx(1.0).epsilon(1e-13));
  REQUIRE(s2.values(1) == Approx(4.0).epsilon(1e-13));
}

TEST_CASE("coupled two-by-two solves to the closed form") {
  DiscreteForms forms = make_forms({2.0, 2.0}, {1.0, 1.0});
  forms.A(0, 1) = forms.A(1, 0) = 1.0;
  const GeneralizedEigenSolution s = solve_generalized(forms, 2);
  REQUIRE(s.values(0) == Approx(1.0).epsilon(1e-13));
  REQUIRE(s.values(1) == Approx(3.0).epsilon(1e-13));
}

TEST_CASE("eigenvectors come back B-orthonormal") {
  const ProblemSpec problem{2, ProblemKind::buckling, DomainSpec::interval(1.0)};
  SolveConfig config;
  config.degrees = {10};
  const DiscreteForms forms = assemble_forms(problem, config);
  const GeneralizedEigenSolution s = solve_generalized(forms, 4);
  const Eigen::MatrixXd gram = s.vectors.transpose() * forms.B * s.vectors;
  REQUIRE((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
  for (int i = 1; i < 4; ++i) REQUIRE(s.values(i) >= s.values(i - 1));
}

TEST_CASE("requesting more eigenvalues than directions fails") {
  const auto forms = make_forms({2.0, 8.0}, {1.0, 1.0});
  REQUIRE(code_of([&] { solve_generalized(forms, 3); }) == errc::k_too_large);
  REQUIRE(code_of([&] { solve_generalized(forms, 0); }) == errc::invalid_argument);
}

TEST_CASE("extreme diagonal spread survives equilibration") {
  const auto forms = make_forms({2.0, 8.0}, {1.0, 1e-30});
  const GeneralizedEigenSolution s = solve_generalized(forms, 2);
  REQUIRE(s.values(0) == Approx(2.0).epsilon(1e-13));
  REQUIRE(s.values(1) == Approx(8e30).epsilon(1e-13));
}

TEST_CASE("rank-deficient comparison directions are dropped") {
  DiscreteForms forms = make_forms({1.0, 1.0}, {1.0, 1.0});
  forms.B(0, 1) = forms.B(1, 0) = 1.0;
  REQUIRE(code_of([&] { solve_generalized(forms, 2); }) == errc::k_too_large);
  const GeneralizedEigenSolution s = solve_generalized(forms, 1);
  REQUIRE(s.values(0) == Approx(0.5).epsilon(1e-13));
}

TEST_CASE("indefinite comparison form is rejected") {
  const auto forms = make_forms({1.0, 1.0}, {-1.0, -2.0});
  REQUIRE(code_of([&] { solve_generalized(forms, 1); }) == errc::conditioning);
  DiscreteForms mismatched{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)};
  REQUIRE(code_of([&] { solve_generalized(mismatched, 1); }) == errc::invalid_argument);
}
