#include <doctest.h>

#include "regcalc/semigroup.hpp"

#include <cmath>
#include <numbers>

using namespace regcalc;

TEST_CASE("semigroup at t = 0 is the identity") {
  const SpectralVector v(Eigen::Vector3d(1, -2, 0.5));
  const auto gen = DiagonalGenerator::dirichlet_laplacian(3);
  CHECK(apply_semigroup(0.0, v, gen).coeffs() == v.coeffs());
  CHECK_THROWS_AS(apply_semigroup(-0.1, v, gen), std::domain_error);
}

TEST_CASE("heat semigroup on e_1 against a series oracle") {
  const auto gen = DiagonalGenerator::dirichlet_laplacian(1);
  const double x = -0.1 * std::numbers::pi * std::numbers::pi;
  double series = 0.0, term = 1.0;
  for (int n = 1; n < 60; ++n) {
    series += term;
    term *= x / n;
  }
  const SpectralVector out = apply_semigroup(0.1, SpectralVector::basis(1, 0), gen);
  CHECK(out[0] == doctest::Approx(series).epsilon(1e-14));
  CHECK(out[0] == doctest::Approx(0.372708).epsilon(1e-6));
}

TEST_CASE("semigroup law") {
  const auto gen = DiagonalGenerator::dirichlet_laplacian(6);
  const SpectralVector v(Eigen::VectorXd::LinSpaced(6, 1.0, -1.0));
  const auto lhs = apply_semigroup(0.03, apply_semigroup(0.02, v, gen), gen);
  const auto rhs = apply_semigroup(0.05, v, gen);
  CHECK((lhs.coeffs() - rhs.coeffs()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("generator adjoint and graph norm") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const auto gen = DiagonalGenerator::dirichlet_laplacian(2);
  const SpectralVector e1 = SpectralVector::basis(2, 0);
  CHECK(apply_generator_adjoint(e1, gen)[0] == doctest::Approx(-pi2));
  CHECK(graph_norm(e1, gen) == doctest::Approx(std::sqrt(1 + pi2 * pi2)));
  const SpectralVector v(Eigen::Vector2d(3, 4));
  CHECK(apply_generator_adjoint(v, DiagonalGenerator::zero(2)).coeffs().isZero());
  CHECK(graph_norm(v, DiagonalGenerator::zero(2)) == doctest::Approx(5.0));
  CHECK(graph_norm(SpectralVector::zero(2), gen) == 0.0);
}

TEST_CASE("generator rejects negative or non-finite eigenvalues") {
  CHECK_THROWS(DiagonalGenerator(Eigen::Vector2d(1.0, -1.0)));
  CHECK_THROWS(DiagonalGenerator(Eigen::Vector2d(1.0, NAN)));
}
