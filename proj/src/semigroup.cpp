#include "regcalc/semigroup.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace regcalc {

DiagonalGenerator::DiagonalGenerator(Eigen::VectorXd mu) : mu_(std::move(mu)) {
  detail::require_finite(mu_, "DiagonalGenerator");
  if ((mu_.array() < 0.0).any()) throw std::invalid_argument("DiagonalGenerator: mu_k must be >= 0");
}

DiagonalGenerator DiagonalGenerator::dirichlet_laplacian(Eigen::Index n) {
  Eigen::VectorXd mu(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double kpi = static_cast<double>(k + 1) * std::numbers::pi;
    mu[k] = kpi * kpi;
  }
  return DiagonalGenerator(std::move(mu));
}

DiagonalGenerator DiagonalGenerator::zero(Eigen::Index n) { return DiagonalGenerator(Eigen::VectorXd::Zero(n)); }

Eigen::VectorXd DiagonalGenerator::decay_factors(double t) const { return (-t * mu_.array()).exp(); }

Eigen::VectorXd DiagonalGenerator::dual_weights() const {
  return (1.0 + mu_.array().square()).rsqrt();
}

SpectralVector apply_semigroup(double t, const SpectralVector& v, const DiagonalGenerator& gen) {
  if (!(t >= 0.0)) throw std::domain_error("apply_semigroup: t must be >= 0");
  detail::require_same_size(v.size(), gen.size(), "apply_semigroup");
  return SpectralVector(gen.decay_factors(t).cwiseProduct(v.coeffs()));
}

SpectralVector apply_generator_adjoint(const SpectralVector& v, const DiagonalGenerator& gen) {
  detail::require_same_size(v.size(), gen.size(), "apply_generator_adjoint");
  return SpectralVector(-gen.mu().cwiseProduct(v.coeffs()));
}

double graph_norm(const SpectralVector& v, const DiagonalGenerator& gen) {
  detail::require_same_size(v.size(), gen.size(), "graph_norm");
  return std::sqrt((v.coeffs().array().square() * (1.0 + gen.mu().array().square())).sum());
}

}  // namespace regcalc
