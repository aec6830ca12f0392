#pragma once

// Diagonal self-adjoint generator A (A e_k = -mu_k e_k) and the C0-semigroup
// e^{tA} it generates. Since A = A*, D(A*) = D(A) and both carry the graph norm
// |x|^2 + |A* x|^2.

#include "regcalc/spectral_space.hpp"

#include <Eigen/Dense>

namespace regcalc {

class DiagonalGenerator {
 public:
  DiagonalGenerator() = default;
  /// mu_k >= 0 and finite; nondecreasing order is conventional, not enforced.
  explicit DiagonalGenerator(Eigen::VectorXd mu);

  /// Dirichlet Laplacian on (0,1) in its sine basis: mu_k = (k pi)^2.
  static DiagonalGenerator dirichlet_laplacian(Eigen::Index n);
  static DiagonalGenerator zero(Eigen::Index n);

  Eigen::Index size() const { return mu_.size(); }
  const Eigen::VectorXd& mu() const { return mu_; }

  /// Coefficients e^{-mu_k t}.
  Eigen::VectorXd decay_factors(double t) const;
  /// Weights (1 + mu_k^2)^{-1/2} of the dual graph norm.
  Eigen::VectorXd dual_weights() const;

 private:
  Eigen::VectorXd mu_;
};

SpectralVector apply_semigroup(double t, const SpectralVector& v, const DiagonalGenerator& gen);

SpectralVector apply_generator_adjoint(const SpectralVector& v, const DiagonalGenerator& gen);

double graph_norm(const SpectralVector& v, const DiagonalGenerator& gen);

}  // namespace regcalc
