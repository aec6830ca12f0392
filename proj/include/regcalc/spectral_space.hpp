#pragma once

// Truncated separable Hilbert space H_N, its tensor square and the norms and
// pairings used by the regularization calculus. Everything is expressed in
// coefficients on a fixed orthonormal basis e_1..e_N, with H and H* identified.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace regcalc {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Element of H_N given by its basis coefficients. Entries are always finite.
class SpectralVector {
 public:
  SpectralVector() = default;
  explicit SpectralVector(Eigen::VectorXd coeffs);

  static SpectralVector zero(Eigen::Index n);
  /// Unit vector e_{index+1} (zero-based index).
  static SpectralVector basis(Eigen::Index n, Eigen::Index index);

  Eigen::Index size() const { return coeffs_.size(); }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator[](Eigen::Index k) const { return coeffs_[k]; }
  double norm() const { return coeffs_.norm(); }

 private:
  Eigen::VectorXd coeffs_;
};

/// Element of H_N (x) H_N as the coefficient matrix of e_i (x) e_j. Doubles as
/// the associated nuclear operator T_u.
class TensorElement {
 public:
  TensorElement() = default;
  explicit TensorElement(Eigen::MatrixXd mat);

  static TensorElement zero(Eigen::Index n);

  Eigen::Index dim() const { return mat_.rows(); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  bool is_symmetric(double rel_tol = 1e-12) const;

 private:
  Eigen::MatrixXd mat_;
};

/// Diagonal operator on the basis, e.g. Q, sigma or a Hessian in diagonal form.
class OperatorDiagonal {
 public:
  OperatorDiagonal() = default;
  explicit OperatorDiagonal(Eigen::VectorXd diag);

  static OperatorDiagonal identity(Eigen::Index n);

  Eigen::Index size() const { return diag_.size(); }
  const Eigen::VectorXd& diag() const { return diag_; }
  Eigen::MatrixXd to_matrix() const { return diag_.asDiagonal(); }

 private:
  Eigen::VectorXd diag_;
};

class DiagonalGenerator;

double inner(const SpectralVector& a, const SpectralVector& b);

TensorElement cross_tensor(const SpectralVector& a, const SpectralVector& b);

/// Projective norm pi(u). On a Hilbert tensor square this is the nuclear norm
/// of T_u, i.e. the sum of singular values of the coefficient matrix.
double projective_norm(const TensorElement& u);

/// <l, u> = Tr(L T_u). Requires T_u self-adjoint.
double trace_pair(const Eigen::MatrixXd& op, const TensorElement& u);
double trace_pair(const OperatorDiagonal& op, const TensorElement& u);

/// Sum of the diagonal of T_u; bounded in absolute value by projective_norm(u).
double nuclear_trace(const TensorElement& u);

/// Hilbert-Schmidt norm, hs_norm(S)^2 = Tr(S S*).
double hs_norm(const Eigen::MatrixXd& op);
double hs_norm(const OperatorDiagonal& op);

/// Norm of h in the dual of D(A*) with its graph norm:
/// |h|^2 = sum_k h_k^2 / (1 + mu_k^2). Never exceeds |h|_H.
double dual_graph_norm(const SpectralVector& h, const DiagonalGenerator& gen);

namespace detail {
void require_same_size(Eigen::Index a, Eigen::Index b, const std::string& what);
void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m, const std::string& what);
}  // namespace detail

}  // namespace regcalc
