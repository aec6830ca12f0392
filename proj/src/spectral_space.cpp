#include "regcalc/spectral_space.hpp"

#include "regcalc/semigroup.hpp"

#include <cmath>
#include <utility>

namespace regcalc {

namespace detail {

void require_same_size(Eigen::Index a, Eigen::Index b, const std::string& what) {
  if (a != b) {
    throw DimensionError(what + ": dimension mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
}

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m, const std::string& what) {
  if (!m.allFinite()) throw std::invalid_argument(what + ": non-finite entry");
}

}  // namespace detail

SpectralVector::SpectralVector(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)) {
  detail::require_finite(coeffs_, "SpectralVector");
}

SpectralVector SpectralVector::zero(Eigen::Index n) { return SpectralVector(Eigen::VectorXd::Zero(n)); }

SpectralVector SpectralVector::basis(Eigen::Index n, Eigen::Index index) {
  if (index < 0 || index >= n) throw DimensionError("SpectralVector::basis: index out of range");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  c[index] = 1.0;
  return SpectralVector(std::move(c));
}

TensorElement::TensorElement(Eigen::MatrixXd mat) : mat_(std::move(mat)) {
  detail::require_same_size(mat_.rows(), mat_.cols(), "TensorElement");
  detail::require_finite(mat_, "TensorElement");
}

TensorElement TensorElement::zero(Eigen::Index n) { return TensorElement(Eigen::MatrixXd::Zero(n, n)); }

bool TensorElement::is_symmetric(double rel_tol) const {
  const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
  return (mat_ - mat_.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

OperatorDiagonal::OperatorDiagonal(Eigen::VectorXd diag) : diag_(std::move(diag)) {
  detail::require_finite(diag_, "OperatorDiagonal");
}

OperatorDiagonal OperatorDiagonal::identity(Eigen::Index n) {
  return OperatorDiagonal(Eigen::VectorXd::Ones(n));
}

double inner(const SpectralVector& a, const SpectralVector& b) {
  detail::require_same_size(a.size(), b.size(), "inner");
  return a.coeffs().dot(b.coeffs());
}

TensorElement cross_tensor(const SpectralVector& a, const SpectralVector& b) {
  detail::require_same_size(a.size(), b.size(), "cross_tensor");
  return TensorElement(a.coeffs() * b.coeffs().transpose());
}

double projective_norm(const TensorElement& u) {
  if (u.dim() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(u.mat());
  return svd.singularValues().sum();
}

double trace_pair(const Eigen::MatrixXd& op, const TensorElement& u) {
  detail::require_same_size(op.rows(), u.dim(), "trace_pair");
  detail::require_same_size(op.cols(), u.dim(), "trace_pair");
  if (!u.is_symmetric()) throw std::invalid_argument("trace_pair: T_u is not self-adjoint");
  // Tr(L M) without forming the product.
  return op.cwiseProduct(u.mat().transpose()).sum();
}

double trace_pair(const OperatorDiagonal& op, const TensorElement& u) {
  detail::require_same_size(op.size(), u.dim(), "trace_pair");
  if (!u.is_symmetric()) throw std::invalid_argument("trace_pair: T_u is not self-adjoint");
  return op.diag().dot(u.mat().diagonal());
}

double nuclear_trace(const TensorElement& u) { return u.mat().trace(); }

double hs_norm(const Eigen::MatrixXd& op) { return op.norm(); }

double hs_norm(const OperatorDiagonal& op) { return op.diag().norm(); }

double dual_graph_norm(const SpectralVector& h, const DiagonalGenerator& gen) {
  detail::require_same_size(h.size(), gen.size(), "dual_graph_norm");
  return h.coeffs().cwiseProduct(gen.dual_weights()).norm();
}

}  // namespace regcalc
