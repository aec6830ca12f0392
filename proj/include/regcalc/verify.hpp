#pragma once

// Pathwise checks of the chain rule for stochastic integrals, the Ito formula
// for convolution-type processes, the Dirichlet structure X = M + (V + Y) and
// the Fukushima-type decomposition of F(t, X(t)) for C^{0,1} functions F.
//
// Classical brackets [M, N]^cl are always supplied analytically by the
// caller; estimation only enters on the side under test.

#include "regcalc/convolution.hpp"
#include "regcalc/regular_calculus.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace regcalc {

enum class Smoothness { c01, c12 };

/// F : [0,T] x H -> R with its derivatives in spectral coordinates.
struct TestFunction {
  using Scalar = std::function<double(double, const Eigen::VectorXd&)>;
  using Vector = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
  using Matrix = std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)>;

  std::string name;
  Smoothness smoothness = Smoothness::c01;
  Scalar value;
  Scalar time_derivative;  // required for C^{1,2}
  Vector gradient;
  Matrix hessian;          // required for C^{1,2}, symmetric

  bool has_hessian() const { return static_cast<bool>(hessian); }

  static TestFunction constant(Eigen::Index n, double c);
  /// F(t, x) = <x, z>
  static TestFunction linear(const SpectralVector& z);
  /// F(t, x) = <x, z>^2
  static TestFunction quadratic(const SpectralVector& z);
  /// F(t, x) = (1 + t) h(<x, z>) with h'(u) = u (u^2 + delta^2)^{-1/4}. As
  /// delta -> 0, h' tends to sign(u)|u|^{1/2}, so F is C^{0,1} but its second
  /// derivative blows up like |u|^{-1/2} near u = 0.
  static TestFunction regularized_power(const SpectralVector& z, double delta);
};

struct ItoResidual {
  Eigen::VectorXd residual;  // per node
  double sup = 0.0;
};

struct ItoOptions {
  bool include_trace_term = true;  // false gives the trace-omitted control
};

/// F(t, X(t)) - F(0, x) minus
///   int d_t F + int <A* d_x F, X> + int <d_x F, b> + (1/2) int Tr[G d_xx F]
///   + sum <d_x F(t_j, X(t_j)), sigma dW_Q(j)>,
/// G = (sigma Q^{1/2})(sigma Q^{1/2})^*, Lebesgue integrals by trapezoid and
/// the trace term through trace_pair.
ItoResidual ito_mild_residual(const MildPath& path, const TestFunction& f, const ItoOptions& options = {});

/// C(t) = int_0^t (sigma Q^{1/2})(sigma Q^{1/2})^* dr by trapezoid; equals
/// [M, M]^cl for M = x + int sigma dW_Q.
TensorCurve classical_bracket(const MildPath& path);

/// Same residual with the Hessian term written as the Stieltjes pairing
/// (1/2) int <d_xx F, dC>. Throws if tr C is not nondecreasing.
ItoResidual ito_chi_residual(const MildPath& path, const TestFunction& f, const TensorCurve& bracket);

struct StatisticSeries {
  std::string name;
  std::vector<double> values;  // one per ladder rung
};

struct DecompositionReport {
  std::vector<double> eps;              // ladder, increasing
  std::vector<double> primary;          // statistic expected to vanish as eps -> 0
  std::vector<StatisticSeries> extras;  // controls and diagnostics
  Eigen::VectorXd residual;             // residual curve at the smallest eps
  bool pass = false;                    // primary strictly decreases as eps decreases

  const std::vector<double>& extra(const std::string& name) const;
};

/// X(t) = sum <Z(t_j), dM_j> against a real martingale N: compares
/// [X, N]^eps with the Stieltjes sum sum <Z(t_j), d[M, N]^cl_j>.
/// primary: sup_t of the difference per rung.
DecompositionReport chain_rule_check(const SamplePath& z, const SamplePath& m, const ScalarPath& n,
                                     const SamplePath& bracket_mn, const EpsLadder& ladder);

/// A_F = F(t, X(t)) - R(t), R(t) = F(0, x) + sum <d_x F(t_j, X(t_j)), dM_j>.
/// primary: sup_t |[A_F, N]^eps|; extra "control": sup_t |[F(., X), N]^eps|.
DecompositionReport fukushima_orthogonality(const MildPath& path, const TestFunction& f, const ScalarPath& n,
                                            const EpsLadder& ladder);

struct DirichletOptions {
  std::vector<std::pair<int, int>> phi_panel;  // (i, j) zero-based: phi = e_i* (x) e_j*
  std::vector<ScalarPath> test_martingales;
  SpectralVector z;                            // direction of the nu0 pairing in (c)
};

/// primary: A(eps)(T) of V + Y. extras:
///   "chi_gap"      max over the panel of sup_t |[X,X]^eps_chi(phi) - [M,M]^eps_chi(phi)|
///   "chi_oracle"   max over the panel of |[X,X]^eps_chi(phi)(T) - <phi, C(T)>|
///   "weak_dirichlet" max over N of sup_t |[<V + Y, z>, N]^eps|
DecompositionReport dirichlet_structure_report(const MildPath& path, const EpsLadder& ladder,
                                               const DirichletOptions& options);

}  // namespace regcalc
