#pragma once

// epsilon-regularized estimators of stochastic calculus via regularization.
//
// For a regularization step eps = m * dt every estimator is the left-Riemann
// discretization of an integral of the form
//
//   int_0^t  G( X(r), (Y(r + eps) - Y(r)) / eps ) dr,
//
// evaluated at every grid node t_k as  sum_{j < k} dt * G(X(t_j), dY_eps(t_j)),
// with Y(r + eps) read through the boundary extension Y(t) = Y(T) for t >= T.
// Every curve is 0 at t = 0 and every estimator is bilinear in (X, Y).

#include "regcalc/noise.hpp"
#include "regcalc/paths.hpp"
#include "regcalc/semigroup.hpp"
#include "regcalc/spectral_space.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace regcalc {

/// Regularization step as an integer number of grid steps.
class Epsilon {
 public:
  static Epsilon steps(int m);
  /// Throws unless eps is an exact positive multiple of grid.dt().
  static Epsilon from_value(const TimeGrid& grid, double eps);

  int steps() const { return steps_; }
  double value(const TimeGrid& grid) const { return steps_ * grid.dt(); }

 private:
  explicit Epsilon(int m) : steps_(m) {}
  int steps_;
};

/// Decreasing-to-zero sequence of regularization steps, stored by increasing
/// multiple. Every rung is at least 4 grid steps and below T / 4.
class EpsLadder {
 public:
  EpsLadder(const TimeGrid& grid, std::vector<int> multiples);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<int>& multiples() const { return multiples_; }
  std::size_t size() const { return multiples_.size(); }
  Epsilon rung(std::size_t i) const { return Epsilon::steps(multiples_[i]); }
  double eps(std::size_t i) const { return multiples_[i] * grid_.dt(); }
  std::vector<double> values() const;

  /// Same multiples on another grid (fixed eps-to-dt ratio).
  EpsLadder on_grid(const TimeGrid& grid) const { return EpsLadder(grid, multiples_); }

 private:
  TimeGrid grid_;
  std::vector<int> multiples_;
};

// ---- forward integrals --------------------------------------------------------

/// int_0^t X(r) (Y(r+eps) - Y(r)) / eps dr for real X and Y.
Eigen::VectorXd forward_integral_eps(const ScalarPath& x, const ScalarPath& y, Epsilon eps);
/// Real integrand against an H-valued integrator; H-valued result.
SamplePath forward_integral_eps(const ScalarPath& x, const SamplePath& y, Epsilon eps);
/// <X(r), (Y(r+eps) - Y(r)) / eps> for H-valued X and Y (X read in H* = H).
Eigen::VectorXd forward_integral_eps(const SamplePath& x, const SamplePath& y, Epsilon eps);
/// Diagonal-operator-valued integrand; H-valued result.
SamplePath forward_integral_eps(const OperatorPath& x, const SamplePath& y, Epsilon eps);

/// Discrete Ito sums sum_{j < k} X(t_j) (M(t_{j+1}) - M(t_j)).
Eigen::VectorXd ito_sum(const ScalarPath& x, const ScalarPath& m);
Eigen::VectorXd ito_sum(const SamplePath& x, const SamplePath& m);

// ---- covariations ----------------------------------------------------------------

/// (1/eps) int_0^t (X(r+eps) - X(r)) (Y(r+eps) - Y(r)) dr
Eigen::VectorXd covariation_eps(const ScalarPath& x, const ScalarPath& y, Epsilon eps);

enum class QvNorm { hilbert, dual_graph };

/// (1/eps) int_0^t |X(r+eps) - X(r)|^2 dr in |.|_H or in the dual graph norm.
/// `gen` is only read for QvNorm::dual_graph.
Eigen::VectorXd scalar_qv_eps(const SamplePath& x, Epsilon eps, QvNorm norm, const DiagonalGenerator* gen = nullptr);

/// (1/eps) int_0^t (X(r+eps) - X(r)) (x) (Y(r+eps) - Y(r)) dr
TensorCurve tensor_cov_eps(const SamplePath& x, const SamplePath& y, Epsilon eps);
/// Final value of tensor_cov_eps without storing the curve.
TensorElement tensor_cov_eps_final(const SamplePath& x, const SamplePath& y, Epsilon eps);

/// [X, Y]^eps_chi(phi): the increment tensor paired with phi, i.e.
/// (1/eps) int_0^t sum_{ij} phi_ij dX_i dY_j dr.
Eigen::VectorXd chi_cov_eps(const SamplePath& x, const SamplePath& y, const Eigen::MatrixXd& phi, Epsilon eps);

/// A(eps) curve: (1/eps) int_0^t |dX|_{nu0*} |dY|_{nu0*} dr with nu0 = D(A*).
/// The chi-bar-star norm of a rank-one tensor a (x) b factorizes into the
/// product of the dual graph norms.
Eigen::VectorXd a_eps_statistic(const SamplePath& x, const SamplePath& y, Epsilon eps, const DiagonalGenerator& gen);

// ---- Young integrals -------------------------------------------------------------

struct YoungOptions {
  int levels = 4;            // dyadic refinement levels, finest = path grid
  double rel_tol = 1e-3;     // Cauchy tolerance between the two finest levels
  bool strict = true;        // throw ConvergenceError on a missed tolerance
  int holder_lags = 6;       // dyadic lags used by the Hoelder gate
};

struct YoungResult {
  double value = 0.0;              // finest-level left-Riemann sum
  std::vector<double> level_values;  // coarse-to-fine
  double cauchy_gap = 0.0;         // relative gap between the two finest levels
  double holder_x = 1.0;
  double holder_y = 1.0;
  bool converged = false;
};

/// int_0^T X d^y Y by left-Riemann sums on dyadic sub-grids of the path grid.
/// Refuses paths whose estimated Hoelder exponents do not sum above 1;
/// constant paths count as exponent 1.
YoungResult young_integral(const ScalarPath& x, const ScalarPath& y, const YoungOptions& options = {});

// ---- ladder summaries --------------------------------------------------------------

/// Median over paths of a per-path statistic, one entry per rung.
struct LadderSummary {
  std::vector<double> eps;
  std::vector<double> median;
  double fitted_rate = 0.0;  // slope of log median against log eps
  bool monotone = false;     // strictly decreasing as eps decreases
};

/// per_path[p][i] is the statistic of path p at rung i.
LadderSummary summarize_ladder(std::span<const double> eps, const std::vector<std::vector<double>>& per_path);

double median(std::vector<double> values);
/// Least-squares slope of log y against log x.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace regcalc
