#pragma once

// Convolution-type processes
//
//   X(t) = e^{tA} x + int_0^t e^{(t-r)A} b(r) dr + int_0^t e^{(t-r)A} sigma(r) dW_Q(r)
//
// simulated with the exponential Euler scheme, together with the running
// integrals int b dr and int sigma dW_Q built from the same increments, the
// remainder Y = X - int b - int sigma dW_Q - x and the fractional extension
// X_1 = X + int e^{(t-s)A} d^- B(s).

#include "regcalc/noise.hpp"
#include "regcalc/paths.hpp"
#include "regcalc/semigroup.hpp"
#include "regcalc/spectral_space.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace regcalc {

/// b(t, x) = offset(t) + feedback .* x, with a diagonal feedback operator.
class Drift {
 public:
  using Offset = std::function<Eigen::VectorXd(double)>;

  static Drift zero(Eigen::Index n);
  static Drift constant(Eigen::VectorXd value);
  static Drift time_dependent(Eigen::Index n, Offset offset);

  Drift with_feedback(Eigen::VectorXd feedback) const;

  Eigen::Index size() const { return size_; }
  bool is_zero() const { return zero_; }
  Eigen::VectorXd operator()(double t, const Eigen::VectorXd& state) const;

 private:
  Eigen::Index size_ = 0;
  bool zero_ = true;
  Offset offset_;
  Eigen::VectorXd feedback_;
};

/// State-independent diffusion sigma(t) in L(U, H) with U = H_N. Either a
/// time-dependent diagonal operator or a constant dense matrix (e.g. rank one).
class Diffusion {
 public:
  using DiagonalFn = std::function<Eigen::VectorXd(double)>;

  static Diffusion zero(Eigen::Index n);
  static Diffusion constant_diagonal(Eigen::VectorXd diag);
  static Diffusion diagonal(Eigen::Index n, DiagonalFn fn);
  static Diffusion dense(Eigen::MatrixXd matrix);
  /// sigma u = <u, e_{noise_mode+1}> h: one scalar Brownian driver pushed along h.
  static Diffusion rank_one(const Eigen::VectorXd& direction, Eigen::Index noise_mode);

  Eigen::Index size() const { return size_; }
  Eigen::Index noise_dim() const { return noise_dim_; }
  bool is_diagonal() const { return diagonal_; }
  bool is_zero() const { return zero_; }

  /// sigma(t) dw for a noise increment dw in U.
  Eigen::VectorXd apply(double t, const Eigen::VectorXd& dw) const;
  Eigen::MatrixXd matrix(double t) const;
  /// (sigma Q^{1/2})(sigma Q^{1/2})^* at time t.
  Eigen::MatrixXd covariance(double t, const QSpectrum& q) const;

 private:
  Eigen::Index size_ = 0;
  Eigen::Index noise_dim_ = 0;
  bool diagonal_ = true;
  bool zero_ = false;
  DiagonalFn diag_;
  Eigen::MatrixXd dense_;
};

struct ConvolutionSpec {
  SpectralVector x0;
  Drift drift;
  Diffusion sigma;
  DiagonalGenerator gen;
  QSpectrum q;

  Eigen::Index dim() const { return x0.size(); }
  /// Checks that all pieces agree on N and on the noise dimension.
  void validate() const;
};

/// One simulated realization: X and the two running integrals share the grid
/// and the noise object they were built from.
struct MildPath {
  std::shared_ptr<const ConvolutionSpec> spec;
  std::shared_ptr<const NoisePath> noise;
  SamplePath X;
  SamplePath stoch_int;  // left-point sums of sigma(t_j) dW_Q
  SamplePath drift_int;  // left-point sums of b(t_j, X(t_j)) dt

  const TimeGrid& grid() const { return X.grid; }
  /// M(t) = x + int_0^t sigma dW_Q
  SamplePath martingale_part() const;
};

/// Exponential Euler per mode:
///   X(t_{j+1}) = e^{-mu dt} (X(t_j) + b(t_j, X(t_j)) dt + sigma(t_j) dW_Q(j)).
MildPath simulate_mild(std::shared_ptr<const ConvolutionSpec> spec, std::shared_ptr<const NoisePath> noise);

/// Y(t_j) = X(t_j) - drift_int(t_j) - stoch_int(t_j) - x.
SamplePath compute_remainder(const MildPath& path);

struct OndrejatResidual {
  Eigen::VectorXd residual;  // <Y(t_j), z> - trapezoid of <X, A* z>
  double max_abs = 0.0;
};

OndrejatResidual ondrejat_check(const MildPath& path, const SpectralVector& z);

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One term h_i beta_i(t) of B(t) = sum_i h_i beta_i(t).
struct FractionalMode {
  SpectralVector h;
  ScalarPath beta;
};

struct FractionalOptions {
  int levels = 3;           // dyadic levels compared, finest = path grid
  double rel_tol = 1e-3;    // Cauchy tolerance between the two finest levels
  bool strict = true;       // throw ConvergenceError when the tolerance is missed
};

struct FractionalExtension {
  SamplePath X1;
  SamplePath convolution;              // int_0^t e^{(t-s)A} d^- B(s)
  std::vector<double> cauchy_gaps;     // coarse-to-fine, relative sup-norm gaps
  bool converged = false;
};

/// Left-point Young sums sum_j e^{(t_k - t_j)A} h_i (beta_i(t_{j+1}) - beta_i(t_j)).
SamplePath fractional_convolution(const TimeGrid& grid, const DiagonalGenerator& gen,
                                  std::span<const FractionalMode> modes);

FractionalExtension simulate_fractional_extension(const MildPath& path, std::span<const FractionalMode> modes,
                                                  const FractionalOptions& options = {});

}  // namespace regcalc
