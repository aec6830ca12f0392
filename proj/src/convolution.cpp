#include "regcalc/convolution.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace regcalc {

Drift Drift::zero(Eigen::Index n) {
  Drift d;
  d.size_ = n;
  return d;
}

Drift Drift::constant(Eigen::VectorXd value) {
  detail::require_finite(value, "Drift");
  Drift d;
  d.size_ = value.size();
  d.zero_ = value.isZero(0.0);
  d.offset_ = [v = std::move(value)](double) { return v; };
  return d;
}

Drift Drift::time_dependent(Eigen::Index n, Offset offset) {
  Drift d;
  d.size_ = n;
  d.zero_ = false;
  d.offset_ = std::move(offset);
  return d;
}

Drift Drift::with_feedback(Eigen::VectorXd feedback) const {
  detail::require_same_size(feedback.size(), size_, "Drift::with_feedback");
  detail::require_finite(feedback, "Drift::with_feedback");
  Drift d = *this;
  d.zero_ = zero_ && feedback.isZero(0.0);
  d.feedback_ = std::move(feedback);
  return d;
}

Eigen::VectorXd Drift::operator()(double t, const Eigen::VectorXd& state) const {
  Eigen::VectorXd out = offset_ ? offset_(t) : Eigen::VectorXd::Zero(size_);
  if (feedback_.size() != 0) out += feedback_.cwiseProduct(state);
  return out;
}

Diffusion Diffusion::zero(Eigen::Index n) {
  Diffusion d = constant_diagonal(Eigen::VectorXd::Zero(n));
  d.zero_ = true;
  return d;
}

Diffusion Diffusion::constant_diagonal(Eigen::VectorXd diag) {
  detail::require_finite(diag, "Diffusion");
  Diffusion d;
  d.size_ = d.noise_dim_ = diag.size();
  d.zero_ = diag.isZero(0.0);
  d.diag_ = [v = std::move(diag)](double) { return v; };
  return d;
}

Diffusion Diffusion::diagonal(Eigen::Index n, DiagonalFn fn) {
  Diffusion d;
  d.size_ = d.noise_dim_ = n;
  d.diag_ = std::move(fn);
  return d;
}

Diffusion Diffusion::dense(Eigen::MatrixXd matrix) {
  detail::require_finite(matrix, "Diffusion");
  Diffusion d;
  d.size_ = matrix.rows();
  d.noise_dim_ = matrix.cols();
  d.diagonal_ = false;
  d.zero_ = matrix.isZero(0.0);
  d.dense_ = std::move(matrix);
  return d;
}

Diffusion Diffusion::rank_one(const Eigen::VectorXd& direction, Eigen::Index noise_mode) {
  if (noise_mode < 0 || noise_mode >= direction.size()) {
    throw DimensionError("Diffusion::rank_one: noise mode out of range");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(direction.size(), direction.size());
  m.col(noise_mode) = direction;
  return dense(std::move(m));
}

Eigen::VectorXd Diffusion::apply(double t, const Eigen::VectorXd& dw) const {
  if (diagonal_) return diag_(t).cwiseProduct(dw);
  return dense_ * dw;
}

Eigen::MatrixXd Diffusion::matrix(double t) const {
  if (diagonal_) return diag_(t).asDiagonal();
  return dense_;
}

Eigen::MatrixXd Diffusion::covariance(double t, const QSpectrum& q) const {
  detail::require_same_size(q.size(), noise_dim_, "Diffusion::covariance");
  if (diagonal_) {
    const Eigen::VectorXd d = diag_(t);
    return (d.array().square() * q.lambda().array()).matrix().asDiagonal();
  }
  return dense_ * q.lambda().asDiagonal() * dense_.transpose();
}

void ConvolutionSpec::validate() const {
  const Eigen::Index n = dim();
  detail::require_same_size(drift.size(), n, "ConvolutionSpec drift");
  detail::require_same_size(sigma.size(), n, "ConvolutionSpec sigma");
  detail::require_same_size(gen.size(), n, "ConvolutionSpec generator");
  detail::require_same_size(q.size(), sigma.noise_dim(), "ConvolutionSpec Q");
}

SamplePath MildPath::martingale_part() const {
  SamplePath m = stoch_int;
  m.values.rowwise() += spec->x0.coeffs().transpose();
  return m;
}

MildPath simulate_mild(std::shared_ptr<const ConvolutionSpec> spec, std::shared_ptr<const NoisePath> noise) {
  spec->validate();
  detail::require_same_size(noise->modes(), spec->sigma.noise_dim(), "simulate_mild noise");
  const TimeGrid& grid = noise->grid();
  const Eigen::Index n = spec->dim();
  const double dt = grid.dt();
  const Eigen::VectorXd decay = spec->gen.decay_factors(dt);

  MildPath out{spec, noise, {grid, Eigen::MatrixXd(grid.nodes(), n)}, {grid, Eigen::MatrixXd(grid.nodes(), n)},
               {grid, Eigen::MatrixXd(grid.nodes(), n)}};
  Eigen::VectorXd x = spec->x0.coeffs();
  Eigen::VectorXd stoch = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd drift = Eigen::VectorXd::Zero(n);
  out.X.values.row(0) = x.transpose();
  out.stoch_int.values.row(0).setZero();
  out.drift_int.values.row(0).setZero();
  for (int j = 0; j < grid.steps(); ++j) {
    const double t = grid.time(j);
    const Eigen::VectorXd b_dt = spec->drift.is_zero() ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd(spec->drift(t, x) * dt);
    const Eigen::VectorXd s_dw = spec->sigma.apply(t, noise->increment(j).transpose());
    x = decay.cwiseProduct(x + b_dt + s_dw);
    stoch += s_dw;
    drift += b_dt;
    out.X.values.row(j + 1) = x.transpose();
    out.stoch_int.values.row(j + 1) = stoch.transpose();
    out.drift_int.values.row(j + 1) = drift.transpose();
  }
  return out;
}

SamplePath compute_remainder(const MildPath& path) {
  SamplePath y = path.X;
  y.values -= path.drift_int.values + path.stoch_int.values;
  y.values.rowwise() -= path.spec->x0.coeffs().transpose();
  return y;
}

OndrejatResidual ondrejat_check(const MildPath& path, const SpectralVector& z) {
  detail::require_same_size(z.size(), path.X.dim(), "ondrejat_check");
  const Eigen::VectorXd a_star_z = apply_generator_adjoint(z, path.spec->gen).coeffs();
  const Eigen::VectorXd lhs = compute_remainder(path).values * z.coeffs();
  const Eigen::VectorXd rhs = cumulative_trapezoid(path.X.values * a_star_z, path.grid().dt());
  OndrejatResidual out;
  out.residual = lhs - rhs;
  out.max_abs = out.residual.cwiseAbs().maxCoeff();
  return out;
}

SamplePath fractional_convolution(const TimeGrid& grid, const DiagonalGenerator& gen,
                                  std::span<const FractionalMode> modes) {
  const Eigen::Index n = gen.size();
  const Eigen::VectorXd decay = gen.decay_factors(grid.dt());
  SamplePath out{grid, Eigen::MatrixXd::Zero(grid.nodes(), n)};
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < grid.steps(); ++j) {
    for (const auto& mode : modes) {
      acc += mode.h.coeffs() * (mode.beta.values[j + 1] - mode.beta.values[j]);
    }
    // e^{(t_{j+1} - t_i)A} = e^{dt A} e^{(t_j - t_i)A}, so the left-point sum
    // advances by one semigroup step.
    acc = decay.cwiseProduct(acc);
    out.values.row(j + 1) = acc.transpose();
  }
  return out;
}

FractionalExtension simulate_fractional_extension(const MildPath& path, std::span<const FractionalMode> modes,
                                                  const FractionalOptions& options) {
  const TimeGrid& grid = path.grid();
  for (const auto& mode : modes) {
    require_same_grid(mode.beta.grid, grid, "simulate_fractional_extension");
    detail::require_same_size(mode.h.size(), path.X.dim(), "simulate_fractional_extension");
  }
  if (options.levels < 2) throw std::invalid_argument("simulate_fractional_extension: need >= 2 levels");

  FractionalExtension out;
  out.convolution = fractional_convolution(grid, path.spec->gen, modes);
  out.X1 = path.X;
  out.X1.values += out.convolution.values;

  const double scale = out.convolution.sup_norm();
  SamplePath finer = out.convolution;
  std::vector<double> gaps;
  for (int level = 1; level < options.levels; ++level) {
    const int factor = 1 << level;
    if (grid.steps() % factor != 0) throw std::invalid_argument("simulate_fractional_extension: grid not dyadic");
    std::vector<FractionalMode> coarse_modes;
    for (const auto& mode : modes) coarse_modes.push_back({mode.h, coarsen(mode.beta, factor)});
    SamplePath coarse = fractional_convolution(grid.coarsened(factor), path.spec->gen, coarse_modes);
    double gap = 0.0;
    for (int k = 0; k < coarse.grid.nodes(); ++k) {
      gap = std::max(gap, (finer.values.row(2 * k) - coarse.values.row(k)).norm());
    }
    gaps.push_back(scale > 0.0 ? gap / scale : 0.0);
    finer = std::move(coarse);
  }
  out.cauchy_gaps.assign(gaps.rbegin(), gaps.rend());
  out.converged = out.cauchy_gaps.back() < options.rel_tol;
  if (options.strict && !out.converged) {
    throw ConvergenceError("simulate_fractional_extension: Young sums did not settle (gap " +
                           std::to_string(out.cauchy_gaps.back()) + ")");
  }
  return out;
}

}  // namespace regcalc
