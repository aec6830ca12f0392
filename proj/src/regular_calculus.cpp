#include "regcalc/regular_calculus.hpp"

#include "regcalc/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace regcalc {

namespace {

void check_eps(const TimeGrid& grid, Epsilon eps) {
  if (eps.steps() > grid.steps()) throw std::invalid_argument("epsilon exceeds the horizon");
}

/// Rows j = 0..J-1 hold Y(t_j + eps) - Y(t_j) under the boundary extension.
Eigen::MatrixXd forward_increments(const SamplePath& y, int m) {
  const int steps = y.grid.steps();
  Eigen::MatrixXd d(steps, y.dim());
  for (int j = 0; j < steps; ++j) d.row(j) = y.values.row(std::min(j + m, steps)) - y.values.row(j);
  return d;
}

Eigen::VectorXd forward_increments(const ScalarPath& y, int m) {
  const int steps = y.grid.steps();
  Eigen::VectorXd d(steps);
  for (int j = 0; j < steps; ++j) d[j] = y.values[std::min(j + m, steps)] - y.values[j];
  return d;
}

/// Cumulative left-Riemann sums of per-step densities: out[k] = scale * sum_{j<k} f[j].
Eigen::VectorXd accumulate(const Eigen::VectorXd& density, double scale) {
  Eigen::VectorXd out(density.size() + 1);
  out[0] = 0.0;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < density.size(); ++j) {
    acc += scale * density[j];
    out[j + 1] = acc;
  }
  return out;
}

Eigen::MatrixXd accumulate_rows(const Eigen::MatrixXd& density, double scale) {
  Eigen::MatrixXd out(density.rows() + 1, density.cols());
  out.row(0).setZero();
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(density.cols());
  for (Eigen::Index j = 0; j < density.rows(); ++j) {
    acc += scale * density.row(j);
    out.row(j + 1) = acc;
  }
  return out;
}

double left_riemann(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int stride) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j + stride < y.size(); j += stride) acc += x[j] * (y[j + stride] - y[j]);
  return acc;
}

double gated_holder(const ScalarPath& p, int lag_count) {
  const auto lags = dyadic_lags(lag_count);
  try {
    return std::min(1.0, holder_exponent_estimate(p, lags));
  } catch (const std::invalid_argument&) {
    if (p.values.cwiseAbs().maxCoeff() == 0.0 ||
        (p.values.array() - p.values[0]).abs().maxCoeff() == 0.0) {
      return 1.0;  // constant path
    }
    throw;
  }
}

}  // namespace

Epsilon Epsilon::steps(int m) {
  if (m < 1) throw std::invalid_argument("Epsilon: step multiple must be >= 1");
  return Epsilon(m);
}

Epsilon Epsilon::from_value(const TimeGrid& grid, double eps) {
  const double ratio = eps / grid.dt();
  const double m = std::round(ratio);
  if (!(eps > 0.0) || std::abs(ratio - m) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("Epsilon: " + std::to_string(eps) + " is not a multiple of dt");
  }
  return Epsilon(static_cast<int>(m));
}

EpsLadder::EpsLadder(const TimeGrid& grid, std::vector<int> multiples) : grid_(grid), multiples_(std::move(multiples)) {
  if (multiples_.size() < 3) throw std::invalid_argument("EpsLadder: need at least 3 rungs");
  for (std::size_t i = 0; i < multiples_.size(); ++i) {
    if (multiples_[i] < 4) throw std::invalid_argument("EpsLadder: multiples must be >= 4");
    if (i > 0 && multiples_[i] <= multiples_[i - 1]) {
      throw std::invalid_argument("EpsLadder: multiples must be strictly increasing");
    }
    if (!(multiples_[i] * grid_.dt() < grid_.horizon() / 4.0)) {
      throw std::invalid_argument("EpsLadder: every epsilon must be below T/4");
    }
  }
}

std::vector<double> EpsLadder::values() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(eps(i));
  return out;
}

Eigen::VectorXd forward_integral_eps(const ScalarPath& x, const ScalarPath& y, Epsilon eps) {
  require_same_grid(x.grid, y.grid, "forward_integral_eps");
  check_eps(y.grid, eps);
  const Eigen::VectorXd d = forward_increments(y, eps.steps());
  return accumulate(x.values.head(d.size()).cwiseProduct(d), y.grid.dt() / eps.value(y.grid));
}

SamplePath forward_integral_eps(const ScalarPath& x, const SamplePath& y, Epsilon eps) {
  require_same_grid(x.grid, y.grid, "forward_integral_eps");
  check_eps(y.grid, eps);
  const Eigen::MatrixXd d = forward_increments(y, eps.steps());
  const Eigen::MatrixXd density = d.array().colwise() * x.values.head(d.rows()).array();
  return {y.grid, accumulate_rows(density, y.grid.dt() / eps.value(y.grid))};
}

Eigen::VectorXd forward_integral_eps(const SamplePath& x, const SamplePath& y, Epsilon eps) {
  require_same_grid(x.grid, y.grid, "forward_integral_eps");
  detail::require_same_size(x.dim(), y.dim(), "forward_integral_eps");
  check_eps(y.grid, eps);
  const Eigen::MatrixXd d = forward_increments(y, eps.steps());
  const Eigen::VectorXd density = x.values.topRows(d.rows()).cwiseProduct(d).rowwise().sum();
  return accumulate(density, y.grid.dt() / eps.value(y.grid));
}

SamplePath forward_integral_eps(const OperatorPath& x, const SamplePath& y, Epsilon eps) {
  require_same_grid(x.grid, y.grid, "forward_integral_eps");
  detail::require_same_size(x.diag.cols(), y.dim(), "forward_integral_eps");
  check_eps(y.grid, eps);
  const Eigen::MatrixXd d = forward_increments(y, eps.steps());
  return {y.grid, accumulate_rows(x.diag.topRows(d.rows()).cwiseProduct(d), y.grid.dt() / eps.value(y.grid))};
}

Eigen::VectorXd ito_sum(const ScalarPath& x, const ScalarPath& m) {
  require_same_grid(x.grid, m.grid, "ito_sum");
  const int steps = m.grid.steps();
  const Eigen::VectorXd dm = m.values.tail(steps) - m.values.head(steps);
  return accumulate(x.values.head(steps).cwiseProduct(dm), 1.0);
}

Eigen::VectorXd ito_sum(const SamplePath& x, const SamplePath& m) {
  require_same_grid(x.grid, m.grid, "ito_sum");
  detail::require_same_size(x.dim(), m.dim(), "ito_sum");
  const int steps = m.grid.steps();
  const Eigen::MatrixXd dm = m.values.bottomRows(steps) - m.values.topRows(steps);
  return accumulate(x.values.topRows(steps).cwiseProduct(dm).rowwise().sum(), 1.0);
}

Eigen::VectorXd covariation_eps(const ScalarPath& x, const ScalarPath& y, Epsilon eps) {
  require_same_grid(x.grid, y.grid, "covariation_eps");
  check_eps(y.grid, eps);
  const Eigen::VectorXd dx = forward_increments(x, eps.steps());
  const Eigen::VectorXd dy = forward_increments(y, eps.steps());
  return accumulate(dx.cwiseProduct(dy), y.grid.dt() / eps.value(y.grid));
}

Eigen::VectorXd scalar_qv_eps(const SamplePath& x, Epsilon eps, QvNorm norm, const DiagonalGenerator* gen) {
  check_eps(x.grid, eps);
  Eigen::MatrixXd d = forward_increments(x, eps.steps());
  if (norm == QvNorm::dual_graph) {
    if (gen == nullptr) throw std::invalid_argument("scalar_qv_eps: dual graph norm needs a generator");
    detail::require_same_size(gen->size(), x.dim(), "scalar_qv_eps");
    d = d * gen->dual_weights().asDiagonal();
  }
  return accumulate(d.rowwise().squaredNorm(), x.grid.dt() / eps.value(x.grid));
}

TensorCurve tensor_cov_eps(const SamplePath& x, const SamplePath& y, Epsilon eps) {
  require_same_grid(x.grid, y.grid, "tensor_cov_eps");
  detail::require_same_size(x.dim(), y.dim(), "tensor_cov_eps");
  check_eps(y.grid, eps);
  const Eigen::MatrixXd dx = forward_increments(x, eps.steps());
  const Eigen::MatrixXd dy = forward_increments(y, eps.steps());
  const double scale = y.grid.dt() / eps.value(y.grid);
  TensorCurve out{y.grid, {}};
  out.values.reserve(static_cast<std::size_t>(y.grid.nodes()));
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(x.dim(), x.dim());
  out.values.push_back(acc);
  for (Eigen::Index j = 0; j < dx.rows(); ++j) {
    acc.noalias() += scale * dx.row(j).transpose() * dy.row(j);
    out.values.push_back(acc);
  }
  return out;
}

TensorElement tensor_cov_eps_final(const SamplePath& x, const SamplePath& y, Epsilon eps) {
  require_same_grid(x.grid, y.grid, "tensor_cov_eps");
  detail::require_same_size(x.dim(), y.dim(), "tensor_cov_eps");
  check_eps(y.grid, eps);
  const Eigen::MatrixXd dx = forward_increments(x, eps.steps());
  const Eigen::MatrixXd dy = forward_increments(y, eps.steps());
  return TensorElement((y.grid.dt() / eps.value(y.grid)) * (dx.transpose() * dy));
}

Eigen::VectorXd chi_cov_eps(const SamplePath& x, const SamplePath& y, const Eigen::MatrixXd& phi, Epsilon eps) {
  require_same_grid(x.grid, y.grid, "chi_cov_eps");
  detail::require_same_size(x.dim(), y.dim(), "chi_cov_eps");
  detail::require_same_size(phi.rows(), x.dim(), "chi_cov_eps phi");
  detail::require_same_size(phi.cols(), x.dim(), "chi_cov_eps phi");
  detail::require_finite(phi, "chi_cov_eps phi");
  check_eps(y.grid, eps);
  const Eigen::MatrixXd dx = forward_increments(x, eps.steps());
  const Eigen::MatrixXd dy = forward_increments(y, eps.steps());
  // <phi, dx (x) dy> = sum_ij phi_ij dx_i dy_j; equals trace_pair when dx = dy.
  const Eigen::VectorXd density = (dx * phi).cwiseProduct(dy).rowwise().sum();
  return accumulate(density, y.grid.dt() / eps.value(y.grid));
}

Eigen::VectorXd a_eps_statistic(const SamplePath& x, const SamplePath& y, Epsilon eps, const DiagonalGenerator& gen) {
  require_same_grid(x.grid, y.grid, "a_eps_statistic");
  detail::require_same_size(x.dim(), y.dim(), "a_eps_statistic");
  detail::require_same_size(gen.size(), x.dim(), "a_eps_statistic");
  check_eps(y.grid, eps);
  const Eigen::VectorXd w = gen.dual_weights();
  const Eigen::VectorXd nx = (forward_increments(x, eps.steps()) * w.asDiagonal()).rowwise().norm();
  const Eigen::VectorXd ny = (forward_increments(y, eps.steps()) * w.asDiagonal()).rowwise().norm();
  return accumulate(nx.cwiseProduct(ny), y.grid.dt() / eps.value(y.grid));
}

YoungResult young_integral(const ScalarPath& x, const ScalarPath& y, const YoungOptions& options) {
  require_same_grid(x.grid, y.grid, "young_integral");
  if (options.levels < 2) throw std::invalid_argument("young_integral: need >= 2 levels");
  const int coarsest = 1 << (options.levels - 1);
  if (y.grid.steps() % coarsest != 0) throw std::invalid_argument("young_integral: grid not dyadic enough");

  YoungResult out;
  out.holder_x = gated_holder(x, options.holder_lags);
  out.holder_y = gated_holder(y, options.holder_lags);
  if (!(out.holder_x + out.holder_y > 1.0)) {
    throw std::domain_error("young_integral: Hoelder exponents " + std::to_string(out.holder_x) + " + " +
                            std::to_string(out.holder_y) + " do not exceed 1");
  }
  for (int level = options.levels - 1; level >= 0; --level) {
    out.level_values.push_back(left_riemann(x.values, y.values, 1 << level));
  }
  out.value = out.level_values.back();
  const double prev = out.level_values[out.level_values.size() - 2];
  const double scale = std::abs(out.value);
  out.cauchy_gap = scale > 0.0 ? std::abs(out.value - prev) / scale : std::abs(out.value - prev);
  out.converged = out.cauchy_gap < options.rel_tol;
  if (options.strict && !out.converged) {
    throw ConvergenceError("young_integral: dyadic levels still differ by " + std::to_string(out.cauchy_gap));
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog_slope: need >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

LadderSummary summarize_ladder(std::span<const double> eps, const std::vector<std::vector<double>>& per_path) {
  LadderSummary out;
  out.eps.assign(eps.begin(), eps.end());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    std::vector<double> column;
    column.reserve(per_path.size());
    for (const auto& row : per_path) column.push_back(row.at(i));
    out.median.push_back(median(std::move(column)));
  }
  out.monotone = true;
  for (std::size_t i = 1; i < out.median.size(); ++i) out.monotone = out.monotone && out.median[i - 1] < out.median[i];
  const bool positive = std::all_of(out.median.begin(), out.median.end(), [](double v) { return v > 0.0; });
  out.fitted_rate = positive && out.eps.size() >= 2 ? fit_loglog_slope(out.eps, out.median) : 0.0;
  return out;
}

}  // namespace regcalc
