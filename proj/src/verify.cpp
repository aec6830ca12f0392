#include "regcalc/verify.hpp"

#include <cmath>
#include <stdexcept>

namespace regcalc {

namespace {

ScalarPath scalar_path(const TimeGrid& grid, Eigen::VectorXd values) { return {grid, std::move(values)}; }

bool strictly_decreasing_to_zero(const std::vector<double>& by_increasing_eps) {
  for (std::size_t i = 1; i < by_increasing_eps.size(); ++i) {
    if (!(by_increasing_eps[i - 1] < by_increasing_eps[i])) return false;
  }
  return true;
}

/// Values of f(t_j, X(t_j)) and of <d_x f(t_j, X(t_j)), dM_j> along a path.
struct Along {
  Eigen::VectorXd value;
  Eigen::MatrixXd gradient;  // nodes x N
};

Along evaluate_along(const SamplePath& x, const TestFunction& f) {
  Along out{Eigen::VectorXd(x.grid.nodes()), Eigen::MatrixXd(x.grid.nodes(), x.dim())};
  for (int j = 0; j < x.grid.nodes(); ++j) {
    const double t = x.grid.time(j);
    const Eigen::VectorXd state = x.values.row(j).transpose();
    out.value[j] = f.value(t, state);
    out.gradient.row(j) = f.gradient(t, state).transpose();
  }
  return out;
}

/// Everything in the mild Ito residual except the second-order term.
Eigen::VectorXd first_order_residual(const MildPath& path, const TestFunction& f, const Along& along) {
  const TimeGrid& grid = path.grid();
  const ConvolutionSpec& spec = *path.spec;
  const int nodes = grid.nodes();
  Eigen::VectorXd dt_term(nodes), generator_term(nodes), drift_term(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double t = grid.time(j);
    const Eigen::VectorXd state = path.X.values.row(j).transpose();
    const Eigen::VectorXd grad = along.gradient.row(j).transpose();
    dt_term[j] = f.time_derivative ? f.time_derivative(t, state) : 0.0;
    generator_term[j] = (-spec.gen.mu().cwiseProduct(grad)).dot(state);
    drift_term[j] = spec.drift.is_zero() ? 0.0 : grad.dot(spec.drift(t, state));
  }
  const double dt = grid.dt();
  const Eigen::VectorXd martingale = ito_sum(SamplePath{grid, along.gradient}, path.stoch_int);
  return along.value.array() - along.value[0] - cumulative_trapezoid(dt_term, dt).array() -
         cumulative_trapezoid(generator_term, dt).array() - cumulative_trapezoid(drift_term, dt).array() -
         martingale.array();
}

ItoResidual finish(Eigen::VectorXd residual) {
  ItoResidual out;
  out.sup = residual.cwiseAbs().maxCoeff();
  out.residual = std::move(residual);
  return out;
}

void require_c12(const TestFunction& f, const char* what) {
  if (!f.has_hessian() || f.smoothness != Smoothness::c12) {
    throw std::invalid_argument(std::string(what) + ": test function must be C^{1,2} with a Hessian");
  }
}

double sup_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TestFunction TestFunction::constant(Eigen::Index n, double c) {
  TestFunction f;
  f.name = "constant";
  f.smoothness = Smoothness::c12;
  f.value = [c](double, const Eigen::VectorXd&) { return c; };
  f.time_derivative = [](double, const Eigen::VectorXd&) { return 0.0; };
  f.gradient = [n](double, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(n); };
  f.hessian = [n](double, const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n, n); };
  return f;
}

TestFunction TestFunction::linear(const SpectralVector& z) {
  const Eigen::VectorXd zc = z.coeffs();
  const Eigen::Index n = zc.size();
  TestFunction f;
  f.name = "linear";
  f.smoothness = Smoothness::c12;
  f.value = [zc](double, const Eigen::VectorXd& x) { return x.dot(zc); };
  f.time_derivative = [](double, const Eigen::VectorXd&) { return 0.0; };
  f.gradient = [zc](double, const Eigen::VectorXd&) { return zc; };
  f.hessian = [n](double, const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n, n); };
  return f;
}

TestFunction TestFunction::quadratic(const SpectralVector& z) {
  const Eigen::VectorXd zc = z.coeffs();
  TestFunction f;
  f.name = "quadratic";
  f.smoothness = Smoothness::c12;
  f.value = [zc](double, const Eigen::VectorXd& x) {
    const double u = x.dot(zc);
    return u * u;
  };
  f.time_derivative = [](double, const Eigen::VectorXd&) { return 0.0; };
  f.gradient = [zc](double, const Eigen::VectorXd& x) { return Eigen::VectorXd(2.0 * x.dot(zc) * zc); };
  f.hessian = [zc](double, const Eigen::VectorXd&) { return Eigen::MatrixXd(2.0 * zc * zc.transpose()); };
  return f;
}

TestFunction TestFunction::regularized_power(const SpectralVector& z, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("regularized_power: delta must be > 0");
  const Eigen::VectorXd zc = z.coeffs();
  const double offset = std::pow(delta, 1.5);
  const double d2 = delta * delta;
  auto h = [=](double u) { return (2.0 / 3.0) * (std::pow(u * u + d2, 0.75) - offset); };
  auto dh = [=](double u) { return u * std::pow(u * u + d2, -0.25); };
  TestFunction f;
  f.name = "regularized_power";
  f.smoothness = Smoothness::c01;
  f.value = [=](double t, const Eigen::VectorXd& x) { return (1.0 + t) * h(x.dot(zc)); };
  f.time_derivative = [=](double, const Eigen::VectorXd& x) { return h(x.dot(zc)); };
  f.gradient = [=](double t, const Eigen::VectorXd& x) { return Eigen::VectorXd((1.0 + t) * dh(x.dot(zc)) * zc); };
  return f;
}

ItoResidual ito_mild_residual(const MildPath& path, const TestFunction& f, const ItoOptions& options) {
  require_c12(f, "ito_mild_residual");
  const TimeGrid& grid = path.grid();
  const Along along = evaluate_along(path.X, f);
  Eigen::VectorXd residual = first_order_residual(path, f, along);
  if (options.include_trace_term && !path.spec->sigma.is_zero()) {
    Eigen::VectorXd trace_term(grid.nodes());
    for (int j = 0; j < grid.nodes(); ++j) {
      const double t = grid.time(j);
      const TensorElement hess(f.hessian(t, path.X.values.row(j).transpose()));
      trace_term[j] = trace_pair(path.spec->sigma.covariance(t, path.spec->q), hess);
    }
    residual -= 0.5 * cumulative_trapezoid(trace_term, grid.dt());
  }
  return finish(std::move(residual));
}

TensorCurve classical_bracket(const MildPath& path) {
  const TimeGrid& grid = path.grid();
  const Eigen::Index n = path.X.dim();
  TensorCurve out{grid, {}};
  out.values.reserve(static_cast<std::size_t>(grid.nodes()));
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd prev = path.spec->sigma.covariance(0.0, path.spec->q);
  out.values.push_back(acc);
  for (int j = 1; j < grid.nodes(); ++j) {
    Eigen::MatrixXd next = path.spec->sigma.covariance(grid.time(j), path.spec->q);
    acc += 0.5 * grid.dt() * (prev + next);
    out.values.push_back(acc);
    prev = std::move(next);
  }
  return out;
}

ItoResidual ito_chi_residual(const MildPath& path, const TestFunction& f, const TensorCurve& bracket) {
  require_c12(f, "ito_chi_residual");
  const TimeGrid& grid = path.grid();
  require_same_grid(bracket.grid, grid, "ito_chi_residual");
  if (static_cast<int>(bracket.values.size()) != grid.nodes()) {
    throw std::invalid_argument("ito_chi_residual: bracket has the wrong number of nodes");
  }
  for (int j = 1; j < grid.nodes(); ++j) {
    const double scale = std::max(1.0, std::abs(bracket.values[static_cast<std::size_t>(j)].trace()));
    if (bracket.values[static_cast<std::size_t>(j)].trace() < bracket.values[static_cast<std::size_t>(j - 1)].trace() - 1e-12 * scale) {
      throw std::invalid_argument("ito_chi_residual: tr C decreases, C is not of bounded variation type");
    }
  }
  const Along along = evaluate_along(path.X, f);
  Eigen::VectorXd residual = first_order_residual(path, f, along);
  Eigen::MatrixXd prev_hess = f.hessian(grid.time(0), path.X.values.row(0).transpose());
  double acc = 0.0;
  for (int j = 0; j < grid.steps(); ++j) {
    Eigen::MatrixXd next_hess = f.hessian(grid.time(j + 1), path.X.values.row(j + 1).transpose());
    const Eigen::MatrixXd mid = 0.5 * (prev_hess + next_hess);
    const TensorElement dc(bracket.values[static_cast<std::size_t>(j + 1)] - bracket.values[static_cast<std::size_t>(j)]);
    acc += 0.5 * trace_pair(mid, dc);
    residual[j + 1] -= acc;
    prev_hess = std::move(next_hess);
  }
  return finish(std::move(residual));
}

const std::vector<double>& DecompositionReport::extra(const std::string& name) const {
  for (const auto& s : extras) {
    if (s.name == name) return s.values;
  }
  throw std::out_of_range("DecompositionReport: no statistic named " + name);
}

DecompositionReport chain_rule_check(const SamplePath& z, const SamplePath& m, const ScalarPath& n,
                                     const SamplePath& bracket_mn, const EpsLadder& ladder) {
  const TimeGrid& grid = ladder.grid();
  require_same_grid(z.grid, grid, "chain_rule_check");
  require_same_grid(m.grid, grid, "chain_rule_check");
  require_same_grid(n.grid, grid, "chain_rule_check");
  require_same_grid(bracket_mn.grid, grid, "chain_rule_check");
  const ScalarPath x = scalar_path(grid, ito_sum(z, m));
  const Eigen::VectorXd stieltjes = ito_sum(z, bracket_mn);

  DecompositionReport report;
  report.eps = ladder.values();
  StatisticSeries lhs{"covariation_sup", {}};
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const Eigen::VectorXd cov = covariation_eps(x, n, ladder.rung(i));
    const Eigen::VectorXd diff = cov - stieltjes;
    report.primary.push_back(sup_abs(diff));
    lhs.values.push_back(sup_abs(cov));
    if (i == 0) report.residual = diff;
  }
  report.extras.push_back(std::move(lhs));
  report.extras.push_back({"stieltjes_sup", std::vector<double>(ladder.size(), sup_abs(stieltjes))});
  report.pass = strictly_decreasing_to_zero(report.primary);
  return report;
}

DecompositionReport fukushima_orthogonality(const MildPath& path, const TestFunction& f, const ScalarPath& n,
                                            const EpsLadder& ladder) {
  const TimeGrid& grid = path.grid();
  require_same_grid(ladder.grid(), grid, "fukushima_orthogonality");
  require_same_grid(n.grid, grid, "fukushima_orthogonality");
  if (!f.gradient) throw std::invalid_argument("fukushima_orthogonality: F needs a gradient");
  const Along along = evaluate_along(path.X, f);
  const Eigen::VectorXd local_martingale =
      along.value[0] + ito_sum(SamplePath{grid, along.gradient}, path.martingale_part()).array();
  const ScalarPath a_f = scalar_path(grid, along.value - local_martingale);
  const ScalarPath f_x = scalar_path(grid, along.value);

  DecompositionReport report;
  report.eps = ladder.values();
  StatisticSeries control{"control", {}};
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const Eigen::VectorXd cov = covariation_eps(a_f, n, ladder.rung(i));
    report.primary.push_back(sup_abs(cov));
    control.values.push_back(sup_abs(covariation_eps(f_x, n, ladder.rung(i))));
    if (i == 0) report.residual = cov;
  }
  report.extras.push_back(std::move(control));
  report.pass = strictly_decreasing_to_zero(report.primary);
  return report;
}

DecompositionReport dirichlet_structure_report(const MildPath& path, const EpsLadder& ladder,
                                               const DirichletOptions& options) {
  const TimeGrid& grid = path.grid();
  require_same_grid(ladder.grid(), grid, "dirichlet_structure_report");
  const Eigen::Index dim = path.X.dim();
  const SamplePath m = path.martingale_part();
  SamplePath bounded = compute_remainder(path);  // V + Y
  bounded.values += path.drift_int.values;
  const TensorCurve bracket = classical_bracket(path);
  const Eigen::MatrixXd& c_final = bracket.values.back();

  DecompositionReport report;
  report.eps = ladder.values();
  StatisticSeries chi_gap{"chi_gap", {}}, chi_oracle{"chi_oracle", {}}, weak{"weak_dirichlet", {}};
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const Epsilon eps = ladder.rung(i);
    const Eigen::VectorXd a = a_eps_statistic(bounded, bounded, eps, path.spec->gen);
    report.primary.push_back(a[a.size() - 1]);
    if (i == 0) report.residual = a;

    double gap = 0.0, oracle = 0.0;
    for (const auto& [r, c] : options.phi_panel) {
      if (r < 0 || c < 0 || r >= dim || c >= dim) throw DimensionError("dirichlet_structure_report: phi index");
      Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(dim, dim);
      phi(r, c) = 1.0;
      const Eigen::VectorXd xx = chi_cov_eps(path.X, path.X, phi, eps);
      const Eigen::VectorXd mm = chi_cov_eps(m, m, phi, eps);
      gap = std::max(gap, sup_abs(xx - mm));
      oracle = std::max(oracle, std::abs(xx[xx.size() - 1] - c_final(r, c)));
    }
    chi_gap.values.push_back(gap);
    chi_oracle.values.push_back(oracle);

    double orth = 0.0;
    if (!options.test_martingales.empty()) {
      const ScalarPath paired = scalar_path(grid, bounded.values * options.z.coeffs());
      for (const auto& n : options.test_martingales) orth = std::max(orth, sup_abs(covariation_eps(paired, n, eps)));
    }
    weak.values.push_back(orth);
  }
  report.extras.push_back(std::move(chi_gap));
  report.extras.push_back(std::move(chi_oracle));
  report.extras.push_back(std::move(weak));
  report.pass = strictly_decreasing_to_zero(report.primary);
  return report;
}

}  // namespace regcalc
