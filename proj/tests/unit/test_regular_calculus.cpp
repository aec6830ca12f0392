#include <doctest.h>

#include "regcalc/convolution.hpp"
#include "regcalc/noise.hpp"
#include "regcalc/regular_calculus.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace regcalc;

namespace {

ScalarPath scalar_fn(const TimeGrid& grid, double (*f)(double)) {
  ScalarPath out{grid, Eigen::VectorXd(grid.nodes())};
  for (int j = 0; j < grid.nodes(); ++j) out.values[j] = f(grid.time(j));
  return out;
}

SamplePath as_sample(const ScalarPath& x) { return SamplePath{x.grid, x.values}; }

ScalarPath brownian(const TimeGrid& grid, std::uint64_t path, std::uint64_t stream = 0) {
  return sample_brownian(grid, {2024, path, stream}).scalar();
}

}  // namespace

TEST_CASE("epsilon and ladder validation") {
  const TimeGrid grid(1.0, 1024);
  CHECK(Epsilon::from_value(grid, 8.0 / 1024).steps() == 8);
  CHECK_THROWS(Epsilon::from_value(grid, 0.001));
  CHECK_THROWS(Epsilon::steps(0));
  CHECK_THROWS(EpsLadder(grid, {4, 16}));
  CHECK_THROWS(EpsLadder(grid, {2, 16, 64}));
  CHECK_THROWS(EpsLadder(grid, {4, 64, 16}));
  CHECK_THROWS(EpsLadder(grid, {4, 16, 256}));
  const EpsLadder ladder(grid, {4, 16, 64});
  CHECK(ladder.eps(2) == doctest::Approx(64.0 / 1024));
}

TEST_CASE("forward integral of a constant integrand is a running average of Y") {
  const TimeGrid grid(1.0, 1 << 14);
  const EpsLadder ladder(grid, {4, 32, 256});
  std::vector<std::vector<double>> dev;
  for (std::uint64_t p = 0; p < 30; ++p) {
    const ScalarPath w = brownian(grid, p);
    const ScalarPath one{grid, Eigen::VectorXd::Ones(grid.nodes())};
    std::vector<double> row;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const Eigen::VectorXd f = forward_integral_eps(one, w, ladder.rung(i));
      CHECK(f[0] == 0.0);
      row.push_back((f - w.values).cwiseAbs().maxCoeff());
    }
    dev.push_back(row);
  }
  CHECK(summarize_ladder(ladder.values(), dev).monotone);
}

TEST_CASE("forward integral of smooth paths follows ordinary calculus") {
  const TimeGrid grid(1.0, 4096);
  const ScalarPath x = scalar_fn(grid, [](double t) { return t; });
  const ScalarPath y = scalar_fn(grid, [](double t) { return t * t; });
  SamplePath y_vec{grid, Eigen::MatrixXd::Zero(grid.nodes(), 3)};
  y_vec.values.col(0) = y.values;
  const SamplePath out = forward_integral_eps(x, y_vec, Epsilon::steps(4));
  CHECK(out.values(grid.steps(), 0) == doctest::Approx(2.0 / 3.0).epsilon(2e-3));
  CHECK(out.values.col(1).isZero());
}

TEST_CASE("forward integral agrees with the Ito sum for an adapted step integrand") {
  const TimeGrid grid(1.0, 4096);
  const EpsLadder ladder(grid, {4, 16, 64});
  std::vector<std::vector<double>> err;
  for (std::uint64_t p = 0; p < 60; ++p) {
    const ScalarPath w = brownian(grid, p, 1);
    ScalarPath x{grid, Eigen::VectorXd(grid.nodes())};
    for (int j = 0; j < grid.nodes(); ++j) x.values[j] = w.values[(j / 64) * 64];
    const Eigen::VectorXd ito = ito_sum(x, w);
    std::vector<double> row;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      row.push_back((forward_integral_eps(x, w, ladder.rung(i)) - ito).cwiseAbs().maxCoeff());
    }
    err.push_back(row);
  }
  CHECK(summarize_ladder(ladder.values(), err).monotone);
}

TEST_CASE("ito sum") {
  const TimeGrid grid(1.0, 1 << 16);
  const ScalarPath w = brownian(grid, 0, 2);
  const double wt = w.values[grid.steps()];
  const Eigen::VectorXd s = ito_sum(w, w);
  CHECK(std::abs(s[grid.steps()] - 0.5 * (wt * wt - 1.0)) <= 2.0 * std::sqrt(2.0 / grid.steps()));

  const ScalarPath zero{grid, Eigen::VectorXd::Zero(grid.nodes())};
  CHECK(ito_sum(zero, w).isZero());

  const TimeGrid coarse(1.0, 1000);
  const ScalarPath x = scalar_fn(coarse, [](double t) { return t; });
  const ScalarPath m = scalar_fn(coarse, [](double t) { return t * t; });
  // sum t_j (2 t_j dt + dt^2) = 2/3 - dt/2 + O(dt^2) ... checked against the closed form
  const double dt = coarse.dt();
  double exact = 0.0;
  for (int j = 0; j < 1000; ++j) exact += j * dt * (2 * j * dt * dt + dt * dt);
  CHECK(ito_sum(x, m)[1000] == doctest::Approx(exact).epsilon(1e-12));
  CHECK(std::abs(exact - 2.0 / 3.0) <= dt);
}

TEST_CASE("covariation of Brownian motion with itself is close to t") {
  const TimeGrid grid(1.0, 1 << 14);
  const EpsLadder ladder(grid, {4, 64, 1024});
  std::vector<std::vector<double>> gap;
  for (std::uint64_t p = 0; p < 40; ++p) {
    const ScalarPath w = brownian(grid, p, 3);
    std::vector<double> row;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const Eigen::VectorXd c = covariation_eps(w, w, ladder.rung(i));
      row.push_back(std::abs(c[grid.steps()] - 1.0));
    }
    gap.push_back(row);
  }
  const auto s = summarize_ladder(ladder.values(), gap);
  CHECK(s.monotone);
  CHECK(s.median.front() < 0.05);
}

TEST_CASE("scalar quadratic variation closed forms") {
  const TimeGrid grid(1.0, 100000);
  SamplePath x{grid, Eigen::MatrixXd::Zero(grid.nodes(), 2)};
  for (int j = 0; j < grid.nodes(); ++j) x.values(j, 0) = grid.time(j);
  const double eps = 0.01;
  const Eigen::VectorXd qv = scalar_qv_eps(x, Epsilon::from_value(grid, eps), QvNorm::hilbert);
  CHECK(qv[grid.steps()] == doctest::Approx(eps * (1 - eps) + eps * eps / 3).epsilon(1e-5));
  CHECK(qv[grid.steps()] == doctest::Approx(0.0099333).epsilon(1e-4));

  const SamplePath flat{grid, Eigen::MatrixXd::Constant(grid.nodes(), 2, 3.0)};
  CHECK(scalar_qv_eps(flat, Epsilon::steps(10), QvNorm::hilbert).isZero());
  CHECK_THROWS(scalar_qv_eps(flat, Epsilon::steps(10), QvNorm::dual_graph));
}

TEST_CASE("tensor covariation of a Q-Wiener path") {
  const TimeGrid grid(1.0, 1 << 14);
  const QSpectrum q = QSpectrum::power_law(3, 2.0);
  const SamplePath w = sample_q_wiener(grid, q, {12, 0, 0}).path;
  const TensorElement c = tensor_cov_eps_final(w, w, Epsilon::steps(4));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(c.mat()(i, i) / q.lambda()[i] - 1.0) < 0.1);
    for (int j = 0; j < 3; ++j) {
      if (i != j) CHECK(std::abs(c.mat()(i, j)) < 0.1 * std::sqrt(q.lambda()[i] * q.lambda()[j]));
    }
  }
  const TensorCurve curve = tensor_cov_eps(w, w, Epsilon::steps(4));
  CHECK(curve.values.front().isZero());
  CHECK(curve.values.back().isApprox(c.mat()));

  const SamplePath flat{grid, Eigen::MatrixXd::Ones(grid.nodes(), 3)};
  CHECK(tensor_cov_eps_final(flat, flat, Epsilon::steps(4)).mat().isZero());
}

TEST_CASE("smooth against Brownian covariation vanishes down the ladder") {
  const TimeGrid grid(1.0, 1 << 14);
  const EpsLadder ladder(grid, {4, 64, 1024});
  std::vector<std::vector<double>> stat;
  for (std::uint64_t p = 0; p < 30; ++p) {
    SamplePath x{grid, Eigen::MatrixXd(grid.nodes(), 1)};
    for (int j = 0; j < grid.nodes(); ++j) x.values(j, 0) = std::sin(3.0 * grid.time(j));
    const SamplePath w = as_sample(brownian(grid, p, 4));
    std::vector<double> row;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      row.push_back(std::abs(tensor_cov_eps_final(x, w, ladder.rung(i)).mat()(0, 0)));
    }
    stat.push_back(row);
  }
  CHECK(summarize_ladder(ladder.values(), stat).monotone);
}

TEST_CASE("chi covariation") {
  const TimeGrid grid(1.0, 1 << 14);
  SamplePath x{grid, Eigen::MatrixXd::Zero(grid.nodes(), 3)};
  x.values.col(0) = brownian(grid, 0, 5).values;
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(3, 3);
  phi(0, 0) = 1.0;
  const Eigen::VectorXd c = chi_cov_eps(x, x, phi, Epsilon::steps(4));
  CHECK(std::abs(c[grid.steps()] - 1.0) < 0.1);
  CHECK(c[grid.steps()] == doctest::Approx(tensor_cov_eps_final(x, x, Epsilon::steps(4)).mat()(0, 0)).epsilon(1e-12));

  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(3, 3);
  upper.bottomRightCorner(2, 2) = Eigen::Matrix2d::Random();
  CHECK(chi_cov_eps(x, x, upper, Epsilon::steps(4)).isZero(0.0));
}

TEST_CASE("A(eps) statistic") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const TimeGrid grid(1.0, 1 << 14);
  const DiagonalGenerator gen(Eigen::VectorXd::Constant(1, pi2));
  const SamplePath flat{grid, Eigen::MatrixXd::Ones(grid.nodes(), 1)};
  CHECK(a_eps_statistic(flat, flat, Epsilon::steps(4), gen).isZero());

  std::vector<double> finals;
  for (std::uint64_t p = 0; p < 100; ++p) {
    const SamplePath w = as_sample(brownian(grid, p, 6));
    const Eigen::VectorXd a = a_eps_statistic(w, w, Epsilon::steps(4), gen);
    finals.push_back(a[grid.steps()]);
  }
  const double expected = 1.0 / (1.0 + pi2 * pi2);
  CHECK(std::abs(median(finals) / expected - 1.0) < 0.05);
}

TEST_CASE("A(eps) of the remainder obeys the per-path bound") {
  const TimeGrid grid(1.0, 4096);
  const int n = 8;
  auto spec = std::make_shared<ConvolutionSpec>(ConvolutionSpec{
      SpectralVector(Eigen::VectorXd::Ones(n)), Drift::zero(n),
      Diffusion::constant_diagonal(Eigen::VectorXd::Ones(n)), DiagonalGenerator::dirichlet_laplacian(n),
      QSpectrum::power_law(n, 2.0)});
  for (std::uint64_t p = 0; p < 10; ++p) {
    auto noise = std::make_shared<const NoisePath>(sample_q_wiener(grid, spec->q, {77, p, 0}));
    const MildPath path = simulate_mild(spec, noise);
    const SamplePath y = compute_remainder(path);
    for (const int m : {4, 16, 64}) {
      const double eps = m * grid.dt();
      const double sup = path.X.sup_norm();
      const Eigen::VectorXd a = a_eps_statistic(y, y, Epsilon::steps(m), spec->gen);
      CHECK(a[grid.steps()] <= eps * sup * sup);
    }
  }
}

TEST_CASE("young integral") {
  const TimeGrid grid(1.0, 4096);
  const ScalarPath beta = sample_fbm(grid, 0.75, {31, 0, 0}).scalar();

  SUBCASE("constant integrand is exact") {
    const ScalarPath c{grid, Eigen::VectorXd::Constant(grid.nodes(), 2.5)};
    YoungOptions opts;
    const YoungResult r = young_integral(c, beta, opts);
    CHECK(r.value == doctest::Approx(2.5 * (beta.values[grid.steps()] - beta.values[0])).epsilon(1e-13));
    CHECK(r.converged);
  }
  SUBCASE("smooth pair") {
    const ScalarPath x = scalar_fn(grid, [](double t) { return t; });
    const ScalarPath y = scalar_fn(grid, [](double t) { return t * t; });
    YoungOptions opts;
    opts.strict = false;
    const YoungResult r = young_integral(x, y, opts);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
    CHECK(r.level_values.size() == 4);
  }
  SUBCASE("rough pair is refused") {
    // white noise has no Hoelder regularity at all
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    ScalarPath w{grid, Eigen::VectorXd(grid.nodes())};
    for (int j = 0; j < grid.nodes(); ++j) w.values[j] = gauss(rng);
    CHECK_THROWS_AS(young_integral(w, w), std::domain_error);
  }
  SUBCASE("fBm against itself approaches the chain rule") {
    YoungOptions opts;
    opts.strict = false;
    const YoungResult r = young_integral(beta, beta, opts);
    const double exact = 0.5 * beta.values[grid.steps()] * beta.values[grid.steps()];
    CHECK(r.holder_x > 0.5);
    CHECK(std::abs(r.value - exact) < std::abs(r.level_values.front() - exact));
    opts.strict = true;
    opts.rel_tol = 1e-12;
    CHECK_THROWS_AS(young_integral(beta, beta, opts), ConvergenceError);
  }
}

TEST_CASE("ladder summaries") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  const std::vector<double> x{1, 2, 4}, y{3, 12, 48};
  CHECK(fit_loglog_slope(x, y) == doctest::Approx(2.0));
  const auto s = summarize_ladder(x, {{1, 2, 3}, {2, 3, 4}, {0.5, 5, 6}});
  CHECK(s.median == std::vector<double>{1, 3, 4});
  CHECK(s.monotone);
  CHECK_FALSE(summarize_ladder(x, {{1, 1, 2}}).monotone);
}
