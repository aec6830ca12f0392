#include <doctest.h>

#include "regcalc/noise.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

using namespace regcalc;

TEST_CASE("seeds are distinct per coordinate and reproducible") {
  const StreamSeed s{1, 2, 3};
  CHECK(derive_seed(s) == derive_seed(s));
  CHECK(derive_seed(s) != derive_seed({1, 2, 4}));
  CHECK(derive_seed(s) != derive_seed({1, 3, 3}));
  CHECK(derive_seed(s) != derive_seed({2, 2, 3}));
  CHECK(derive_seed(s, 0) != derive_seed(s, 1));
}

TEST_CASE("brownian path: start, reproducibility, increment variance") {
  const TimeGrid grid(1.0, 100000);
  const NoisePath a = sample_brownian(grid, {42, 0, 0});
  const NoisePath b = sample_brownian(grid, {42, 0, 0});
  CHECK(a.kind == NoiseKind::brownian);
  CHECK(a.path.values(0, 0) == 0.0);
  CHECK(a.path.values == b.path.values);

  const Eigen::VectorXd w = a.scalar().values;
  const Eigen::VectorXd dw = w.tail(grid.steps()) - w.head(grid.steps());
  const double var = dw.squaredNorm() / grid.steps();
  const double band = 3.0 * std::sqrt(2.0 / grid.steps());
  CHECK(var >= grid.dt() * (1.0 - band));
  CHECK(var <= grid.dt() * (1.0 + band));
}

TEST_CASE("q-wiener path") {
  const TimeGrid grid(1.0, 256);
  const QSpectrum q = QSpectrum::power_law(4, 2.0);
  CHECK(q.lambda()[1] == doctest::Approx(0.25));
  CHECK(q.trace() == doctest::Approx(1 + 0.25 + 1.0 / 9 + 1.0 / 16));

  SUBCASE("zero spectrum gives the zero path") {
    const NoisePath z = sample_q_wiener(grid, QSpectrum(Eigen::VectorXd::Zero(3)), {1, 0, 0});
    CHECK(z.path.values.isZero());
  }
  SUBCASE("modes do not depend on the truncation") {
    const NoisePath small = sample_q_wiener(grid, QSpectrum::power_law(2, 2.0), {5, 1, 9});
    const NoisePath large = sample_q_wiener(grid, QSpectrum::power_law(6, 2.0), {5, 1, 9});
    CHECK(small.path.values == large.path.values.leftCols(2));
  }
  SUBCASE("negative eigenvalue rejected") { CHECK_THROWS(QSpectrum(Eigen::Vector2d(1.0, -0.5))); }
}

TEST_CASE("q-wiener second moment at T") {
  const TimeGrid grid(1.0, 64);
  const QSpectrum q = QSpectrum::power_law(4, 2.0);
  const int paths = 400;
  std::vector<double> sq;
  for (int p = 0; p < paths; ++p) {
    const NoisePath w = sample_q_wiener(grid, q, {99, static_cast<std::uint64_t>(p), 0});
    sq.push_back(w.path.values.row(grid.steps()).squaredNorm());
  }
  const double mean = std::accumulate(sq.begin(), sq.end(), 0.0) / paths;
  double var = 0.0;
  for (double s : sq) var += (s - mean) * (s - mean);
  var /= paths - 1;
  const double se = std::sqrt(var / paths);
  CHECK(std::abs(mean - q.trace()) <= 3.0 * se);
}

TEST_CASE("q-wiener realized quadratic variation per mode") {
  const TimeGrid grid(1.0, 1 << 14);
  const QSpectrum q = QSpectrum::power_law(3, 2.0);
  const NoisePath w = sample_q_wiener(grid, q, {3, 0, 0});
  for (int k = 0; k < 3; ++k) {
    const Eigen::VectorXd x = w.scalar(k).values;
    const double qv = (x.tail(grid.steps()) - x.head(grid.steps())).squaredNorm();
    // relative sd of the realized QV is sqrt(2/J)
    CHECK(std::abs(qv / q.lambda()[k] - 1.0) <= 4.0 * std::sqrt(2.0 / grid.steps()));
  }
}

TEST_CASE("fbm covariance and sampling") {
  const double h = 0.75;
  CHECK(fbm_covariance(0.3, 0.3, h) == doctest::Approx(std::pow(0.3, 1.5)));
  CHECK_THROWS_AS(FbmSampler(TimeGrid(1.0, 16), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(sample_fbm(TimeGrid(1.0, 16), 1.0, {1, 0, 0}), std::invalid_argument);

  const TimeGrid grid(1.0, 64);
  const NoisePath b = sample_fbm(grid, h, {8, 0, 0});
  CHECK(b.path.values(0, 0) == 0.0);
  CHECK(b.hurst == h);

  // Increment over [0.25, 0.5] has variance 0.25^{2H}; disjoint lags across
  // many paths give an unbiased sample of squared increments.
  const int paths = 2000;
  std::vector<double> sq;
  for (int p = 0; p < paths; ++p) {
    const auto x = sample_fbm(grid, h, {8, static_cast<std::uint64_t>(p), 1}).scalar().values;
    const double d = x[32] - x[16];
    sq.push_back(d * d);
  }
  const double mean = std::accumulate(sq.begin(), sq.end(), 0.0) / paths;
  double var = 0.0;
  for (double s : sq) var += (s - mean) * (s - mean);
  const double se = std::sqrt(var / (paths - 1) / paths);
  CHECK(std::abs(mean - std::pow(0.25, 2 * h)) <= 3.0 * se);
}

TEST_CASE("hoelder exponent estimates") {
  const TimeGrid grid(1.0, 4096);
  const auto lags = dyadic_lags(6);
  CHECK(lags == std::vector<int>{1, 2, 4, 8, 16, 32});

  ScalarPath line{grid, Eigen::VectorXd::LinSpaced(grid.nodes(), 0.0, 1.0)};
  CHECK(holder_exponent_estimate(line, lags) == doctest::Approx(1.0).epsilon(1e-9));
  ScalarPath flat{grid, Eigen::VectorXd::Ones(grid.nodes())};
  CHECK_THROWS(holder_exponent_estimate(flat, lags));
  CHECK_THROWS(holder_exponent_estimate(line, std::vector<int>{1, 2}));

  double brownian = 0.0;
  for (int p = 0; p < 20; ++p) {
    brownian += holder_exponent_estimate(sample_brownian(grid, {4, static_cast<std::uint64_t>(p), 0}).scalar(), lags);
  }
  CHECK(std::abs(brownian / 20 - 0.5) <= 0.1);

  double fbm = 0.0;
  for (int p = 0; p < 50; ++p) {
    fbm += holder_exponent_estimate(sample_fbm(grid, 0.75, {4, static_cast<std::uint64_t>(p), 1}).scalar(), lags);
  }
  CHECK(std::abs(fbm / 50 - 0.75) <= 0.05);
}

TEST_CASE("path csv") {
  const NoisePath w = sample_q_wiener(TimeGrid(1.0, 2), QSpectrum::power_law(2, 2.0), {1, 0, 0});
  std::ostringstream out;
  write_path_csv(out, w.path, 7, true);
  const std::string text = out.str();
  CHECK(text.rfind("path_id,t,mode,value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3 * 2);
  CHECK(text.find("\n7,0,1,0\n") != std::string::npos);
}
