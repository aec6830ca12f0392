#include <doctest.h>

#include "regcalc/convolution.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

using namespace regcalc;

namespace {

std::shared_ptr<ConvolutionSpec> heat_spec(int n, Eigen::VectorXd x0, double sigma) {
  return std::make_shared<ConvolutionSpec>(ConvolutionSpec{
      SpectralVector(std::move(x0)), Drift::zero(n), Diffusion::constant_diagonal(Eigen::VectorXd::Constant(n, sigma)),
      DiagonalGenerator::dirichlet_laplacian(n), QSpectrum::power_law(n, 2.0)});
}

std::shared_ptr<const NoisePath> qwiener(const TimeGrid& grid, const QSpectrum& q, std::uint64_t path) {
  return std::make_shared<const NoisePath>(sample_q_wiener(grid, q, {17, path, 0}));
}

}  // namespace

TEST_CASE("deterministic decay when b = sigma = 0") {
  const TimeGrid grid(1.0, 512);
  auto spec = heat_spec(4, Eigen::Vector4d(1, -0.5, 0.25, 2), 0.0);
  spec->sigma = Diffusion::zero(4);
  const MildPath path = simulate_mild(spec, qwiener(grid, spec->q, 0));
  for (int j = 0; j < grid.nodes(); j += 37) {
    const Eigen::VectorXd expected = apply_semigroup(grid.time(j), spec->x0, spec->gen).coeffs();
    CHECK((path.X.values.row(j).transpose() - expected).cwiseAbs().maxCoeff() <= 1e-13);
  }
  // the remainder is then e^{tA}x0 - x0
  const SamplePath y = compute_remainder(path);
  const Eigen::VectorXd last = apply_semigroup(1.0, spec->x0, spec->gen).coeffs() - spec->x0.coeffs();
  CHECK((y.values.row(grid.steps()).transpose() - last).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("A = 0 and sigma = Id reproduce the scaled Wiener path") {
  const TimeGrid grid(1.0, 256);
  auto spec = heat_spec(3, Eigen::Vector3d(0.1, 0.2, 0.3), 1.0);
  spec->gen = DiagonalGenerator::zero(3);
  const auto noise = qwiener(grid, spec->q, 1);
  const MildPath path = simulate_mild(spec, noise);
  Eigen::MatrixXd expected = noise->path.values;
  expected.rowwise() += spec->x0.coeffs().transpose();
  CHECK((path.X.values - expected).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(compute_remainder(path).values.cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(ondrejat_check(path, SpectralVector::basis(3, 0)).max_abs <= 1e-13);
}

TEST_CASE("single mode Ornstein-Uhlenbeck variance") {
  const TimeGrid grid(1.0, 1024);
  auto spec = std::make_shared<ConvolutionSpec>(ConvolutionSpec{
      SpectralVector::zero(1), Drift::zero(1), Diffusion::constant_diagonal(Eigen::VectorXd::Constant(1, 1.5)),
      DiagonalGenerator(Eigen::VectorXd::Constant(1, 2.0)), QSpectrum(Eigen::VectorXd::Constant(1, 0.8))});
  const int paths = 800;
  std::vector<double> xt;
  for (int p = 0; p < paths; ++p) {
    xt.push_back(simulate_mild(spec, qwiener(grid, spec->q, p)).X.values(grid.steps(), 0));
  }
  const double mean = std::accumulate(xt.begin(), xt.end(), 0.0) / paths;
  double var = 0.0;
  for (double x : xt) var += (x - mean) * (x - mean);
  var /= paths - 1;
  const double mu = 2.0, s2l = 1.5 * 1.5 * 0.8;
  const double exact = s2l * (1.0 - std::exp(-2.0 * mu)) / (2.0 * mu);
  // standard error of a Gaussian sample variance
  CHECK(std::abs(var - exact) <= 3.0 * exact * std::sqrt(2.0 / (paths - 1)));
}

TEST_CASE("ondrejat residual: trivial cases and first order in dt") {
  const TimeGrid coarse(1.0, 1024);
  auto spec = heat_spec(8, Eigen::VectorXd::Ones(8), 1.0);
  const auto fine_noise = qwiener(TimeGrid(1.0, 2048), spec->q, 3);
  const MildPath fine = simulate_mild(spec, fine_noise);
  CHECK(ondrejat_check(fine, SpectralVector::zero(8)).max_abs == 0.0);

  Eigen::VectorXd zc(8);
  for (int k = 0; k < 8; ++k) zc[k] = 1.0 / ((k + 1.0) * (k + 1.0));
  NoisePath coarse_noise = *fine_noise;
  coarse_noise.path = coarsen(fine_noise->path, 2);
  const double rc = ondrejat_check(simulate_mild(spec, std::make_shared<const NoisePath>(coarse_noise)), SpectralVector(zc)).max_abs;
  const double rf = ondrejat_check(fine, SpectralVector(zc)).max_abs;
  CHECK(rc / rf > 1.6);
  CHECK(rc / rf < 2.6);
}

TEST_CASE("spec validation") {
  auto spec = heat_spec(3, Eigen::Vector3d::Zero(), 1.0);
  spec->q = QSpectrum::power_law(2, 2.0);
  CHECK_THROWS(spec->validate());
  const TimeGrid grid(1.0, 8);
  auto ok = heat_spec(3, Eigen::Vector3d::Zero(), 1.0);
  CHECK_THROWS(simulate_mild(ok, std::make_shared<const NoisePath>(sample_brownian(grid, {1, 0, 0}))));
}

TEST_CASE("rank-one diffusion covariance") {
  const Diffusion s = Diffusion::rank_one(Eigen::Vector3d(1, 2, 3), 0);
  const QSpectrum q(Eigen::Vector3d(0.5, 1, 1));
  const Eigen::MatrixXd c = s.covariance(0.0, q);
  CHECK(c(1, 2) == doctest::Approx(0.5 * 6));
  CHECK(projective_norm(TensorElement(c)) == doctest::Approx(0.5 * 14));
}

TEST_CASE("fractional extension") {
  const TimeGrid grid(1.0, 1024);
  auto spec = heat_spec(4, Eigen::Vector4d(1, 0, 0, 0), 0.5);
  const MildPath path = simulate_mild(spec, qwiener(grid, spec->q, 4));
  const NoisePath beta = sample_fbm(grid, 0.75, {17, 4, 9});

  SUBCASE("zero B leaves X unchanged") {
    const FractionalMode mode{SpectralVector::zero(4), beta.scalar()};
    const auto ext = simulate_fractional_extension(path, std::span(&mode, 1));
    CHECK(ext.X1.values == path.X.values);
  }
  SUBCASE("A = 0 telescopes to B") {
    const FractionalMode mode{SpectralVector::basis(4, 1), beta.scalar()};
    const SamplePath conv = fractional_convolution(grid, DiagonalGenerator::zero(4), std::span(&mode, 1));
    CHECK((conv.values.col(1) - beta.scalar().values).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(conv.values.col(0).isZero());
  }
  SUBCASE("left-point sums converge under refinement on a slow mode") {
    auto slow = std::make_shared<ConvolutionSpec>(*spec);
    slow->gen = DiagonalGenerator(Eigen::Vector4d(0.5, 1, 2, 4));
    const MildPath p = simulate_mild(slow, qwiener(grid, slow->q, 5));
    const FractionalMode mode{SpectralVector::basis(4, 0), beta.scalar()};
    const auto ext = simulate_fractional_extension(p, std::span(&mode, 1));
    CHECK(ext.converged);
    CHECK(ext.cauchy_gaps.back() < 1e-3);
  }
  SUBCASE("strict mode throws when the tolerance is missed") {
    const FractionalMode mode{SpectralVector::basis(4, 3), beta.scalar()};
    FractionalOptions opts;
    opts.rel_tol = 1e-12;
    CHECK_THROWS_AS(simulate_fractional_extension(path, std::span(&mode, 1), opts), ConvergenceError);
  }
}
