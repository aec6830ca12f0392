#include "regcalc/noise.hpp"

#include "regcalc/spectral_space.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <tuple>
#include <utility>

namespace regcalc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::VectorXd standard_brownian(const TimeGrid& grid, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(grid.dt());
  Eigen::VectorXd w(grid.nodes());
  w[0] = 0.0;
  for (int j = 0; j < grid.steps(); ++j) w[j + 1] = w[j] + scale * normal(engine);
  return w;
}

}  // namespace

std::uint64_t derive_seed(const StreamSeed& seed, std::uint64_t substream) {
  std::uint64_t h = splitmix64(seed.master);
  h = splitmix64(h ^ seed.path);
  h = splitmix64(h ^ seed.stream);
  return splitmix64(h ^ substream);
}

std::mt19937_64 make_engine(const StreamSeed& seed, std::uint64_t substream) {
  return std::mt19937_64(derive_seed(seed, substream));
}

QSpectrum::QSpectrum(Eigen::VectorXd lambda) : lambda_(std::move(lambda)) {
  detail::require_finite(lambda_, "QSpectrum");
  if ((lambda_.array() < 0.0).any()) throw std::invalid_argument("QSpectrum: eigenvalues must be >= 0");
}

QSpectrum QSpectrum::power_law(Eigen::Index n, double alpha) {
  Eigen::VectorXd lambda(n);
  for (Eigen::Index k = 0; k < n; ++k) lambda[k] = std::pow(static_cast<double>(k + 1), -alpha);
  return QSpectrum(std::move(lambda));
}

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::brownian: return "brownian";
    case NoiseKind::q_wiener: return "q_wiener";
    case NoiseKind::fbm: return "fbm";
  }
  return "unknown";
}

NoisePath sample_brownian(const TimeGrid& grid, const StreamSeed& seed) {
  auto engine = make_engine(seed);
  NoisePath out{NoiseKind::brownian, 0.5, seed, {grid, Eigen::MatrixXd(grid.nodes(), 1)}};
  out.path.values.col(0) = standard_brownian(grid, engine);
  return out;
}

NoisePath sample_q_wiener(const TimeGrid& grid, const QSpectrum& q, const StreamSeed& seed) {
  NoisePath out{NoiseKind::q_wiener, 0.5, seed, {grid, Eigen::MatrixXd(grid.nodes(), q.size())}};
  for (Eigen::Index k = 0; k < q.size(); ++k) {
    // Substream k + 1 keeps substream 0 for sample_brownian with the same seed.
    auto engine = make_engine(seed, static_cast<std::uint64_t>(k) + 1);
    out.path.values.col(k) = std::sqrt(q.lambda()[k]) * standard_brownian(grid, engine);
  }
  return out;
}

double fbm_covariance(double s, double t, double hurst) {
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(t - s), two_h));
}

FbmSampler::FbmSampler(const TimeGrid& grid, double hurst, double jitter) : grid_(grid), hurst_(hurst) {
  if (!(hurst > 0.5 && hurst < 1.0)) {
    throw std::invalid_argument("FbmSampler: Hurst index must lie in (1/2, 1); use sample_brownian for 1/2");
  }
  if (grid.steps() > kMaxSteps) throw std::invalid_argument("FbmSampler: too many steps for a dense factor");
  const int n = grid.steps();
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      cov(i, j) = fbm_covariance(grid.time(i + 1), grid.time(j + 1), hurst);
    }
    cov(i, i) += jitter;
  }
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt;
  llt.compute(cov);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("FbmSampler: covariance not positive definite; retry with jitter > 0");
  }
  lower_ = llt.matrixL();
}

std::shared_ptr<const FbmSampler> FbmSampler::shared(const TimeGrid& grid, double hurst, double jitter) {
  static std::mutex mutex;
  static std::map<std::tuple<double, int, double, double>, std::shared_ptr<const FbmSampler>> cache;
  const auto key = std::make_tuple(grid.horizon(), grid.steps(), hurst, jitter);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_shared<const FbmSampler>(grid, hurst, jitter)).first;
  return it->second;
}

NoisePath FbmSampler::sample(const StreamSeed& seed) const {
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = grid_.steps();
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = normal(engine);
  NoisePath out{NoiseKind::fbm, hurst_, seed, {grid_, Eigen::MatrixXd(grid_.nodes(), 1)}};
  out.path.values(0, 0) = 0.0;
  out.path.values.col(0).tail(n) = lower_.triangularView<Eigen::Lower>() * z;
  return out;
}

NoisePath sample_fbm(const TimeGrid& grid, double hurst, const StreamSeed& seed) {
  return FbmSampler::shared(grid, hurst)->sample(seed);
}

std::vector<int> dyadic_lags(int count) {
  std::vector<int> lags;
  for (int i = 0; i < count; ++i) lags.push_back(1 << i);
  return lags;
}

double holder_exponent_estimate(const ScalarPath& path, std::span<const int> lags, HolderStatistic statistic) {
  if (lags.size() < 3) throw std::invalid_argument("holder_exponent_estimate: need at least three lags");
  const int steps = path.grid.steps();
  Eigen::VectorXd log_h(static_cast<Eigen::Index>(lags.size()));
  Eigen::VectorXd log_s(log_h.size());
  for (std::size_t i = 0; i < lags.size(); ++i) {
    const int lag = lags[i];
    if (lag < 1 || lag >= steps) throw std::invalid_argument("holder_exponent_estimate: lag out of range");
    const Eigen::Index count = steps - lag + 1;
    const Eigen::VectorXd inc = path.values.segment(lag, count) - path.values.head(count);
    const double s = statistic == HolderStatistic::max_increment ? inc.cwiseAbs().maxCoeff()
                                                                 : std::sqrt(inc.squaredNorm() / count);
    if (!(s > 0.0)) throw std::invalid_argument("holder_exponent_estimate: degenerate path");
    log_h[static_cast<Eigen::Index>(i)] = std::log(lag * path.grid.dt());
    log_s[static_cast<Eigen::Index>(i)] = std::log(s);
  }
  const double mh = log_h.mean();
  const double ms = log_s.mean();
  const double var = (log_h.array() - mh).square().sum();
  if (!(var > 0.0)) throw std::invalid_argument("holder_exponent_estimate: lags must be distinct");
  return ((log_h.array() - mh) * (log_s.array() - ms)).sum() / var;
}

void write_path_csv(std::ostream& out, const SamplePath& path, std::uint64_t path_id, bool header) {
  // shortest round-trip form so the files reload bit-exactly
  const auto num = [](double x) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof(buf), x).ptr);
  };
  if (header) out << "path_id,t,mode,value\n";
  for (int j = 0; j < path.grid.nodes(); ++j) {
    const std::string t = num(path.grid.time(j));
    for (Eigen::Index k = 0; k < path.dim(); ++k) {
      out << path_id << ',' << t << ',' << (k + 1) << ',' << num(path.values(j, k)) << '\n';
    }
  }
}

}  // namespace regcalc
