#pragma once

// Driving noises on a uniform grid: scalar Brownian motion, Q-Wiener processes
// with Q diagonal on the basis of H, and fractional Brownian motion with
// Hurst index in (1/2, 1).
//
// Seeding: a path is identified by (master seed, path index, stream). Every
// Gaussian draw comes from an engine seeded by a hash of that triple plus a
// per-mode substream, so a path never depends on which thread generated it,
// and mode k of a Q-Wiener path does not depend on the truncation N.

#include "regcalc/paths.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>

namespace regcalc {

struct StreamSeed {
  std::uint64_t master = 0;
  std::uint64_t path = 0;
  std::uint64_t stream = 0;
};

/// splitmix64-style mixing of (master, path, stream, substream).
std::uint64_t derive_seed(const StreamSeed& seed, std::uint64_t substream = 0);
std::mt19937_64 make_engine(const StreamSeed& seed, std::uint64_t substream = 0);

/// Eigenvalues of Q on the basis of H.
class QSpectrum {
 public:
  QSpectrum() = default;
  /// Entries must be finite and >= 0 (zero modes produce a zero path).
  explicit QSpectrum(Eigen::VectorXd lambda);

  /// lambda_k = k^{-alpha}, k = 1..n.
  static QSpectrum power_law(Eigen::Index n, double alpha);

  Eigen::Index size() const { return lambda_.size(); }
  const Eigen::VectorXd& lambda() const { return lambda_; }
  double trace() const { return lambda_.sum(); }

 private:
  Eigen::VectorXd lambda_;
};

enum class NoiseKind { brownian, q_wiener, fbm };

const char* to_string(NoiseKind kind);

struct NoisePath {
  NoiseKind kind = NoiseKind::brownian;
  double hurst = 0.5;
  StreamSeed seed;
  SamplePath path;  // nodes x modes; a scalar noise has one column

  const TimeGrid& grid() const { return path.grid; }
  Eigen::Index modes() const { return path.dim(); }
  ScalarPath scalar(Eigen::Index mode = 0) const { return path.component(mode); }
  /// W(t_{j+1}) - W(t_j)
  auto increment(int j) const { return path.values.row(j + 1) - path.values.row(j); }
};

NoisePath sample_brownian(const TimeGrid& grid, const StreamSeed& seed);

/// Mode k is sqrt(lambda_k) times an independent standard Brownian motion.
NoisePath sample_q_wiener(const TimeGrid& grid, const QSpectrum& q, const StreamSeed& seed);

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact fBm sampler: Cholesky factor of R(s,t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2
/// on the nodes t_1..t_J. The factor costs O(J^3) once and O(J^2) memory, so
/// step counts are capped at kMaxSteps.
class FbmSampler {
 public:
  static constexpr int kMaxSteps = 1 << 14;

  /// Throws std::invalid_argument unless hurst is in (1/2, 1); throws
  /// FactorizationError if the covariance is numerically not positive
  /// definite (retry with a positive jitter added to the diagonal).
  FbmSampler(const TimeGrid& grid, double hurst, double jitter = 0.0);

  /// Process-wide cache keyed on (grid, hurst, jitter).
  static std::shared_ptr<const FbmSampler> shared(const TimeGrid& grid, double hurst, double jitter = 0.0);

  NoisePath sample(const StreamSeed& seed) const;

  const TimeGrid& grid() const { return grid_; }
  double hurst() const { return hurst_; }

 private:
  TimeGrid grid_;
  double hurst_;
  Eigen::MatrixXd lower_;  // Cholesky factor
};

double fbm_covariance(double s, double t, double hurst);

NoisePath sample_fbm(const TimeGrid& grid, double hurst, const StreamSeed& seed);

/// Statistic of the increments at lag h used by the Hoelder estimator.
enum class HolderStatistic {
  max_increment,  ///< max_t |X(t+h) - X(t)|
  rms_increment,  ///< (mean_t |X(t+h) - X(t)|^2)^{1/2}
};

/// Log-log regression slope of the increment statistic against the lag
/// h = lag * dt. Needs at least three distinct lags; throws on a degenerate
/// (locally constant) path.
double holder_exponent_estimate(const ScalarPath& path, std::span<const int> lags,
                                HolderStatistic statistic = HolderStatistic::rms_increment);

/// Dyadic lags 1, 2, 4, ..., 2^{count-1}.
std::vector<int> dyadic_lags(int count);

/// CSV rows (path_id, t, mode, value).
void write_path_csv(std::ostream& out, const SamplePath& path, std::uint64_t path_id, bool header);

}  // namespace regcalc
