#include "regcalc/paths.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace regcalc {

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("TimeGrid: horizon must be > 0");
  if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
  dt_ = horizon / steps;
}

TimeGrid TimeGrid::from_step(double horizon, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be > 0");
  const double ratio = horizon / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio) || steps < 1.0) {
    throw std::invalid_argument("TimeGrid: dt does not divide the horizon");
  }
  return TimeGrid(horizon, static_cast<int>(steps));
}

TimeGrid TimeGrid::coarsened(int factor) const {
  if (factor < 1 || steps_ % factor != 0) {
    throw std::invalid_argument("TimeGrid::coarsened: factor must divide the step count");
  }
  return TimeGrid(horizon_, steps_ / factor);
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": paths live on different grids");
}

ScalarPath coarsen(const ScalarPath& path, int factor) {
  const TimeGrid grid = path.grid.coarsened(factor);
  Eigen::VectorXd v(grid.nodes());
  for (int j = 0; j < grid.nodes(); ++j) v[j] = path.values[j * factor];
  return {grid, std::move(v)};
}

SamplePath coarsen(const SamplePath& path, int factor) {
  const TimeGrid grid = path.grid.coarsened(factor);
  Eigen::MatrixXd v(grid.nodes(), path.dim());
  for (int j = 0; j < grid.nodes(); ++j) v.row(j) = path.values.row(j * factor);
  return {grid, std::move(v)};
}

Eigen::VectorXd cumulative_trapezoid(const Eigen::VectorXd& f, double dt) {
  Eigen::VectorXd out(f.size());
  if (f.size() == 0) return out;
  out[0] = 0.0;
  for (Eigen::Index j = 1; j < f.size(); ++j) out[j] = out[j - 1] + 0.5 * dt * (f[j - 1] + f[j]);
  return out;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::min(workers, count));
  for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace regcalc
