#pragma once

// Uniform time grids and grid-indexed paths. All estimators read paths through
// the boundary extension X(t) = X(0) for t <= 0 and X(t) = X(T) for t >= T,
// which on a grid amounts to clamping node indices into [0, J].

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace regcalc {

class TimeGrid {
 public:
  TimeGrid() = default;
  /// Grid 0 = t_0 < ... < t_J = horizon with dt = horizon / steps.
  TimeGrid(double horizon, int steps);

  /// Builds the grid from a step; throws unless horizon / dt is an integer.
  static TimeGrid from_step(double horizon, double dt);

  double horizon() const { return horizon_; }
  double dt() const { return dt_; }
  int steps() const { return steps_; }
  int nodes() const { return steps_ + 1; }
  double time(int j) const { return j == steps_ ? horizon_ : dt_ * j; }
  int clamp(int j) const { return std::clamp(j, 0, steps_); }

  /// Grid with `factor` times fewer steps on the same horizon.
  TimeGrid coarsened(int factor) const;

  bool operator==(const TimeGrid& other) const = default;

 private:
  double horizon_ = 1.0;
  double dt_ = 1.0;
  int steps_ = 1;
};

struct ScalarPath {
  TimeGrid grid;
  Eigen::VectorXd values;  // one entry per node

  double at(int j) const { return values[grid.clamp(j)]; }
  double sup_abs() const { return values.cwiseAbs().maxCoeff(); }
};

/// H_N-valued path, one row of coefficients per node.
struct SamplePath {
  TimeGrid grid;
  Eigen::MatrixXd values;  // nodes x N

  Eigen::Index dim() const { return values.cols(); }
  auto at(int j) const { return values.row(grid.clamp(j)); }
  /// max_j |X(t_j)|_H
  double sup_norm() const { return values.rowwise().norm().maxCoeff(); }
  ScalarPath component(Eigen::Index k) const { return {grid, values.col(k)}; }
};

/// Path of diagonal operators, one row of diagonal entries per node.
struct OperatorPath {
  TimeGrid grid;
  Eigen::MatrixXd diag;  // nodes x N
};

/// H_N (x) H_N-valued curve.
struct TensorCurve {
  TimeGrid grid;
  std::vector<Eigen::MatrixXd> values;
};

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what);

/// Keeps every `factor`-th node; the path realization is unchanged.
ScalarPath coarsen(const ScalarPath& path, int factor);
SamplePath coarsen(const SamplePath& path, int factor);

/// Cumulative trapezoidal integral of node values; result[0] = 0.
Eigen::VectorXd cumulative_trapezoid(const Eigen::VectorXd& f, double dt);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once; callers write results by index so the outcome does
/// not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace regcalc
