#pragma once

// The verification experiments E1..E8. Each one simulates its paths in
// parallel (results are stored by path index and reduced in index order, so
// the output does not depend on the thread count), computes per-path
// statistics and aggregates them into summary rows with a verdict.

#include "regcalc/config.hpp"
#include "regcalc/convolution.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace regcalc {

/// One per-path (or aggregate, path_id = -1) statistic.
struct ReportRow {
  std::string experiment;
  long path_id = -1;
  double epsilon = 0.0;  // 0 when the statistic has no regularization step
  std::string statistic;
  double value = 0.0;
  std::string verdict;   // pass | fail | empty for plain diagnostics
};

struct SummaryRow {
  std::string experiment;
  std::string anchor;      // statement under test
  std::string statistic;
  double value = 0.0;
  std::string comparison;  // <, <=, >=, in, ==
  double threshold = 0.0;
  double threshold_high = 0.0;  // upper end for "in"
  double fitted_rate = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  std::string id;
  std::string anchor;
  std::vector<ReportRow> rows;
  std::vector<SummaryRow> summary;

  bool pass() const;
};

/// Heat-equation configuration on `modes` modes: Dirichlet Laplacian, Q with
/// lambda_k = k^{-q_alpha}, sigma = sigma_scale * Id, b_k = drift / k plus the
/// diagonal feedback, x0 from the configured profile.
std::shared_ptr<const ConvolutionSpec> default_spec(const RunConfig& config, int modes);

ExperimentResult run_experiment(const std::string& id, const RunConfig& config, int threads);

std::vector<std::string> experiment_ids();
std::string experiment_anchor(const std::string& id);

/// Shortest round-trip decimal form, used for every CSV value.
std::string format_number(double value);

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<ExperimentResult>& results);

}  // namespace regcalc
