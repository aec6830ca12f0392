#pragma once

// Subcommand drivers behind the command line tool. Each returns the process
// exit status: 0 all verdicts pass, 1 any fail, 2 configuration error.

#include "regcalc/config.hpp"
#include "regcalc/experiments.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace regcalc {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

/// Writes paths/<E>_noise.csv and paths/<E>_mild.csv for the first
/// dump_paths paths of the default heat-equation setup.
int run_simulate(const RunConfig& config, int threads, std::ostream& log);

/// Writes estimates.csv: forward integral, scalar QV and A(eps) curves of
/// the dumped paths, one row every estimate_stride steps.
int run_estimate(const RunConfig& config, int threads, std::ostream& log);

/// Runs every selected experiment, writes <E>.csv per experiment and
/// summary.csv, and returns kExitPass iff every summary row passes.
int run_verify(const RunConfig& config, int threads, std::ostream& log);

/// Reads summary.csv from the output directory and prints a convergence
/// report; kExitFail on any fail verdict, kExitConfig if it is missing.
int run_report(const RunConfig& config, std::ostream& log);

struct SummaryLine {
  std::string experiment;
  std::string statistic;
  std::string value;
  std::string comparison;
  std::string threshold;
  std::string verdict;
};

std::vector<SummaryLine> read_summary_csv(std::istream& in);

/// Comma split honouring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace regcalc
