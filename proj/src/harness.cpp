#include "regcalc/harness.hpp"

#include "regcalc/noise.hpp"
#include "regcalc/regular_calculus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

namespace fs = std::filesystem;

namespace regcalc {

namespace {

constexpr std::uint64_t kStreamSimulate = 100;

std::ofstream open_output(const fs::path& file) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("output_dir", "cannot write " + file.string());
  return out;
}

MildPath simulate_dump_path(const RunConfig& c, std::size_t p) {
  const TimeGrid grid = TimeGrid::from_step(c.horizon, c.dt);
  const auto spec = default_spec(c, c.modes);
  auto noise = std::make_shared<const NoisePath>(sample_q_wiener(grid, spec->q, {c.master_seed, p, kStreamSimulate}));
  return simulate_mild(spec, noise);
}

}  // namespace

int run_simulate(const RunConfig& c, int threads, std::ostream& log) {
  std::vector<MildPath> paths(static_cast<std::size_t>(c.dump_paths));
  parallel_for(paths.size(), threads, [&](std::size_t p) { paths[p] = simulate_dump_path(c, p); });
  const fs::path dir = fs::path(c.output_dir) / "paths";
  auto noise_out = open_output(dir / "noise.csv");
  auto mild_out = open_output(dir / "mild.csv");
  auto rem_out = open_output(dir / "remainder.csv");
  for (std::size_t p = 0; p < paths.size(); ++p) {
    write_path_csv(noise_out, paths[p].noise->path, p, p == 0);
    write_path_csv(mild_out, paths[p].X, p, p == 0);
    write_path_csv(rem_out, compute_remainder(paths[p]), p, p == 0);
  }
  log << "simulate: wrote " << paths.size() << " paths to " << dir.string() << '\n';
  return kExitPass;
}

int run_estimate(const RunConfig& c, int threads, std::ostream& log) {
  const TimeGrid grid = TimeGrid::from_step(c.horizon, c.dt);
  const EpsLadder ladder(grid, c.eps_multiples);
  struct Curves {
    std::vector<Eigen::VectorXd> forward, qv, a;
  };
  std::vector<Curves> curves(static_cast<std::size_t>(c.dump_paths));
  parallel_for(curves.size(), threads, [&](std::size_t p) {
    const MildPath path = simulate_dump_path(c, p);
    const SamplePath y = compute_remainder(path);
    const SamplePath m = path.martingale_part();
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      curves[p].forward.push_back(forward_integral_eps(path.X, m, ladder.rung(i)));
      curves[p].qv.push_back(scalar_qv_eps(path.X, ladder.rung(i), QvNorm::hilbert));
      curves[p].a.push_back(a_eps_statistic(y, y, ladder.rung(i), path.spec->gen));
    }
  });
  auto out = open_output(fs::path(c.output_dir) / "estimates.csv");
  out << "path_id,epsilon,t,forward_X_dM,scalar_qv_X,A_eps_Y\n";
  for (std::size_t p = 0; p < curves.size(); ++p) {
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      for (int j = 0; j <= grid.steps(); j += c.estimate_stride) {
        out << p << ',' << format_number(ladder.eps(i)) << ',' << format_number(grid.time(j)) << ','
            << format_number(curves[p].forward[i][j]) << ',' << format_number(curves[p].qv[i][j]) << ','
            << format_number(curves[p].a[i][j]) << '\n';
      }
    }
  }
  log << "estimate: wrote estimator curves for " << curves.size() << " paths\n";
  return kExitPass;
}

int run_verify(const RunConfig& c, int threads, std::ostream& log) {
  std::vector<ExperimentResult> results;
  for (const auto& id : c.experiments) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result = run_experiment(id, c, threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto out = open_output(fs::path(c.output_dir) / (id + ".csv"));
    write_rows_csv(out, result.rows);
    log << id << ' ' << (result.pass() ? "pass" : "FAIL") << " (" << std::fixed << std::setprecision(1) << seconds
        << " s)\n";
    log.unsetf(std::ios::fixed);
    for (const auto& s : result.summary) {
      log << "  " << s.statistic << " = " << format_number(s.value) << ' ' << s.comparison << ' '
          << format_number(s.threshold);
      if (s.comparison == "in") log << ".." << format_number(s.threshold_high);
      log << (s.pass ? "  pass" : "  FAIL") << '\n';
    }
    results.push_back(std::move(result));
  }
  auto summary = open_output(fs::path(c.output_dir) / "summary.csv");
  write_summary_csv(summary, results);
  const bool all = std::all_of(results.begin(), results.end(), [](const ExperimentResult& r) { return r.pass(); });
  return all ? kExitPass : kExitFail;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (const char ch : line) {
    if (ch == '"') quoted = !quoted;
    else if (ch == ',' && !quoted) fields.emplace_back();
    else if (ch != '\r') fields.back() += ch;
  }
  return fields;
}

std::vector<SummaryLine> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("summary.csv", "empty file");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"experiment", "statistic", "value", "comparison", "threshold", "verdict"}) {
    if (!col.count(name)) throw ConfigError("summary.csv", std::string("missing column ") + name);
  }
  std::vector<SummaryLine> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw ConfigError("summary.csv", "ragged row: " + line);
    out.push_back({f[col["experiment"]], f[col["statistic"]], f[col["value"]], f[col["comparison"]],
                   f[col["threshold"]], f[col["verdict"]]});
  }
  return out;
}

int run_report(const RunConfig& c, std::ostream& log) {
  const fs::path file = fs::path(c.output_dir) / "summary.csv";
  std::ifstream in(file);
  if (!in) throw ConfigError("output_dir", "no summary.csv in " + c.output_dir + " (run verify first)");
  const auto lines = read_summary_csv(in);
  std::map<std::string, std::pair<int, int>> tally;  // experiment -> (pass, total)
  for (const auto& l : lines) {
    auto& t = tally[l.experiment];
    t.first += l.verdict == "pass";
    ++t.second;
  }
  bool all = !lines.empty();
  log << std::left << std::setw(6) << "exp" << std::setw(8) << "checks" << "verdict\n";
  for (const auto& [id, t] : tally) {
    const bool ok = t.first == t.second;
    all = all && ok;
    log << std::setw(6) << id << std::setw(8) << (std::to_string(t.first) + "/" + std::to_string(t.second))
        << (ok ? "pass" : "FAIL") << '\n';
  }
  for (const auto& l : lines) {
    if (l.verdict != "pass") {
      log << "  failing: " << l.experiment << ' ' << l.statistic << " = " << l.value << " (" << l.comparison << ' '
          << l.threshold << ")\n";
    }
  }
  return all ? kExitPass : kExitFail;
}

}  // namespace regcalc
