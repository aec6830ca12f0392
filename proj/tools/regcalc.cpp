// regcalc: batch runner for the regularization-calculus experiments.
//
//   regcalc verify --config configs/default.cfg --out out --threads 4
//   regcalc report --out out

#include "regcalc/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Stochastic calculus via regularization: simulation and verification harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string experiments;
  std::vector<std::string> overrides;
  int threads = 1;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "worker threads for path-level parallelism")->check(CLI::PositiveNumber);
    sub->add_option("--experiments", experiments, "comma separated subset of E1..E8");
    sub->add_option("--set", overrides, "extra key=value override, repeatable");
  };
  auto* simulate = app.add_subcommand("simulate", "sample noise and mild paths, write them as CSV");
  auto* estimate = app.add_subcommand("estimate", "write regularized estimator curves of sampled paths");
  auto* verify = app.add_subcommand("verify", "run the experiments and write per-experiment CSVs and summary.csv");
  auto* report = app.add_subcommand("report", "summarize an existing summary.csv");
  for (auto* sub : {simulate, estimate, verify, report}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : regcalc::kExitConfig;
  }

  try {
    regcalc::RunConfig config = config_path.empty() ? regcalc::RunConfig{} : regcalc::load_config(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    const CLI::App* chosen = app.get_subcommands().front();
    if (chosen->count("--experiments")) config.experiments = regcalc::split_list(experiments);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw regcalc::ConfigError(kv, "expected key=value");
      regcalc::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    regcalc::validate(config);

    if (app.got_subcommand(simulate)) return regcalc::run_simulate(config, threads, std::cout);
    if (app.got_subcommand(estimate)) return regcalc::run_estimate(config, threads, std::cout);
    if (app.got_subcommand(verify)) return regcalc::run_verify(config, threads, std::cout);
    return regcalc::run_report(config, std::cout);
  } catch (const regcalc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return regcalc::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return regcalc::kExitFail;
  }
}
