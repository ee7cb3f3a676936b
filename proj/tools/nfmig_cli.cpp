// Command-line front end: simulate one scenario, sweep a parameter, or print
// the strategy decision grid.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nfmig/nfmig.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kParse = 2, kValidation = 3, kIo = 4, kOther = 5 };

int report(const std::exception& e, int code) {
  std::cerr << "nfmig: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Live-migration simulator for virtualized 5G core network functions"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string objective;

  auto* simulate = app.add_subcommand("simulate", "run one scenario and export metrics");
  simulate->add_option("scenario", scenario_file, "scenario file")->required();
  simulate->add_option("--seed", seed, "override the scenario seed");
  simulate->add_option("--out", out_dir, "output directory")->capture_default_str();
  simulate->add_option("--objective", objective, "downtime|migration-time|bytes")
      ->check(CLI::IsMember({"downtime", "migration-time", "bytes"}));

  std::vector<std::string> params;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "run a scenario once per parameter value");
  sweep->add_option("scenario", scenario_file, "scenario file")->required();
  sweep->add_option("--param", params, "KEY=V1,V2,...")->required();
  sweep->add_option("--out", out_dir, "output directory")->capture_default_str();
  sweep->add_option("--jobs", jobs, "scenarios run concurrently")->capture_default_str();

  auto* table = app.add_subcommand("policy-table", "print the strategy decision grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (table->parsed()) {
      std::cout << nfmig::format_policy_table();
      return kOk;
    }
    if (simulate->parsed()) {
      const nfmig::Scenario sc = nfmig::load_scenario(scenario_file);
      nfmig::RunOptions opts;
      opts.seed = seed;
      if (!objective.empty()) opts.objective = nfmig::parse_objective(objective);
      const nfmig::MetricsBundle bundle = nfmig::run_scenario(sc, opts);
      nfmig::export_metrics(bundle, out_dir);
      std::cout << nfmig::summary_txt(bundle);
      return kOk;
    }
    if (sweep->parsed()) {
      const auto doc = nfmig::read_scenario_document(scenario_file);
      for (const auto& p : params) {
        const auto spec = nfmig::parse_sweep_param(p);
        std::cout << nfmig::run_sweep(doc, scenario_file, spec, std::filesystem::path(out_dir), jobs);
      }
      return kOk;
    }
  } catch (const nfmig::ParseError& e) {
    return report(e, kParse);
  } catch (const nfmig::ValidationError& e) {
    return report(e, kValidation);
  } catch (const nfmig::IoError& e) {
    return report(e, kIo);
  } catch (const std::exception& e) {
    return report(e, kOther);
  }
  return kUsage;
}
