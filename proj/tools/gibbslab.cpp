#include <iostream>

#include "CLI11.hpp"

#include "gibbslab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gibbslab: exact and sampled checks for lattice spin systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  std::string timestamp;
  auto* run = app.add_subcommand("run", "Run the experiment described by a TOML config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--output-dir", output_override, "Write artifacts here instead of output_dir");
  run->add_option("--timestamp", timestamp, "Fixed manifest timestamp");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config without computing");
  validate->add_option("config", validate_path, "Config file")->required()->check(CLI::ExistingFile);

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Summarize a finished run and verify its checksums");
  report->add_option("dir", report_dir, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      gibbslab::ExperimentConfig config = gibbslab::load_config(config_path);
      if (!output_override.empty()) config.output_dir = output_override;
      const gibbslab::ExperimentReport result = gibbslab::run_experiment(config);
      gibbslab::emit_manifest(result, timestamp);
      std::size_t failed = 0;
      for (const auto& r : result.records) {
        if (!r.pass) {
          ++failed;
          std::cout << "FAIL " << r.name << ": " << r.lhs << ' ' << r.relation << ' ' << r.rhs
                    << " (margin " << r.margin() << ")\n";
        }
      }
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << result.records.size() - failed << "/" << result.records.size() << " records pass; artifacts in "
                << config.output_dir.string() << '\n';
      return failed ? 1 : 0;
    }
    if (*validate) {
      const gibbslab::ExperimentConfig config = gibbslab::load_config(validate_path);
      std::cout << "valid " << gibbslab::to_string(config.scenario) << " config\n";
      return 0;
    }
    if (*report) {
      const gibbslab::ReportSummary summary = gibbslab::summarize_run(report_dir);
      std::cout << summary.text;
      return (summary.failed || !summary.checksum_mismatches.empty()) ? 1 : 0;
    }
  } catch (const gibbslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
