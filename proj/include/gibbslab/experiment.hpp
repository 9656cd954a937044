#pragma once

// Declarative experiments: a TOML config names a scenario and its models;
// running it writes CSV/JSON artifacts and a report of inequality checks.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gibbslab/entropy.hpp"
#include "gibbslab/error.hpp"
#include "gibbslab/measures.hpp"
#include "gibbslab/metric.hpp"

namespace gibbslab {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Scenario {
  oscillation,
  young,
  gcb_scan,
  entropy_density,
  distance,
  theorem_check,
  glauber,
  decimation,
  axioms
};

const char* to_string(Scenario s);
std::optional<Scenario> scenario_from_string(const std::string& name);

/// product(p), ising1d(J,h), ising2d-torus(J,h,L), or a potential file
/// (tabulated on a torus of side L unless it is 1D nearest-neighbour).
struct ModelSpec {
  std::string kind = "product";
  double p = 0.5;
  double J = 0.0;
  double h = 0.0;
  int side = 0;
  int dimension = 1;
  std::filesystem::path potential_file;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::oscillation;
  std::string name;
  std::filesystem::path output_dir;
  std::optional<std::uint64_t> seed;

  ModelSpec mu;                  // reference / dynamics model
  std::optional<ModelSpec> nu;   // compared law

  std::vector<int> radii{0, 1, 2};
  std::vector<double> betas;     // empty: default grid
  std::optional<double> constant;  // C; unset means "scan"
  double tolerance = 1e-9;

  // Random function families.
  int count = 100;
  std::vector<int> dimensions{1};
  std::vector<int> alphabets{2};
  int max_sites = 3;

  // oscillation scenario
  std::optional<nlohmann::json> function;
  std::filesystem::path function_file;
  std::vector<std::vector<double>> psi;

  // entropy-density
  int n_max = 6;

  // glauber
  int side = 64;
  double initial_p = 0.5;
  std::vector<int> checkpoints{0, 1, 2, 4, 8, 16};
  int samples = 2000;
  int bootstrap = 200;
  int balance_side = 3;

  // decimation
  std::vector<double> couplings{0.5, 1.0, 1.5};
  std::vector<std::pair<double, double>> pairs{{0.5, 1.0}, {1.0, 0.3}, {0.2, 0.8}};

  std::string source_text;  // the TOML as read
};

/// Parses and validates. Relative paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".",
                              const std::string& source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Field-level checks, including tabulation caps, without computing
/// anything. Throws ConfigError.
void validate_config(const ExperimentConfig& config);

struct CheckRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string relation = "<=";  // "<=", ">=" or "=="
  double tolerance = 0.0;
  bool pass = false;
  bool sampled = false;
  std::optional<double> stderr_lhs;
  std::optional<double> stderr_rhs;

  /// Nonnegative when the relation holds exactly; "==" gives -|lhs - rhs|.
  double margin() const;
};

/// Passes when margin() >= -tolerance.
CheckRecord make_check(std::string name, double lhs, std::string relation, double rhs,
                       double tolerance, bool sampled = false);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CheckRecord> records;
  std::vector<std::filesystem::path> artifacts;  // relative to output_dir
  std::vector<std::string> warnings;
  nlohmann::json summary;

  bool all_passed() const;
};

MarginalSource model_source(const ModelSpec& model);
Potential model_potential(const ModelSpec& model);

/// Validates, creates output_dir, runs, writes artifacts and report.json.
ExperimentReport run_experiment(const ExperimentConfig& config);

nlohmann::json report_json(const ExperimentReport& report);

/// Writes manifest.json into the output directory, which must exist.
std::filesystem::path emit_manifest(const ExperimentReport& report,
                                    const std::string& timestamp = "");

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ReportSummary {
  std::size_t records = 0;
  std::size_t failed = 0;
  std::vector<std::string> checksum_mismatches;
  std::string text;
};

/// Reads report.json and manifest.json from a run directory and re-hashes
/// the artifacts.
ReportSummary summarize_run(const std::filesystem::path& dir);

}  // namespace gibbslab
