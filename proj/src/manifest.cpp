#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gibbslab/experiment.hpp"

namespace gibbslab {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int k = 0; k < length; ++k) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  }
  return os.str();
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::filesystem::path emit_manifest(const ExperimentReport& report, const std::string& timestamp) {
  const auto& dir = report.config.output_dir;
  if (!std::filesystem::is_directory(dir)) throw Error("output directory does not exist: " + dir.string());
  nlohmann::json j;
  j["name"] = report.config.name;
  j["scenario"] = to_string(report.config.scenario);
  j["version"] = kVersion;
  j["config_hash"] = sha256_hex(report.config.source_text);
  j["seeds"] = report.config.seed ? nlohmann::json::array({*report.config.seed}) : nlohmann::json::array();
  nlohmann::json artifacts = nlohmann::json::array();
  std::vector<std::filesystem::path> files = report.artifacts;
  files.emplace_back("report.json");
  for (const auto& a : files) {
    const auto full = dir / a;
    artifacts.push_back({{"path", a.generic_string()},
                         {"sha256", sha256_file(full)},
                         {"bytes", std::filesystem::file_size(full)}});
  }
  j["artifacts"] = artifacts;
  j["timestamp"] = timestamp.empty() ? utc_now() : timestamp;
  const auto path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  return path;
}

ReportSummary summarize_run(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("no such run directory: " + dir.string());
  const nlohmann::json report = nlohmann::json::parse(read_file(dir / "report.json"));
  ReportSummary out;
  std::ostringstream text;
  text << report.value("name", "") << " (" << report.value("scenario", "") << ")\n";
  for (const auto& r : report.at("records")) {
    ++out.records;
    const bool pass = r.at("pass").get<bool>();
    if (!pass) ++out.failed;
    text << (pass ? "PASS " : "FAIL ") << r.at("name").get<std::string>() << ": " << std::setprecision(10)
         << r.at("lhs").get<double>() << ' ' << r.at("relation").get<std::string>() << ' '
         << r.at("rhs").get<double>() << " (margin " << r.at("margin").get<double>() << ", tol "
         << r.at("tolerance").get<double>() << ", " << r.at("provenance").get<std::string>() << ")\n";
  }
  for (const auto& w : report.at("warnings")) text << "warning: " << w.get<std::string>() << '\n';
  const auto manifest_path = dir / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    const nlohmann::json manifest = nlohmann::json::parse(read_file(manifest_path));
    for (const auto& a : manifest.at("artifacts")) {
      const std::string name = a.at("path").get<std::string>();
      const auto full = dir / name;
      if (!std::filesystem::exists(full) || sha256_file(full) != a.at("sha256").get<std::string>()) {
        out.checksum_mismatches.push_back(name);
        text << "checksum mismatch: " << name << '\n';
      }
    }
  } else {
    out.checksum_mismatches.push_back("manifest.json");
    text << "manifest.json missing\n";
  }
  text << out.records - out.failed << "/" << out.records << " records pass\n";
  out.text = text.str();
  return out;
}

}  // namespace gibbslab
