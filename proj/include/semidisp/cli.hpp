#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "semidisp/experiments.hpp"
#include "semidisp/kernels.hpp"
#include "semidisp/nls.hpp"
#include "semidisp/report.hpp"

namespace semidisp::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kConfigSchema = "semidisp-config/1";
inline constexpr const char* kReportSchema = "semidisp-report/1";

// Typed access to one JSON object. Every key read is remembered; finish() rejects
// the rest. Errors carry the dotted key path.
class ConfigReader {
 public:
  ConfigReader(const nlohmann::json& obj, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback);
  double number(const std::string& key);
  long integer(const std::string& key, long fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback);
  // number, or the given keyword mapped to `keyword_value`
  double number_or(const std::string& key, const std::string& keyword, double keyword_value, double fallback);
  ConfigReader child(const std::string& key);
  const nlohmann::json* raw(const std::string& key);
  std::string key_path(const std::string& key) const;
  void finish() const;

 private:
  const nlohmann::json* get(const std::string& key);
  const nlohmann::json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

struct ScanJob {
  ScanConfig scan;
  std::vector<std::uint64_t> seeds{0};
};

struct KernelJob {
  KernelDecayConfig base;
  std::vector<double> exponents{4.0, INFINITY};
  double tolerance = 0.1;
  double tolerance_l2 = 0.05;
};

struct WeylJob {
  int d = 1;
  std::vector<double> cutoffs{16, 32, 64};
  long max_q = 8;
  int samples = 24;
  long gauss_max_q = 200;
  double gauss_tol = 1e-12;
  double spread_limit = 2.0;
};

struct HlsJob {
  double mu = 0.5;
  double p = 4.0 / 3.0;
  double q = 4.0 / 3.0;
  int k_min = 6;
  int k_max = 12;
  int pairs = 200;
  double growth_limit = 0.1;
};

struct DataSpec {
  std::string kind = "packet";  // packet | plane_wave
  double width = 1;
  double band = 1;
  std::vector<TorusMode> modes;
  std::vector<int> k;
  std::vector<int> m;
  std::complex<double> amplitude{1.0, 0.0};
  double h_half = 0;  // rescale to this H^{1/2} norm when positive
};

struct NlsJob {
  DomainParams domain;
  DataSpec data;
  NlsConfig nls;
  int picard_iterations = 0;
  double mass_tol = 1e-10;
  double picard_tol = 1e-3;
  double contraction_limit = 0.5;
  std::vector<double> amplitudes;  // nls-scatter: H^{1/2} norms, halving pairs compared
  double decay_factor = 4.0;
  double scaling_band = 1.0;  // allowed deviation of the halving exponent from sigma
};

struct RunConfig {
  std::string command;
  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 0;
  bool plot = false;
  std::variant<ScanJob, KernelJob, WeylJob, HlsJob, NlsJob> job;

  Json echo() const;  // resolved config with defaults filled; output_dir excluded
};

const std::vector<std::string>& commands();

// command-line values that replace config entries
struct Overrides {
  std::optional<std::uint64_t> seed;
  bool plot = false;
  std::optional<std::filesystem::path> output_dir;
};

// Parses and validates the full config for `command`. Throws ValidationError.
RunConfig load_config(const std::string& command, const nlohmann::json& doc, const Overrides& over = {});
RunConfig load_config_file(const std::string& command, const std::filesystem::path& path,
                           const Overrides& over = {});

struct Outcome {
  Json results = Json::array();
  std::vector<std::pair<std::string, bool>> verdicts;
  std::vector<std::pair<std::string, CsvTable>> tables;
  std::optional<std::pair<FitResult, PlotLabels>> plot;
};

Outcome execute(const RunConfig& cfg);
Json report_json(const RunConfig& cfg, const Outcome& out);
// Writes every output file; called only after a complete run.
void write_outputs(const RunConfig& cfg, const Outcome& out, double wall_seconds);

std::string exponents_text(int n, int d, double p);

// exit codes: 0 all verdicts pass, 1 a verdict failed or the run broke down, 2 config error
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semidisp::cli
