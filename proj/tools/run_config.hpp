#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fal/core.hpp"
#include "fal/problems.hpp"
#include "fal/trace.hpp"

namespace fal::run {

using json = nlohmann::json;

// Malformed or inconsistent config; `key()` names the offending entry.
class ConfigError : public InvalidParameter {
 public:
  ConfigError(std::string key, const std::string& what)
      : InvalidParameter(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class Solver { scc, ncc, alm };

const char* to_string(Solver s);

struct RunConfig {
  std::string problem;
  InstanceParams overrides;  // from "problem.<key>" entries
  Solver solver = Solver::scc;

  double eps = 0.0;  // ε̄ for scc, ε otherwise
  std::optional<double> eps_hat0;
  double tau = 0.5;
  double eps0 = 1.0;
  double Lambda = 10.0;

  std::optional<Vector> start_x, start_y;
  bool random_start = false;
  std::uint64_t seed = 0;
  std::optional<Vector> lambda_x0, lambda_y0, x_nf;

  std::int64_t max_outer = 0;  // saddle solver caps; 0 picks the defaults
  std::int64_t max_inner = 0;
  std::int64_t ncc_max_outer = 0;

  Phase trace_detail = Phase::scc;  // finest phase written to trace.csv
  std::optional<std::string> out_dir;
  bool report_bounds = false;

  json source;  // the parsed file, echoed into report.json
};

// Parses a flat JSON object. Unknown keys, wrong types and violated
// cross-field rules throw ConfigError naming the key.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::filesystem::path& path);

struct RunResult {
  int exit_code = 0;  // 0 certified, 2 iteration limit, 3 finished but not certified
  json report;
  std::string trace_csv;
  std::string plot_csv;
};

// Executes one configured solve in memory.
RunResult execute(const RunConfig& cfg, bool include_timing = true);

// Bound report for the configured solver. Missing constants are listed under
// "missing" and the remaining sections are still filled in.
json bounds_report(const RunConfig& cfg);

// KKT bundle of a stored report recomputed from its point and multipliers.
json recompute_kkt(const json& report);

// Output directory: explicit flag, then config, then FAL_OUT_DIR, then "fal_out".
std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag,
                                      const RunConfig& cfg);

struct SolveOptions {
  std::optional<std::string> out_dir;
  bool emit_plot_data = false;
  bool report_bounds = false;
};

// Loads, runs and writes trace.csv / report.json (and plot_data.csv). Returns
// the process exit code; diagnostics go to `log`.
int solve_file(const std::filesystem::path& config, const SolveOptions& opts, std::ostream& log);

// Runs several configs concurrently, each into its own subdirectory named
// after the config file stem. Returns the largest exit code.
int solve_batch(const std::vector<std::filesystem::path>& configs, const SolveOptions& opts,
                std::ostream& log);

}  // namespace fal::run
