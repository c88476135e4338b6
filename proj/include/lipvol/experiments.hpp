#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lipvol::experiments {

enum class Kind { RandomGraphSweep, HypercubeSuite, QseriesReport, ProfileReport };

std::string to_string(Kind k);
Kind parse_kind(const std::string& text);

/// Volume estimator used by the random-graph sweep.
enum class Estimator { Smc, Sis };

std::string to_string(Estimator e);
Estimator parse_estimator(const std::string& text);

struct ExperimentConfig {
  Kind kind = Kind::RandomGraphSweep;
  std::size_t n = 400;
  std::vector<double> d_list;
  std::string T_rule = "logd";  // "logd" or "fixed:<x>"
  std::uint64_t samples = 20000;
  std::uint64_t replicas = 16;
  std::uint64_t seed = 1;
  std::string output_path;
  unsigned L = 5;
  unsigned threads = 1;
  std::size_t exact_max_n = 8;  // graphs this small go through ehrhart_c
  Estimator estimator = Estimator::Smc;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Applies one "key=value" assignment. Unknown keys and malformed values
/// throw std::invalid_argument.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

/// Flat key=value text, one per line; '#' starts a comment.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Throws std::invalid_argument when the configuration cannot be run.
void validate(const ExperimentConfig& cfg);

/// T for the profile window at a given d.
double window_T(const ExperimentConfig& cfg, double d);

struct ExperimentRow {
  double d = 0.0;
  std::optional<double> estimate;  // empty when the row is unusable
  double stderr = 0.0;             // across replicas
  double target = 0.0;             // pi^2 / (6d)
  double old_lower = 0.0;          // 1 / (2d)
  double old_upper = 0.0;          // 4 log^2 d / d
  double mc_stderr = 0.0;          // mean within-replica error
  double zero_weight_fraction = 0.0;
  double mean_giant_size = 0.0;
  std::uint64_t usable_replicas = 0;
  bool exact = false;
  bool usable = true;

  bool operator==(const ExperimentRow&) const = default;
};

ExperimentRow make_row(double d);

struct HypercubeRow {
  unsigned d = 0;
  double kdd_volume_log = 0.0;
  std::optional<std::string> kdd_volume_exact;  // "p/q", d <= 12
  double kdd_ratio = 0.0;                        // V_d / (sqrt(pi) d^{3/2})
  double upper_log = 0.0;                        // log hypercube_c_upper(d, L)
  double lower_log = 0.0;                        // pi^2 / (6d)
  std::optional<std::string> volume_exact;       // Vol(P_{Q_d}), d in {2, 3}
  std::optional<double> exact_log_c;
  std::optional<bool> bound_holds;
  std::optional<bool> lifting_pass;
  std::optional<bool> galvin_tetali_pass;

  bool operator==(const HypercubeRow&) const = default;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;

  bool operator==(const Check&) const = default;
};

struct ExperimentRecord {
  int schema_version = 0;
  std::string library_version;
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  std::vector<HypercubeRow> hypercube;
  std::vector<Check> checks;
  double wall_time = 0.0;

  bool all_pass() const;
  bool operator==(const ExperimentRecord&) const = default;
};

ExperimentRecord run_random_graph_sweep(const ExperimentConfig& cfg);
ExperimentRecord run_hypercube_suite(unsigned L);
ExperimentRecord run_hypercube_suite(const ExperimentConfig& cfg);
ExperimentRecord run_qseries_report(const ExperimentConfig& cfg);
ExperimentRecord run_profile_report(const ExperimentConfig& cfg);
/// Dispatches on cfg.kind after validation.
ExperimentRecord run_experiment(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentRecord& rec);
ExperimentRecord record_from_json(const nlohmann::json& j);

inline constexpr const char* kCsvHeader = "d,estimate,stderr,target,old_lower,old_upper";
std::string rows_to_csv(const ExperimentRecord& rec);

/// Writes <base>.json and <base>.csv where <base> is path without a trailing
/// ".json" or ".csv". Returns the two paths written.
std::vector<std::string> emit_report(const ExperimentRecord& rec, const std::string& path);

}  // namespace lipvol::experiments
