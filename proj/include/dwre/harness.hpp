#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwre/knn.hpp"
#include "dwre/lilypond.hpp"
#include "dwre/ppgen.hpp"
#include "dwre/stats.hpp"

namespace dwre {

using Json = nlohmann::ordered_json;

inline constexpr int kConfigVersion = 1;

/// Experiment settings. Keys not listed here are rejected when parsing.
struct ExperimentConfig {
  int version = kConfigVersion;
  std::string kind = "percolation";  // percolation | hop_tail | event_curve | chain_bound | us_suite | reveal
  std::string model = "lilypond";    // knn | lilypond
  double lambda = 1.0;
  double s = 100;                     // side of the analysis box
  std::optional<double> padding;      // model default when absent
  int K = 1;
  std::vector<double> pi;             // uniform when empty
  int replicates = 100;
  std::uint64_t base_seed = 1;
  int threads = 1;

  std::string event = "A8";
  std::vector<double> s_grid;
  double alpha = 0.5;
  double b = 1.0;
  int n = 1;
  std::vector<std::array<double, 3>> chain_grid;  // (s, b, n)
  std::string precondition = "separation";       // full | separation | none
  int target_good = 0;                            // us_suite: stop once this many replicates satisfy the precondition
  int natural_replicates = 0;
  double natural_s = 4;
  int sites_half = 4;                             // reveal: sites in [-h, h]^2
  int bootstrap = 200;

  void validate() const;
  double effective_padding() const;
  KnnModel knn() const;
  MarkLaw law() const;
  DevicePrecondition device_precondition() const;

  Json to_json() const;
  static ExperimentConfig from_json(const Json& j);
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct ExperimentReport {
  std::string kind;
  Json config;
  Json estimates = Json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<Json> rows;  // raw per-replicate rows
  double wall_seconds = 0;

  Json to_json(bool with_wall_clock = true) const;
};

/// Per-replicate outcome of the walk suite on Q_s(o) inside a padded sample.
struct WalkReplicate {
  std::uint64_t seed = 0;
  std::size_t points = 0;
  BasinStats stats;
};

std::vector<WalkReplicate> run_walk_suite(const ExperimentConfig& cfg);
ExperimentReport percolation_report(const ExperimentConfig& cfg, const std::vector<WalkReplicate>& suite);
ExperimentReport hop_tail_report(const ExperimentConfig& cfg, const std::vector<WalkReplicate>& suite);

ExperimentReport run_percolation(const ExperimentConfig& cfg);
ExperimentReport run_hop_tail(const ExperimentConfig& cfg);

/// Evaluates a named event on a local configuration around o (sampled on Q_3s).
bool evaluate_event(const std::string& event, const Configuration2& phi, double s, const ExperimentConfig& cfg);
/// exp(-lambda (s^2 - (s - s^{-2})^2)).
double a2_probability(double s, double lambda);

ExperimentReport run_event_curve(const ExperimentConfig& cfg);
ExperimentReport run_chain_bound(const ExperimentConfig& cfg);
ExperimentReport run_us_suite(const ExperimentConfig& cfg);
ExperimentReport run_reveal(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace dwre
