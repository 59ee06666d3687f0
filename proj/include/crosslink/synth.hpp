#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "crosslink/graph.hpp"
#include "crosslink/month.hpp"
#include "crosslink/user.hpp"

namespace crosslink {

/// Knobs of the synthetic crawl generator.
struct SynthConfig {
  std::size_t n_users = 100000;
  double target_avg_degree = 20.0;
  /// Tail exponent of the power-law degree targets, P(k) ~ k^-exponent.
  double degree_exponent = 2.3;
  YearMonth month_from{2012, 8};
  YearMonth month_to{2016, 8};
  YearMonth fb_launch_month{2014, 6};
  /// Registration rate multiplier from fb_launch_month on; the extra users are FBOnly.
  double surge_multiplier = 1.0;
  /// Degree multiplier applied to surge users.
  double surge_degree_factor = 0.5;
  PerOption<double> option_mix{0.1106, 0.4552, 0.3435, 0.0907};
  /// Multiplicative lift of each feature (FeatureVector order) for planted
  /// users; the bio entry lifts the probability of having a biography.
  std::array<double, FeatureVector::kSize> influence_feature_shift{2.0, 6.0, 3.0, 2.5, 6.0, 1.5};
  /// Planted users are this top fraction by in-degree.
  double planted_fraction = 0.1;
  /// Share of follow stubs that target users registered no later than the follower.
  double temporal_locality = 0.8;
  /// Log-feature slope on standardized log in-degree, in units of each
  /// feature's own log-scale spread.
  double feature_degree_coupling = 0.6;
  std::uint64_t seed = 42;

  /// Throws UsageError on an out-of-range field.
  void validate() const;
};

SynthConfig synth_config_from_json(std::string_view json_text);
std::string synth_config_to_json(const SynthConfig& cfg);

struct SynthDataset {
  SocialGraph graph;
  BuildStats build;
  std::vector<bool> planted;      // per node
  std::vector<bool> surge;        // per node
  std::vector<std::string> log;   // repairs and clamps applied during generation
};

/// Deterministic in (cfg, cfg.seed).
SynthDataset generate_dataset(const SynthConfig& cfg);

struct SynthFiles {
  std::string users_jsonl;
  std::string edges_tsv;
};

SynthFiles to_files(const SynthDataset& data);
SynthFiles generate(const SynthConfig& cfg);

}  // namespace crosslink
