#include "crosslink/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "crosslink/error.hpp"
#include "crosslink/ingest.hpp"
#include "crosslink/rng.hpp"

namespace crosslink {

void SynthConfig::validate() const {
  auto fail = [](std::string_view field, std::string_view why) {
    throw UsageError(fmt::format("synth config '{}': {}", field, why));
  };
  if (n_users < 2) fail("n_users", "needs at least 2 users");
  if (n_users > std::numeric_limits<NodeId>::max()) fail("n_users", "too many users");
  if (!(target_avg_degree >= 1.0)) fail("target_avg_degree", "must be >= 1");
  if (!(degree_exponent > 1.0)) fail("degree_exponent", "must exceed 1");
  if (month_to < month_from) fail("month_to", "precedes month_from");
  if (!(surge_multiplier >= 1.0)) fail("surge_multiplier", "must be >= 1");
  if (!(surge_degree_factor > 0.0)) fail("surge_degree_factor", "must be positive");
  double mix = 0.0;
  for (double f : option_mix) {
    if (!(f >= 0.0 && f <= 1.0)) fail("option_mix", "fractions must lie in [0, 1]");
    mix += f;
  }
  if (std::abs(mix - 1.0) > 1e-9) fail("option_mix", "must sum to 1");
  if (option_mix[index_of(LinkingOption::FBOnly)] > 0.0 && month_to < fb_launch_month) {
    fail("fb_launch_month", "falls after month_to while option_mix has FBOnly users");
  }
  for (double lift : influence_feature_shift) {
    if (!(lift > 0.0)) fail("influence_feature_shift", "lifts must be positive");
  }
  if (!(planted_fraction >= 0.0 && planted_fraction <= 1.0)) fail("planted_fraction", "must lie in [0, 1]");
  if (!(temporal_locality >= 0.0 && temporal_locality <= 1.0)) {
    fail("temporal_locality", "must lie in [0, 1]");
  }
  if (!std::isfinite(feature_degree_coupling)) fail("feature_degree_coupling", "must be finite");
}

namespace {

using nlohmann::json;

struct FeatureModel {
  double log_median;
  double log_spread;
};

// Followings, followers, tweets, likes, lists on a log-normal scale.
constexpr std::array<FeatureModel, 5> kFeatureModels = {{
    {5.3, 0.8},  // ~200 followings
    {5.0, 0.8},  // ~150 followers
    {7.0, 0.9},  // ~1100 tweets
    {6.2, 0.9},  // ~500 likes
    {1.2, 0.7},  // ~3 lists
}};
constexpr double kBioRate = 0.55;
constexpr double kDegreeCorrelation = 0.9;

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void read_month(const json& j, const char* key, YearMonth& out) {
  if (auto it = j.find(key); it != j.end()) out = YearMonth::parse_or_throw(it->get<std::string>());
}

/// Index of the first cumulative weight strictly greater than u.
std::size_t pick(const std::vector<double>& cumulative, std::size_t limit, Rng& rng) {
  const double u = rng.uniform() * cumulative[limit - 1];
  const auto it = std::upper_bound(cumulative.begin(), cumulative.begin() + static_cast<std::ptrdiff_t>(limit), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), limit - 1);
}

LinkingOption draw_non_fb(const PerOption<double>& mix, Rng& rng) {
  const double n = mix[index_of(LinkingOption::Neither)];
  const double tw = mix[index_of(LinkingOption::TWOnly)];
  const double both = mix[index_of(LinkingOption::Both)];
  const double total = n + tw + both;
  if (total <= 0.0) return LinkingOption::FBOnly;
  const double u = rng.uniform() * total;
  if (u < n) return LinkingOption::Neither;
  if (u < n + tw) return LinkingOption::TWOnly;
  return LinkingOption::Both;
}

}  // namespace

SynthConfig synth_config_from_json(std::string_view json_text) {
  SynthConfig cfg;
  try {
    const json j = json::parse(json_text);
    read_if(j, "n_users", cfg.n_users);
    read_if(j, "target_avg_degree", cfg.target_avg_degree);
    read_if(j, "degree_exponent", cfg.degree_exponent);
    read_month(j, "month_from", cfg.month_from);
    read_month(j, "month_to", cfg.month_to);
    read_month(j, "fb_launch_month", cfg.fb_launch_month);
    read_if(j, "surge_multiplier", cfg.surge_multiplier);
    read_if(j, "surge_degree_factor", cfg.surge_degree_factor);
    if (auto mix = j.find("option_mix"); mix != j.end()) {
      for (auto option : kLinkingOptions) {
        cfg.option_mix[index_of(option)] = mix->value(std::string(to_string(option)), 0.0);
      }
    }
    if (auto lift = j.find("influence_feature_shift"); lift != j.end()) {
      for (std::size_t f = 0; f < FeatureVector::kSize; ++f) {
        read_if(*lift, std::string(FeatureVector::kNames[f]).c_str(), cfg.influence_feature_shift[f]);
      }
    }
    read_if(j, "planted_fraction", cfg.planted_fraction);
    read_if(j, "temporal_locality", cfg.temporal_locality);
    read_if(j, "feature_degree_coupling", cfg.feature_degree_coupling);
    read_if(j, "seed", cfg.seed);
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("bad synth config: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

std::string synth_config_to_json(const SynthConfig& cfg) {
  nlohmann::ordered_json j;
  j["n_users"] = cfg.n_users;
  j["target_avg_degree"] = cfg.target_avg_degree;
  j["degree_exponent"] = cfg.degree_exponent;
  j["month_from"] = cfg.month_from.to_string();
  j["month_to"] = cfg.month_to.to_string();
  j["fb_launch_month"] = cfg.fb_launch_month.to_string();
  j["surge_multiplier"] = cfg.surge_multiplier;
  j["surge_degree_factor"] = cfg.surge_degree_factor;
  for (auto option : kLinkingOptions) {
    j["option_mix"][std::string(to_string(option))] = cfg.option_mix[index_of(option)];
  }
  for (std::size_t f = 0; f < FeatureVector::kSize; ++f) {
    j["influence_feature_shift"][std::string(FeatureVector::kNames[f])] = cfg.influence_feature_shift[f];
  }
  j["planted_fraction"] = cfg.planted_fraction;
  j["temporal_locality"] = cfg.temporal_locality;
  j["feature_degree_coupling"] = cfg.feature_degree_coupling;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

SynthDataset generate_dataset(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_users;
  Rng rng(cfg.seed);
  SynthDataset out;

  // Registration months: flat rate, multiplied by the surge after launch.
  const int months = months_between(cfg.month_from, cfg.month_to);
  std::vector<double> month_weight(static_cast<std::size_t>(months));
  int post_launch = 0;
  for (int m = 0; m < months; ++m) {
    const bool after = YearMonth::from_ordinal(cfg.month_from.ordinal() + m) >= cfg.fb_launch_month;
    post_launch += after ? 1 : 0;
    month_weight[static_cast<std::size_t>(m)] = after ? cfg.surge_multiplier : 1.0;
  }
  std::vector<double> month_cumulative(month_weight.size());
  std::partial_sum(month_weight.begin(), month_weight.end(), month_cumulative.begin());

  std::vector<int> month_of(n);
  for (auto& m : month_of) m = static_cast<int>(pick(month_cumulative, month_cumulative.size(), rng));
  std::sort(month_of.begin(), month_of.end());

  // FBOnly budget left for baseline users once surge users are accounted for.
  const double total_weight = month_cumulative.back();
  const double surge_share = (cfg.surge_multiplier - 1.0) * post_launch / total_weight;
  const double baseline_post_share = post_launch / total_weight;
  const double fb_target = cfg.option_mix[index_of(LinkingOption::FBOnly)];
  double fb_rate = baseline_post_share > 0.0 ? (fb_target - surge_share) / baseline_post_share : 0.0;
  if (fb_rate < 0.0) {
    out.log.push_back(fmt::format("surge users alone exceed the FBOnly share ({:.4f} > {:.4f}); "
                                  "baseline FBOnly rate clamped to 0",
                                  surge_share, fb_target));
    fb_rate = 0.0;
  } else if (fb_rate > 1.0) {
    out.log.push_back(fmt::format("FBOnly share {:.4f} unreachable after launch; rate clamped to 1", fb_target));
    fb_rate = 1.0;
  }

  std::vector<UserRecord> users(n);
  out.surge.assign(n, false);
  const double surge_probability = (cfg.surge_multiplier - 1.0) / cfg.surge_multiplier;
  for (std::size_t i = 0; i < n; ++i) {
    auto& user = users[i];
    user.user_id = fmt::format("u{:07d}", i);
    user.registered_at = YearMonth::from_ordinal(cfg.month_from.ordinal() + month_of[i]);
    const bool after = user.registered_at >= cfg.fb_launch_month;
    if (after && cfg.surge_multiplier > 1.0 && rng.bernoulli(surge_probability)) {
      out.surge[i] = true;
      user.linking_option = LinkingOption::FBOnly;
    } else if (after && rng.bernoulli(fb_rate)) {
      user.linking_option = LinkingOption::FBOnly;
    } else {
      user.linking_option = draw_non_fb(cfg.option_mix, rng);
    }
  }

  // Power-law degree targets (continuous Pareto draws).
  const double tail = -1.0 / (cfg.degree_exponent - 1.0);
  std::vector<double> raw_out(n);
  std::vector<double> in_weight(n);
  // Gaussian copula ties a user's in-weight to its out-degree: accounts with
  // many followers also follow many, which keeps rank from pooling behind a
  // few large but barely-following accounts.
  const double rho = kDegreeCorrelation;
  const double rho_rest = std::sqrt(1.0 - rho * rho);
  auto upper_tail = [](double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); };
  for (std::size_t i = 0; i < n; ++i) {
    const double factor = out.surge[i] ? cfg.surge_degree_factor : 1.0;
    const double z_in = rng.normal();
    const double z_out = rho * z_in + rho_rest * rng.normal();
    in_weight[i] = factor * std::pow(std::max(upper_tail(z_in), 1e-300), tail);
    raw_out[i] = factor * std::pow(std::max(upper_tail(z_out), 1e-300), tail);
  }
  const double out_scale = cfg.target_avg_degree * static_cast<double>(n) /
                           std::accumulate(raw_out.begin(), raw_out.end(), 0.0);
  std::vector<std::size_t> out_target(n);
  for (std::size_t i = 0; i < n; ++i) {
    out_target[i] = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(raw_out[i] * out_scale)), 1, n - 1);
  }

  // Stub matching against in-weights. Users are sorted by month, so the
  // users registered no later than u form the prefix [0, month_end[u]).
  std::vector<double> in_cumulative(n);
  std::partial_sum(in_weight.begin(), in_weight.end(), in_cumulative.begin());
  std::vector<std::size_t> month_end(n);
  for (std::size_t i = n; i-- > 0;) {
    month_end[i] = (i + 1 == n || month_of[i + 1] != month_of[i]) ? i + 1 : month_end[i + 1];
  }

  std::vector<IndexEdge> edges;
  edges.reserve(std::accumulate(out_target.begin(), out_target.end(), std::size_t{0}));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t s = 0; s < out_target[u]; ++s) {
      const std::size_t limit = rng.bernoulli(cfg.temporal_locality) ? month_end[u] : n;
      edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(pick(in_cumulative, limit, rng)));
    }
  }
  auto build = build_graph_from_indices(users, std::move(edges));
  const SocialGraph& g = build.graph;
  users.assign(g.users().begin(), g.users().end());

  // Plant the influence signal on the realized in-degree.
  std::vector<NodeId> by_in_degree(n);
  std::iota(by_in_degree.begin(), by_in_degree.end(), 0);
  std::stable_sort(by_in_degree.begin(), by_in_degree.end(),
                   [&](NodeId a, NodeId b) { return g.in_degree(a) > g.in_degree(b); });
  out.planted.assign(n, false);
  const auto planted_count = static_cast<std::size_t>(std::llround(cfg.planted_fraction * static_cast<double>(n)));
  for (std::size_t r = 0; r < planted_count; ++r) out.planted[by_in_degree[r]] = true;

  std::vector<double> log_degree(n);
  for (NodeId u = 0; u < n; ++u) log_degree[u] = std::log1p(static_cast<double>(g.in_degree(u)));
  const double mean = std::accumulate(log_degree.begin(), log_degree.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double x : log_degree) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(n));

  for (NodeId u = 0; u < n; ++u) {
    auto& user = users[u];
    if (!has_twitter(user.linking_option)) continue;
    const double z = sd > 0.0 ? (log_degree[u] - mean) / sd : 0.0;
    const bool planted = out.planted[u];
    std::array<std::uint64_t, 5> counts{};
    for (std::size_t f = 0; f < counts.size(); ++f) {
      const auto& model = kFeatureModels[f];
      double log_value = model.log_median + model.log_spread * (cfg.feature_degree_coupling * z + rng.normal());
      if (planted) log_value += std::log(cfg.influence_feature_shift[f]);
      counts[f] = static_cast<std::uint64_t>(std::floor(std::exp(std::min(log_value, 40.0))));
    }
    const double bio_rate =
        std::min(0.98, kBioRate * (planted ? cfg.influence_feature_shift[FeatureVector::kBioIndex] : 1.0));
    FeatureVector f;
    f.followings = counts[0];
    f.followers = counts[1];
    f.tweets = counts[2];
    f.likes = counts[3];
    f.lists = counts[4];
    f.bio = rng.bernoulli(bio_rate) ? 1 : 0;
    user.twitter_features = f;
  }

  // Same topology; attach the final attribute table.
  std::vector<IndexEdge> final_edges;
  final_edges.reserve(g.edge_count());
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.successors(u)) final_edges.emplace_back(u, v);
  }
  out.build = build.stats;
  out.graph = SocialGraph(std::move(users), final_edges);
  return out;
}

SynthFiles to_files(const SynthDataset& data) {
  return {users_to_jsonl(data.graph.users()), edges_to_tsv(data.graph.edge_list())};
}

SynthFiles generate(const SynthConfig& cfg) { return to_files(generate_dataset(cfg)); }

}  // namespace crosslink
