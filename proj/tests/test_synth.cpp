#include <doctest.h>

#include <map>
#include <sstream>

#include "crosslink/error.hpp"
#include "crosslink/ingest.hpp"
#include "crosslink/metrics.hpp"
#include "crosslink/synth.hpp"

using namespace crosslink;

namespace {

const SynthDataset& hundred_k() {
  static const SynthDataset data = [] {
    SynthConfig cfg;
    cfg.n_users = 100000;
    cfg.seed = 42;
    return generate_dataset(cfg);
  }();
  return data;
}

std::map<YearMonth, std::size_t> registrations(const SocialGraph& g) {
  std::map<YearMonth, std::size_t> out;
  for (const auto& u : g.users()) ++out[u.registered_at];
  return out;
}

}  // namespace

TEST_CASE("generate is byte-identical per seed") {
  SynthConfig cfg;
  cfg.n_users = 5000;
  cfg.seed = 42;
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  CHECK(a.users_jsonl == b.users_jsonl);
  CHECK(a.edges_tsv == b.edges_tsv);
  cfg.seed = 43;
  CHECK(generate(cfg).edges_tsv != a.edges_tsv);
}

TEST_CASE("emitted files ingest cleanly") {
  SynthConfig cfg;
  cfg.n_users = 5000;
  cfg.surge_multiplier = 3;
  const auto data = generate_dataset(cfg);
  const auto files = to_files(data);
  std::istringstream users_in(files.users_jsonl);
  std::istringstream edges_in(files.edges_tsv);
  auto users = ingest_users(users_in);
  auto edges = ingest_edges(edges_in);
  CHECK(users.skipped == 0);
  CHECK(edges.skipped == 0);
  auto built = build_graph(std::move(users.users), edges.edges);
  CHECK(built.stats.self_loops_dropped == 0);
  CHECK(built.stats.duplicates_collapsed == 0);
  CHECK(built.graph == data.graph);
  for (const auto& u : data.graph.users()) CHECK(u.twitter_features.has_value() == has_twitter(u.linking_option));
}

TEST_CASE("option mix matches the target at 100k") {
  const auto& g = hundred_k().graph;
  PerOption<double> counts{};
  for (const auto& u : g.users()) counts[index_of(u.linking_option)] += 1;
  const PerOption<double> target{0.1106, 0.4552, 0.3435, 0.0907};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(counts[i] / static_cast<double>(g.node_count()) - target[i]) <= 0.01);
  }
  CHECK(g.node_count() == 100000);
}

TEST_CASE("degree CCDF is monotone and spans two decades") {
  const auto& g = hundred_k().graph;
  CHECK(g.edge_count() > 1500000);
  for (auto direction : {Direction::In, Direction::Out}) {
    const auto ccdf = degree_ccdf(g, direction);
    for (std::size_t i = 1; i < ccdf.size(); ++i) {
      CHECK(ccdf[i].degree > ccdf[i - 1].degree);
      CHECK(ccdf[i].fraction <= ccdf[i - 1].fraction);
    }
    std::size_t lo = 0;
    for (const auto& p : ccdf) {
      if (p.degree > 0) {
        lo = p.degree;
        break;
      }
    }
    REQUIRE(lo > 0);
    CHECK(static_cast<double>(ccdf.back().degree) / static_cast<double>(lo) >= 100.0);
  }
}

TEST_CASE("planted users carry the configured lift") {
  const auto& data = hundred_k();
  const SynthConfig cfg;
  std::array<double, 2> followers{}, lists{}, count{};
  std::size_t planted = 0;
  for (NodeId u = 0; u < data.graph.node_count(); ++u) {
    planted += data.planted[u];
    const auto& f = data.graph.user(u).twitter_features;
    if (!f) continue;
    const std::size_t c = data.planted[u] ? 1 : 0;
    followers[c] += static_cast<double>(f->followers);
    lists[c] += static_cast<double>(f->lists);
    count[c] += 1;
  }
  CHECK(std::abs(static_cast<double>(planted) / 100000.0 - cfg.planted_fraction) < 0.005);
  const double follower_ratio = (followers[1] / count[1]) / (followers[0] / count[0]);
  const double list_ratio = (lists[1] / count[1]) / (lists[0] / count[0]);
  CHECK(follower_ratio >= 0.9 * cfg.influence_feature_shift[1]);
  CHECK(list_ratio >= 0.9 * cfg.influence_feature_shift[4]);
  // Planted users are the top of the in-degree order.
  std::size_t min_planted = SIZE_MAX, max_rest = 0;
  for (NodeId u = 0; u < data.graph.node_count(); ++u) {
    if (data.planted[u]) {
      min_planted = std::min(min_planted, data.graph.in_degree(u));
    } else {
      max_rest = std::max(max_rest, data.graph.in_degree(u));
    }
  }
  CHECK(min_planted >= max_rest);
}

TEST_CASE("no surge means no registration discontinuity") {
  SynthConfig cfg;
  cfg.n_users = 20000;
  cfg.seed = 7;
  const auto data = generate_dataset(cfg);
  const auto months = registrations(data.graph);
  CHECK(months.size() == static_cast<std::size_t>(months_between(cfg.month_from, cfg.month_to)));
  double worst = 1.0;
  for (auto it = std::next(months.begin()); it != months.end(); ++it) {
    const double a = static_cast<double>(std::prev(it)->second);
    const double b = static_cast<double>(it->second);
    worst = std::max(worst, std::max(a / b, b / a));
  }
  CHECK(worst < 1.5);
  for (bool s : data.surge) CHECK_FALSE(s);
}

TEST_CASE("surge users are FBOnly, post-launch and low degree") {
  SynthConfig cfg;
  cfg.n_users = 20000;
  cfg.surge_multiplier = 4;
  const auto data = generate_dataset(cfg);
  const auto& g = data.graph;
  double surge_degree = 0, other_degree = 0, n_surge = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (data.surge[u]) {
      CHECK(g.user(u).linking_option == LinkingOption::FBOnly);
      CHECK(g.user(u).registered_at >= cfg.fb_launch_month);
      surge_degree += static_cast<double>(g.out_degree(u));
      n_surge += 1;
    } else {
      other_degree += static_cast<double>(g.out_degree(u));
    }
  }
  REQUIRE(n_surge > 0);
  CHECK(surge_degree / n_surge < other_degree / (static_cast<double>(g.node_count()) - n_surge));
  const auto months = registrations(g);
  const YearMonth before = YearMonth::from_ordinal(cfg.fb_launch_month.ordinal() - 1);
  CHECK(static_cast<double>(months.at(cfg.fb_launch_month)) > 2.0 * static_cast<double>(months.at(before)));
}

TEST_CASE("config validation and JSON round-trip") {
  SynthConfig cfg;
  cfg.n_users = 1234;
  cfg.surge_multiplier = 2.5;
  cfg.seed = 9;
  const auto back = synth_config_from_json(synth_config_to_json(cfg));
  CHECK(synth_config_to_json(back) == synth_config_to_json(cfg));
  CHECK(back.n_users == 1234);
  CHECK(back.fb_launch_month == cfg.fb_launch_month);

  auto bad = cfg;
  bad.option_mix = {0.5, 0.5, 0.5, 0.0};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("option_mix"), UsageError);
  bad = cfg;
  bad.degree_exponent = 1.0;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("degree_exponent"), UsageError);
  bad = cfg;
  bad.surge_multiplier = 0.5;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("surge_multiplier"), UsageError);
  bad = cfg;
  bad.planted_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  CHECK_THROWS_AS(synth_config_from_json(R"({"option_mix": {"neither": 2}})"), UsageError);
  CHECK_THROWS_AS(synth_config_from_json("[1,2"), UsageError);
}
