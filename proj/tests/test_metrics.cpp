#include <doctest.h>

#include <numeric>

#include "crosslink/error.hpp"
#include "crosslink/metrics.hpp"
#include "crosslink/parallel.hpp"
#include "oracles.hpp"

using namespace crosslink;
using oracle::graph_from;

TEST_CASE("degree_summary") {
  auto g = graph_from(3, {{0, 1}, {0, 2}});
  auto s = degree_summary(g);
  CHECK(s.nodes == 3);
  CHECK(s.edges == 2);
  CHECK(s.zero_in_degree == 1);
  CHECK(s.zero_out_degree == 2);
  CHECK(degree_summary(graph_from(0, {})) == DegreeSummary{});

  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    auto r = oracle::random_digraph(50, 0.03, rng);
    const auto a = oracle::adjacency(r);
    std::size_t zin = 0, zout = 0;
    for (std::size_t u = 0; u < 50; ++u) {
      bool any_in = false, any_out = false;
      for (std::size_t v = 0; v < 50; ++v) {
        any_out |= a[u][v];
        any_in |= a[v][u];
      }
      zin += !any_in;
      zout += !any_out;
    }
    auto got = degree_summary(r);
    CHECK(got.zero_in_degree == zin);
    CHECK(got.zero_out_degree == zout);
  }
}

TEST_CASE("degree_ccdf") {
  CHECK_THROWS_WITH_AS(degree_ccdf(graph_from(0, {}), Direction::In), "empty graph", DataError);
  auto flat = degree_ccdf(graph_from(4, {}), Direction::Out);
  CHECK(flat == std::vector<CcdfPoint>{{0, 1.0}});

  // out-degrees {0, 1, 1, 3}
  auto g = graph_from(4, {{1, 0}, {2, 0}, {3, 0}, {3, 1}, {3, 2}});
  CHECK(degree_ccdf(g, Direction::Out) == std::vector<CcdfPoint>{{0, 1.0}, {1, 0.75}, {3, 0.25}});

  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    auto r = oracle::random_digraph(1 + rng.below(30), 0.2, rng);
    for (auto dir : {Direction::In, Direction::Out}) {
      auto c = degree_ccdf(r, dir);
      REQUIRE_FALSE(c.empty());
      CHECK(c.front().degree == 0);
      CHECK(c.front().fraction == 1.0);
      for (std::size_t i = 1; i < c.size(); ++i) {
        CHECK(c[i].degree > c[i - 1].degree);
        CHECK(c[i].fraction <= c[i - 1].fraction);
      }
    }
  }
}

TEST_CASE("account_followership") {
  auto star = graph_from(4, {{1, 0}, {2, 0}, {3, 0}});
  CHECK(account_followership(star, "n0") == Followership{3, 3});
  // b->a, b->c, d->a with a=0 b=1 c=2 d=3
  auto g = graph_from(4, {{1, 0}, {1, 2}, {3, 0}});
  CHECK(account_followership(g, "n0") == Followership{2, 1});
  CHECK_THROWS_WITH_AS(account_followership(g, "nobody"), doctest::Contains("nobody"), DataError);

  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto r = oracle::random_digraph(30, 0.05, rng);
    const auto a = oracle::adjacency(r);
    const NodeId target = static_cast<NodeId>(rng.below(30));
    std::size_t followers = 0, exclusive = 0;
    for (std::size_t u = 0; u < 30; ++u) {
      if (!a[u][target]) continue;
      ++followers;
      if (std::count(a[u].begin(), a[u].end(), true) == 1) ++exclusive;
    }
    CHECK(account_followership(r, r.user(target).user_id) == Followership{followers, exclusive});
  }
}

TEST_CASE("avg_clustering: hand cases") {
  CHECK(avg_clustering(graph_from(3, {{0, 1}, {1, 2}, {2, 0}})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(avg_clustering(graph_from(3, {{0, 1}, {1, 2}})) == 0.0);
  // a-b, a-c, a-d, b-c
  CHECK(avg_clustering(graph_from(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}})) ==
        doctest::Approx(7.0 / 12.0).epsilon(1e-12));
  CHECK_THROWS_AS(avg_clustering(graph_from(0, {})), DataError);
}

TEST_CASE("avg_clustering matches brute force on 100+ random graphs") {
  Rng rng(1234);
  for (int t = 0; t < 150; ++t) {
    auto g = oracle::random_digraph(1 + rng.below(10), rng.uniform(), rng);
    CHECK(std::abs(avg_clustering(g) - oracle::clustering(g)) <= 1e-12);
  }
}

TEST_CASE("largest_scc: hand cases") {
  auto cycle = graph_from(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(largest_scc(cycle) == std::vector<NodeId>{0, 1, 2, 3});
  CHECK(largest_scc(graph_from(3, {{0, 1}, {1, 2}})).size() == 1);
  // a<->b, b->c, c<->d : tie between {a,b} and {c,d}
  auto tie = graph_from(4, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 2}});
  CHECK(largest_scc(tie) == std::vector<NodeId>{0, 1});
  // same shape, but the smallest index sits in the later-finishing component
  auto tie2 = graph_from(4, {{2, 0}, {0, 2}, {0, 1}, {1, 3}, {3, 1}});
  CHECK(largest_scc(tie2) == std::vector<NodeId>{0, 2});
}

TEST_CASE("largest_scc matches mutual reachability on 100+ random graphs") {
  Rng rng(99);
  for (int t = 0; t < 150; ++t) {
    auto g = oracle::random_digraph(1 + rng.below(12), 0.05 + 0.3 * rng.uniform(), rng);
    CHECK(largest_scc(g) == oracle::largest_scc(g));
    // Component ids partition the same way.
    auto comp = strongly_connected_components(g);
    for (const auto& set : oracle::scc_sets(g)) {
      for (NodeId v : set) CHECK(comp[v] == comp[set.front()]);
    }
    CHECK(std::set<std::uint32_t>(comp.begin(), comp.end()).size() == oracle::scc_sets(g).size());
  }
}

TEST_CASE("avg_path_length: hand cases and errors") {
  auto cycle = graph_from(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  std::vector<NodeId> all{0, 1, 2, 3};
  CHECK(avg_path_length(cycle, all).mean == doctest::Approx(2.0).epsilon(1e-12));
  auto pair = graph_from(2, {{0, 1}, {1, 0}});
  std::vector<NodeId> both{0, 1};
  CHECK(avg_path_length(pair, both).mean == 1.0);
  std::vector<NodeId> one{0};
  CHECK_THROWS_AS(avg_path_length(pair, one), DataError);
  auto dag = graph_from(2, {{0, 1}});
  CHECK_THROWS_AS(avg_path_length(dag, both), DataError);
}

TEST_CASE("avg_path_length matches Floyd-Warshall") {
  Rng rng(42);
  int checked = 0;
  for (int t = 0; t < 400 && checked < 120; ++t) {
    auto g = oracle::random_digraph(2 + rng.below(9), 0.25 + 0.5 * rng.uniform(), rng);
    auto lscc = largest_scc(g);
    if (lscc.size() < 2) continue;
    ++checked;
    CHECK(std::abs(avg_path_length(g, lscc).mean - oracle::floyd_warshall_mean(g, lscc)) <= 1e-12);
  }
  CHECK(checked >= 100);
}

TEST_CASE("sampling every source equals exact") {
  Rng rng(8);
  SocialGraph g;
  do {
    g = oracle::random_digraph(20, 0.2, rng);
  } while (largest_scc(g).size() != 20);
  std::vector<NodeId> all(20);
  std::iota(all.begin(), all.end(), 0);
  auto sampled = avg_path_length(g, all, PathSample{20, 5});
  CHECK_FALSE(sampled.sampled);
  CHECK(sampled.sources_used == 20);
  CHECK(sampled.mean == avg_path_length(g, all).mean);
}

TEST_CASE("sampled path length with 25% of sources is within 5%") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed + 100);
    // ring for strong connectivity plus random chords
    std::vector<IndexEdge> edges;
    for (NodeId u = 0; u < 1000; ++u) {
      edges.emplace_back(u, (u + 1) % 1000);
      for (int k = 0; k < 3; ++k) edges.emplace_back(u, static_cast<NodeId>(rng.below(1000)));
    }
    auto g = graph_from(1000, edges);
    std::vector<NodeId> all(1000);
    std::iota(all.begin(), all.end(), 0);
    const double exact = avg_path_length(g, all).mean;
    const double est = avg_path_length(g, all, PathSample{250, seed}).mean;
    CHECK(std::abs(est - exact) / exact < 0.05);
  }
}

TEST_CASE("compute_report: path mode is recorded") {
  auto cycle = graph_from(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  ReportOptions exact;
  auto r = compute_report(cycle, exact);
  CHECK(r.lscc_size == 4);
  CHECK_FALSE(r.path_sampled);
  CHECK(*r.avg_path_length == 2.0);
  ReportOptions auto_small;
  auto_small.exact_limit = 3;
  auto_small.sample = {2, 9};
  auto s = compute_report(cycle, auto_small);
  CHECK(s.path_sampled);
  CHECK(s.path_sources == 2);
  CHECK(s.path_seed == 9);
  auto lonely = compute_report(graph_from(2, {{0, 1}}), exact);
  CHECK(lonely.lscc_size == 1);
  CHECK_FALSE(lonely.avg_path_length);
}

TEST_CASE("metrics are independent of the thread count") {
  Rng rng(77);
  std::vector<IndexEdge> edges;
  for (int i = 0; i < 20000; ++i) {
    edges.emplace_back(static_cast<NodeId>(rng.below(3000)), static_cast<NodeId>(rng.below(3000)));
  }
  auto g = graph_from(3000, edges);
  ReportOptions options;
  options.path_mode = PathMode::Sampled;
  options.sample = {50, 3};
  set_thread_count(1);
  const auto one = compute_report(g, options);
  const auto local_one = local_clustering(g);
  set_thread_count(4);
  const auto four = compute_report(g, options);
  const auto local_four = local_clustering(g);
  set_thread_count(0);
  CHECK(one.avg_clustering == four.avg_clustering);
  CHECK(one.lscc_size == four.lscc_size);
  CHECK(*one.avg_path_length == *four.avg_path_length);
  CHECK(local_one == local_four);
}
