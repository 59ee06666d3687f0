#include <doctest.h>

#include <numeric>

#include "crosslink/error.hpp"
#include "crosslink/pagerank.hpp"
#include "crosslink/parallel.hpp"
#include "oracles.hpp"

using namespace crosslink;
using oracle::graph_from;

namespace {

double total(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0); }

}  // namespace

TEST_CASE("pagerank: small cases") {
  auto single = pagerank(graph_from(1, {}));
  REQUIRE(single.scores.size() == 1);
  CHECK(single.scores[0] == doctest::Approx(1.0).epsilon(1e-12));

  auto pair = pagerank(graph_from(2, {{0, 1}, {1, 0}}));
  CHECK(pair.scores[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pair.scores[1] == doctest::Approx(0.5).epsilon(1e-12));

  auto g = graph_from(3, {{0, 1}, {0, 2}, {1, 2}});
  auto pr = pagerank(g);
  auto dense = oracle::dense_pagerank(g);
  CHECK(pr.converged);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(pr.scores[i] - dense[i]) < 1e-9);
  // rank flows to the followee
  CHECK(pr.scores[2] > pr.scores[1]);
  CHECK(pr.scores[1] > pr.scores[0]);
}

TEST_CASE("pagerank matches dense power iteration") {
  Rng rng(2024);
  for (int t = 0; t < 60; ++t) {
    auto g = oracle::random_digraph(10, 0.1 + 0.3 * rng.uniform(), rng);
    auto pr = pagerank(g);
    auto dense = oracle::dense_pagerank(g);
    for (int i = 0; i < 10; ++i) CHECK(std::abs(pr.scores[i] - dense[i]) < 1e-9);
    CHECK(std::abs(total(pr.scores) - 1.0) < 1e-9);
    for (double s : pr.scores) CHECK(s > 0.0);
  }
}

TEST_CASE("pagerank: regular graphs are uniform") {
  for (std::size_t n : {2u, 5u, 17u, 100u}) {
    std::vector<IndexEdge> edges;
    for (NodeId u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
    auto pr = pagerank(graph_from(n, edges));
    for (double s : pr.scores) CHECK(std::abs(s - 1.0 / static_cast<double>(n)) < 1e-9);
  }
}

TEST_CASE("pagerank: mass is conserved at every iteration") {
  Rng rng(5);
  auto g = oracle::random_digraph(40, 0.05, rng);  // has dangling nodes
  PageRankOptions options;
  int seen = 0;
  options.observer = [&](std::size_t, std::span<const double> x) {
    ++seen;
    CHECK(std::abs(std::accumulate(x.begin(), x.end(), 0.0) - 1.0) < 1e-9);
  };
  auto pr = pagerank(g, options);
  CHECK(seen == static_cast<int>(pr.iterations));
}

TEST_CASE("pagerank: non-convergence is flagged") {
  Rng rng(6);
  auto g = oracle::random_digraph(30, 0.1, rng);
  PageRankOptions options;
  options.max_iterations = 2;
  auto pr = pagerank(g, options);
  CHECK_FALSE(pr.converged);
  CHECK(pr.iterations == 2);
  CHECK(pr.residual > options.tolerance);
}

TEST_CASE("pagerank: bad options") {
  auto g = graph_from(2, {{0, 1}});
  PageRankOptions bad;
  bad.damping = 1.0;
  CHECK_THROWS_AS(pagerank(g, bad), UsageError);
  CHECK_THROWS_AS(pagerank(graph_from(0, {})), DataError);
}

TEST_CASE("pagerank: relabeling nodes permutes scores") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 60;
    std::vector<IndexEdge> edges;
    for (int i = 0; i < 240; ++i) {
      edges.emplace_back(static_cast<NodeId>(rng.below(n)), static_cast<NodeId>(rng.below(n)));
    }
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span(perm));
    std::vector<IndexEdge> moved;
    for (auto [u, v] : edges) moved.emplace_back(perm[u], perm[v]);
    auto a = pagerank(graph_from(n, edges));
    auto b = pagerank(graph_from(n, moved));
    for (NodeId u = 0; u < n; ++u) CHECK(std::abs(a.scores[u] - b.scores[perm[u]]) < 1e-12);
  }
}

TEST_CASE("pagerank: bit-identical across thread counts") {
  Rng rng(17);
  std::vector<IndexEdge> edges;
  for (int i = 0; i < 60000; ++i) {
    edges.emplace_back(static_cast<NodeId>(rng.below(9000)), static_cast<NodeId>(rng.below(9000)));
  }
  auto g = graph_from(9000, edges);
  set_thread_count(1);
  auto one = pagerank(g);
  set_thread_count(3);
  auto three = pagerank(g);
  set_thread_count(0);
  CHECK(one.scores == three.scores);
  CHECK(one.iterations == three.iterations);
}

TEST_CASE("label_high_pagerank: definitional cases") {
  std::vector<double> s{0.4, 0.3, 0.2, 0.1};
  auto l = label_high_pagerank(s, 0.25);
  CHECK(l.threshold == 0.3);
  CHECK(l.high_count == 1);
  CHECK(l.labels[0] == InfluenceLabel::High);
  CHECK(l.labels[1] == InfluenceLabel::Low);

  std::vector<double> flat(50, 0.02);
  CHECK(label_high_pagerank(flat, 0.1).high_count == 0);

  std::vector<double> distinct(200);
  for (std::size_t i = 0; i < 200; ++i) distinct[i] = 1.0 / static_cast<double>(i + 7);
  auto d = label_high_pagerank(distinct, 0.01);
  CHECK(d.high_count == 2);
  CHECK(d.labels[0] == InfluenceLabel::High);
  CHECK(d.labels[1] == InfluenceLabel::High);
  CHECK(d.labels[2] == InfluenceLabel::Low);

  CHECK_THROWS_AS(label_high_pagerank(s, 0.0), UsageError);
  CHECK_THROWS_AS(label_high_pagerank(s, 1.0), UsageError);
}

TEST_CASE("label_high_pagerank matches sort-and-cut on random vectors") {
  Rng rng(404);
  for (int t = 0; t < 300; ++t) {
    const auto n = 1 + rng.below(1000);
    std::vector<double> s(n);
    const bool ties = rng.bernoulli(0.5);
    for (auto& x : s) x = ties ? static_cast<double>(rng.below(20)) : rng.uniform();
    const double p = 0.001 + 0.5 * rng.uniform();
    const auto l = label_high_pagerank(s, p);
    const auto want = oracle::high_set(s, p);
    std::set<std::size_t> got;
    for (std::size_t i = 0; i < n; ++i) {
      if (l.labels[i] == InfluenceLabel::High) got.insert(i);
      CHECK((l.labels[i] == InfluenceLabel::High) == (s[i] > l.threshold));
    }
    CHECK(got == want);
    CHECK(l.high_count == got.size());
    CHECK(l.high_count <= static_cast<std::size_t>(std::ceil(p * static_cast<double>(n))));
  }
}
