#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Deliberately naive: dense matrices, full enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "crosslink/graph.hpp"
#include "crosslink/pagerank.hpp"
#include "crosslink/rng.hpp"

namespace oracle {

using crosslink::IndexEdge;
using crosslink::NodeId;
using crosslink::SocialGraph;

inline std::vector<crosslink::UserRecord> make_users(std::size_t n, crosslink::YearMonth month = {2013, 1}) {
  std::vector<crosslink::UserRecord> users(n);
  for (std::size_t i = 0; i < n; ++i) {
    users[i].user_id = fmt::format("n{}", i);
    users[i].registered_at = month;
  }
  return users;
}

inline SocialGraph graph_from(std::size_t n, std::vector<IndexEdge> edges) {
  return crosslink::build_graph_from_indices(make_users(n), std::move(edges)).graph;
}

/// G(n, p) digraph, loops excluded.
inline SocialGraph random_digraph(std::size_t n, double p, crosslink::Rng& rng) {
  std::vector<IndexEdge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  return graph_from(n, std::move(edges));
}

inline std::vector<std::vector<bool>> adjacency(const SocialGraph& g) {
  const auto n = g.node_count();
  std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.successors(u)) a[u][v] = true;
  }
  return a;
}

/// reach[u][v]: v reachable from u (reflexive).
inline std::vector<std::vector<bool>> reachability(const SocialGraph& g) {
  auto r = adjacency(g);
  const auto n = g.node_count();
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (r[k][j]) r[i][j] = true;
      }
    }
  }
  return r;
}

/// Components as sorted node sets, via mutual reachability.
inline std::vector<std::vector<NodeId>> scc_sets(const SocialGraph& g) {
  const auto r = reachability(g);
  const auto n = g.node_count();
  std::vector<bool> taken(n, false);
  std::vector<std::vector<NodeId>> out;
  for (NodeId u = 0; u < n; ++u) {
    if (taken[u]) continue;
    std::vector<NodeId> comp;
    for (NodeId v = 0; v < n; ++v) {
      if (r[u][v] && r[v][u]) {
        comp.push_back(v);
        taken[v] = true;
      }
    }
    out.push_back(comp);
  }
  return out;
}

/// Largest by size; among equals, the one holding the smallest index
/// (scan order of scc_sets already visits components by smallest member).
inline std::vector<NodeId> largest_scc(const SocialGraph& g) {
  std::vector<NodeId> best;
  for (auto& c : scc_sets(g)) {
    if (c.size() > best.size()) best = c;
  }
  return best;
}

/// Mean directed distance over ordered pairs inside `within`, using only
/// edges among `within`. NaN if some pair is unreachable.
inline double floyd_warshall_mean(const SocialGraph& g, const std::vector<NodeId>& within) {
  const auto m = within.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(m, std::vector<double>(m, inf));
  const auto a = adjacency(g);
  for (std::size_t i = 0; i < m; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (a[within[i]][within[j]]) d[i][j] = std::min(d[i][j], 1.0);
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  double sum = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      if (d[i][j] == inf) return std::nan("");
      sum += d[i][j];
    }
  }
  return sum / static_cast<double>(m * (m - 1));
}

/// Mean local clustering over all nodes of the undirected projection.
inline double clustering(const SocialGraph& g) {
  const auto n = g.node_count();
  const auto a = adjacency(g);
  double total = 0;
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::size_t> nb;
    for (std::size_t v = 0; v < n; ++v) {
      if (v != u && (a[u][v] || a[v][u])) nb.push_back(v);
    }
    if (nb.size() < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (a[nb[i]][nb[j]] || a[nb[j]][nb[i]]) ++links;
      }
    }
    total += static_cast<double>(links) / (static_cast<double>(nb.size() * (nb.size() - 1)) / 2.0);
  }
  return total / static_cast<double>(n);
}

/// Dense power iteration x <- d * M x + (1 - d)/n + d * dangling/n.
inline std::vector<double> dense_pagerank(const SocialGraph& g, double damping = 0.85) {
  const auto n = g.node_count();
  const auto a = adjacency(g);
  std::vector<double> outdeg(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) outdeg[u] += a[u][v] ? 1 : 0;
  }
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));  // column-stochastic
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (outdeg[u] == 0) {
        m[v][u] = 1.0 / static_cast<double>(n);
      } else if (a[u][v]) {
        m[v][u] = 1.0 / outdeg[u];
      }
    }
  }
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 10000; ++it) {
    std::vector<double> y(n, (1.0 - damping) / static_cast<double>(n));
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t u = 0; u < n; ++u) y[v] += damping * m[v][u] * x[u];
    }
    double diff = 0;
    for (std::size_t i = 0; i < n; ++i) diff += std::abs(y[i] - x[i]);
    x = y;
    if (diff < 1e-15) break;
  }
  return x;
}

/// Probability a random positive outranks a random negative, ties half.
inline double pairwise_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0;
  for (double p : pos) {
    for (double q : neg) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
  }
  return wins / static_cast<double>(pos.size() * neg.size());
}

/// High set by sorting: top ceil(p*n) scores, then drop any tied with the
/// first excluded score.
inline std::set<std::size_t> high_set(const std::vector<double>& scores, double p) {
  const auto n = scores.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  auto top = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) - 1e-9));
  top = std::min(top, n - 1);
  const double cut = scores[order[top]];
  std::set<std::size_t> out;
  for (std::size_t r = 0; r < top; ++r) {
    if (scores[order[r]] > cut) out.insert(order[r]);
  }
  return out;
}

}  // namespace oracle
