#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crosslink/graph.hpp"

namespace crosslink {

enum class Direction { In, Out };

struct DegreeSummary {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t zero_in_degree = 0;
  std::size_t zero_out_degree = 0;

  friend bool operator==(const DegreeSummary&, const DegreeSummary&) = default;
};

struct CcdfPoint {
  std::size_t degree = 0;
  double fraction = 0.0;  // fraction of nodes with degree >= `degree`

  friend bool operator==(const CcdfPoint&, const CcdfPoint&) = default;
};

struct Followership {
  std::size_t followers = 0;
  std::size_t exclusive_followers = 0;  // followers whose only followee is the account

  friend bool operator==(const Followership&, const Followership&) = default;
};

DegreeSummary degree_summary(const SocialGraph& g);

/// Emitted at k = 0 and at every degree present in the graph.
/// Throws DataError("empty graph") on a graph without nodes.
std::vector<CcdfPoint> degree_ccdf(const SocialGraph& g, Direction direction);

Followership account_followership(const SocialGraph& g, std::string_view account);

/// Mean local clustering coefficient over all nodes of the undirected
/// projection; nodes with fewer than two neighbors contribute 0.
double avg_clustering(const SocialGraph& g);

/// Per-node local clustering coefficients of the undirected projection.
std::vector<double> local_clustering(const SocialGraph& g);

/// Largest strongly connected component, sorted ascending. Among components
/// of equal size the one holding the smallest node index wins.
std::vector<NodeId> largest_scc(const SocialGraph& g);

/// Component id per node (ids in order of completion, iterative Tarjan).
std::vector<std::uint32_t> strongly_connected_components(const SocialGraph& g);

struct PathSample {
  std::size_t sources = 1000;
  std::uint64_t seed = 0;
};

struct PathLengthResult {
  double mean = 0.0;
  std::size_t sources_used = 0;
  bool sampled = false;
};

/// Mean directed shortest-path length over ordered pairs of `within`
/// (BFS restricted to the induced subgraph). Without a sample every node is
/// a source; with one, `sources` distinct nodes are drawn uniformly.
/// Throws DataError when |within| < 2 or some target is unreachable.
PathLengthResult avg_path_length(const SocialGraph& g, std::span<const NodeId> within,
                                 std::optional<PathSample> sample = std::nullopt);

enum class PathMode { Auto, Exact, Sampled };

struct ReportOptions {
  std::optional<std::string> account;
  PathMode path_mode = PathMode::Auto;
  std::size_t exact_limit = 10000;
  PathSample sample{};
};

struct GraphReport {
  DegreeSummary degrees;
  std::optional<std::string> account;
  std::optional<Followership> followership;
  double avg_clustering = 0.0;
  std::size_t lscc_size = 0;
  std::optional<double> avg_path_length;  // undefined when the LSCC has one node
  bool path_sampled = false;
  std::size_t path_sources = 0;
  std::uint64_t path_seed = 0;
};

GraphReport compute_report(const SocialGraph& g, const ReportOptions& options);

}  // namespace crosslink
