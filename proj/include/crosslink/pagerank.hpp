#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "crosslink/graph.hpp"

namespace crosslink {

enum class InfluenceLabel : std::uint8_t { Low = 0, High = 1 };

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  std::size_t max_iterations = 200;
  /// Called after every iteration with (iteration, current scores).
  std::function<void(std::size_t, std::span<const double>)> observer;
};

struct PageRankScores {
  std::vector<double> scores;
  std::size_t iterations = 0;
  double residual = 0.0;  // L1 change of the final iteration
  bool converged = false;
};

/// Power iteration where rank flows from follower to followee; mass held by
/// dangling nodes is spread uniformly every iteration. Per-node sums run
/// over sorted predecessor lists and global sums over fixed chunks, so the
/// result is bit-identical at any thread count.
PageRankScores pagerank(const SocialGraph& g, const PageRankOptions& options = {});

struct HighLabeling {
  double threshold = 0.0;
  std::vector<InfluenceLabel> labels;
  std::size_t high_count = 0;
};

/// threshold = score at 0-based rank ceil(percentile * n) of the descending
/// order, i.e. the largest score that is not among the top ceil(percentile * n).
/// A node is High iff its score is strictly greater than the threshold.
HighLabeling label_high_pagerank(std::span<const double> scores, double percentile = 0.01);

struct PageRankResult {
  PageRankScores rank;
  PageRankOptions options;
  double percentile = 0.01;
  HighLabeling labeling;

  double score(NodeId u) const { return rank.scores[u]; }
  InfluenceLabel label(NodeId u) const { return labeling.labels[u]; }
};

PageRankResult rank_and_label(const SocialGraph& g, const PageRankOptions& options,
                              double percentile);

}  // namespace crosslink
