#include "crosslink/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "crosslink/error.hpp"
#include "crosslink/parallel.hpp"

namespace crosslink {
namespace {

constexpr std::size_t kChunk = 4096;

double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& term,
                   std::vector<double>& partial) {
  partial.assign(chunk_count(n, kChunk), 0.0);
  parallel_chunks(n, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    partial[c] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace

PageRankScores pagerank(const SocialGraph& g, const PageRankOptions& options) {
  const std::size_t n = g.node_count();
  if (n == 0) throw DataError("empty graph");
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw UsageError("damping must lie in (0, 1)");
  }
  if (!(options.tolerance > 0.0)) throw UsageError("tolerance must be positive");

  const double d = options.damping;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n);
  std::vector<double> next(n, 0.0);
  std::vector<double> contribution(n, 0.0);
  std::vector<double> partial;

  PageRankScores result;
  for (std::size_t iteration = 1; iteration <= options.max_iterations; ++iteration) {
    parallel_chunks(n, kChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t u = begin; u < end; ++u) {
        const auto out = g.out_degree(static_cast<NodeId>(u));
        contribution[u] = out > 0 ? rank[u] / static_cast<double>(out) : 0.0;
      }
    });
    const double dangling = chunked_sum(
        n, [&](std::size_t u) { return g.out_degree(static_cast<NodeId>(u)) == 0 ? rank[u] : 0.0; },
        partial);

    const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
    parallel_chunks(n, kChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t v = begin; v < end; ++v) {
        double incoming = 0.0;
        for (NodeId u : g.predecessors(static_cast<NodeId>(v))) incoming += contribution[u];
        next[v] = base + d * incoming;
      }
    });

    result.residual = chunked_sum(n, [&](std::size_t u) { return std::abs(next[u] - rank[u]); }, partial);
    rank.swap(next);
    result.iterations = iteration;
    if (options.observer) options.observer(iteration, rank);
    if (result.residual < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(rank);
  return result;
}

HighLabeling label_high_pagerank(std::span<const double> scores, double percentile) {
  if (scores.empty()) throw DataError("no scores to label");
  if (!(percentile > 0.0 && percentile < 1.0)) throw UsageError("percentile must lie in (0, 1)");

  const std::size_t n = scores.size();
  const double raw = percentile * static_cast<double>(n);
  auto top = static_cast<std::size_t>(std::ceil(raw));
  if (top > 0 && static_cast<double>(top) - raw > 1.0 - 1e-9) --top;  // raw sat on an integer
  const std::size_t rank = std::min(top, n - 1);

  std::vector<double> sorted(scores.begin(), scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank), sorted.end(),
                   std::greater<>());

  HighLabeling labeling;
  labeling.threshold = sorted[rank];
  labeling.labels.resize(n, InfluenceLabel::Low);
  for (std::size_t u = 0; u < n; ++u) {
    if (scores[u] > labeling.threshold) {
      labeling.labels[u] = InfluenceLabel::High;
      ++labeling.high_count;
    }
  }
  return labeling;
}

PageRankResult rank_and_label(const SocialGraph& g, const PageRankOptions& options,
                              double percentile) {
  PageRankResult result;
  result.rank = pagerank(g, options);
  result.options = options;
  result.options.observer = nullptr;
  result.percentile = percentile;
  result.labeling = label_high_pagerank(result.rank.scores, percentile);
  return result;
}

}  // namespace crosslink
