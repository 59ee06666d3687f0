#pragma once

// Histogram-based depth-first tree growing shared by every tree learner.
// A Policy supplies per-row statistics, the split score, the leaf value and
// the candidate features of each node.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crosslink/ml/tree.hpp"

namespace crosslink::ml::detail {

template <typename Policy>
class TreeGrower {
 public:
  using Stats = typename Policy::Stats;

  TreeGrower(const BinnedMatrix& x, Policy& policy) : x_(x), policy_(policy) {}

  /// Grows from `rows`; node_stats[i] holds the statistics of node i.
  Tree grow(std::vector<std::uint32_t> rows, std::vector<Stats>* node_stats = nullptr) {
    tree_ = Tree{};
    stats_.clear();
    build(std::move(rows), 0);
    if (node_stats) *node_stats = std::move(stats_);
    return std::move(tree_);
  }

 private:
  struct Best {
    double gain = 0.0;
    std::size_t feature = 0;
    std::size_t bin = 0;
  };

  std::int32_t build(std::vector<std::uint32_t> rows, std::size_t depth) {
    Stats total{};
    for (auto r : rows) total += policy_.row_stats(r);

    const auto index = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.push_back(Tree::Node{-1, 0.0, -1, -1, policy_.leaf_value(total)});
    stats_.push_back(total);

    if (!policy_.can_split(total, depth)) return index;
    auto best = find_split(rows, total);
    if (!best) return index;

    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    for (auto r : rows) (x_.bin(best->feature, r) <= best->bin ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    tree_.nodes[static_cast<std::size_t>(index)].feature = static_cast<std::int32_t>(best->feature);
    tree_.nodes[static_cast<std::size_t>(index)].threshold = x_.cut(best->feature, best->bin);
    const auto l = build(std::move(left), depth + 1);
    const auto r = build(std::move(right), depth + 1);
    tree_.nodes[static_cast<std::size_t>(index)].left = l;
    tree_.nodes[static_cast<std::size_t>(index)].right = r;
    return index;
  }

  std::optional<Best> find_split(const std::vector<std::uint32_t>& rows, const Stats& total) {
    std::optional<Best> best;
    for (std::size_t f : policy_.candidate_features()) {
      const std::size_t bins = x_.bin_count(f);
      if (bins < 2) continue;
      histogram_.assign(bins, Stats{});
      for (auto r : rows) histogram_[x_.bin(f, r)] += policy_.row_stats(r);

      Stats left{};
      for (std::size_t j = 0; j + 1 < bins; ++j) {
        left += histogram_[j];
        const Stats right = total - left;
        auto gain = policy_.split_gain(left, right, total);
        if (gain && *gain > policy_.min_gain() && (!best || *gain > best->gain)) {
          best = Best{*gain, f, j};
        }
      }
    }
    return best;
  }

  const BinnedMatrix& x_;
  Policy& policy_;
  Tree tree_;
  std::vector<Stats> stats_;
  std::vector<Stats> histogram_;
};

}  // namespace crosslink::ml::detail
