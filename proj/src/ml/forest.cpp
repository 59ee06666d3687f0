#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "crosslink/error.hpp"
#include "crosslink/parallel.hpp"
#include "crosslink/rng.hpp"
#include "grower.hpp"
#include "learners.hpp"

namespace crosslink::ml::detail {
namespace {

struct ClassStats {
  double high = 0.0;
  double low = 0.0;

  double weight() const { return high + low; }
  ClassStats& operator+=(const ClassStats& o) {
    high += o.high;
    low += o.low;
    return *this;
  }
  friend ClassStats operator-(ClassStats a, const ClassStats& b) {
    a.high -= b.high;
    a.low -= b.low;
    return a;
  }
};

double entropy(const ClassStats& s) {
  const double w = s.weight();
  if (w <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : {s.high, s.low}) {
    if (c > 0.0) {
      const double p = c / w;
      h -= p * std::log2(p);
    }
  }
  return h;
}

/// Information-gain splits on weighted class counts.
class InformationGainPolicy {
 public:
  using Stats = ClassStats;

  InformationGainPolicy(std::span<const InfluenceLabel> y, std::span<const double> weight,
                        std::size_t max_depth, double min_leaf)
      : y_(y), weight_(weight), max_depth_(max_depth), min_leaf_(min_leaf) {}

  /// Fixed candidate set, or a fresh random subset of `per_split` features at
  /// every node when an Rng is attached.
  void sample_features(Rng* rng, std::size_t per_split) {
    rng_ = rng;
    per_split_ = per_split;
  }

  Stats row_stats(std::uint32_t r) const {
    return y_[r] == InfluenceLabel::High ? Stats{weight_[r], 0.0} : Stats{0.0, weight_[r]};
  }

  std::span<const std::size_t> candidate_features() {
    features_.resize(FeatureVector::kSize);
    std::iota(features_.begin(), features_.end(), 0);
    if (rng_ != nullptr && per_split_ < features_.size()) {
      for (std::size_t i = 0; i < per_split_; ++i) {
        const auto j = i + static_cast<std::size_t>(rng_->below(features_.size() - i));
        std::swap(features_[i], features_[j]);
      }
      features_.resize(per_split_);
      std::sort(features_.begin(), features_.end());
    }
    return features_;
  }

  bool can_split(const Stats& s, std::size_t depth) const {
    return depth < max_depth_ && s.high > 0.0 && s.low > 0.0 && s.weight() >= 2.0 * min_leaf_;
  }
  double min_gain() const { return 1e-12; }
  double leaf_value(const Stats& s) const { return s.weight() > 0.0 ? s.high / s.weight() : 0.5; }

  std::optional<double> split_gain(const Stats& left, const Stats& right, const Stats& parent) const {
    if (left.weight() < min_leaf_ || right.weight() < min_leaf_) return std::nullopt;
    if (left.weight() <= 0.0 || right.weight() <= 0.0) return std::nullopt;
    const double w = parent.weight();
    return entropy(parent) - (left.weight() * entropy(left) + right.weight() * entropy(right)) / w;
  }

 private:
  std::span<const InfluenceLabel> y_;
  std::span<const double> weight_;
  std::size_t max_depth_;
  double min_leaf_;
  Rng* rng_ = nullptr;
  std::size_t per_split_ = FeatureVector::kSize;
  std::vector<std::size_t> features_;
};

constexpr std::size_t kUnbounded = static_cast<std::size_t>(-1);

/// Bottom-up subtree replacement: a subtree becomes a leaf when the leaf's
/// pessimistic error estimate does not exceed the subtree's (plus 0.1, the
/// customary C4.5 slack). Returns the subtree's estimated errors.
double prune(Tree& tree, const std::vector<ClassStats>& stats, std::size_t node, double cf) {
  const auto& s = stats[node];
  const double total = s.weight();
  const double errors = total - std::max(s.high, s.low);
  const double as_leaf = errors + pessimistic_extra_errors(total, errors, cf);
  auto& n = tree.nodes[node];
  if (n.feature < 0) return as_leaf;

  const double subtree = prune(tree, stats, static_cast<std::size_t>(n.left), cf) +
                         prune(tree, stats, static_cast<std::size_t>(n.right), cf);
  if (as_leaf <= subtree + 0.1) {
    n.feature = -1;
    n.left = n.right = -1;
    return as_leaf;
  }
  return subtree;
}

/// Drops nodes orphaned by pruning, preserving depth-first order.
Tree compact(const Tree& tree) {
  Tree out;
  auto copy = [&](auto&& self, std::size_t old) -> std::int32_t {
    const auto index = static_cast<std::int32_t>(out.nodes.size());
    out.nodes.push_back(tree.nodes[old]);
    if (tree.nodes[old].feature >= 0) {
      const auto l = self(self, static_cast<std::size_t>(tree.nodes[old].left));
      const auto r = self(self, static_cast<std::size_t>(tree.nodes[old].right));
      out.nodes[static_cast<std::size_t>(index)].left = l;
      out.nodes[static_cast<std::size_t>(index)].right = r;
    }
    return index;
  };
  copy(copy, 0);
  return out;
}

std::vector<std::uint32_t> all_rows(std::size_t n) {
  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0u);
  return rows;
}

}  // namespace

double pessimistic_extra_errors(double total, double errors, double cf) {
  if (total <= 0.0) return 0.0;
  if (errors < 1.0) {
    const double base = total * (1.0 - std::pow(cf, 1.0 / total));
    if (errors == 0.0) return base;
    return base + errors * (pessimistic_extra_errors(total, 1.0, cf) - base);
  }
  if (errors + 0.5 >= total) return std::max(total - errors, 0.0);

  const double z = boost::math::quantile(boost::math::normal(), 1.0 - cf);
  const double f = (errors + 0.5) / total;
  const double z2 = z * z;
  const double upper =
      (f + z2 / (2.0 * total) + z * std::sqrt(f / total - f * f / total + z2 / (4.0 * total * total))) /
      (1.0 + z2 / total);
  return upper * total - errors;
}

ForestState fit_forest(const ParamMap& params, const TrainingData& data, std::uint64_t seed) {
  const std::size_t n = data.x.size();
  const auto trees = static_cast<std::size_t>(params.at("n_trees"));
  const auto per_split = static_cast<std::size_t>(params.at("features_per_split"));
  const auto max_depth = static_cast<std::size_t>(params.at("max_depth"));
  const BinnedMatrix binned(data.x);

  ForestState state;
  state.trees.resize(trees);
  parallel_for(trees, [&](std::size_t t) {
    Rng rng = Rng::derive(seed, t);
    std::vector<double> weight(n, 0.0);
    for (std::size_t draw = 0; draw < n; ++draw) weight[rng.below(n)] += 1.0;
    std::vector<std::uint32_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (weight[i] > 0.0) rows.push_back(static_cast<std::uint32_t>(i));
    }

    InformationGainPolicy policy(data.y, weight, max_depth, 1.0);
    policy.sample_features(&rng, per_split);
    TreeGrower grower(binned, policy);
    state.trees[t] = grower.grow(std::move(rows));
  });
  return state;
}

double score_forest(const ForestState& state, const Features& x) {
  double sum = 0.0;
  for (const auto& tree : state.trees) sum += tree.evaluate(x);
  return state.trees.empty() ? 0.5 : sum / static_cast<double>(state.trees.size());
}

DecisionTreeState fit_decision_tree(const ParamMap& params, const TrainingData& data) {
  const std::size_t n = data.x.size();
  const double min_leaf = params.at("min_instances_per_leaf");
  const double cf = params.at("confidence");
  const BinnedMatrix binned(data.x);
  const std::vector<double> weight(n, 1.0);

  InformationGainPolicy policy(data.y, weight, kUnbounded, min_leaf);
  TreeGrower grower(binned, policy);
  std::vector<ClassStats> stats;
  Tree tree = grower.grow(all_rows(n), &stats);
  prune(tree, stats, 0, cf);
  return {compact(tree)};
}

}  // namespace crosslink::ml::detail
