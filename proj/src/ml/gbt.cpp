#include <algorithm>
#include <cmath>
#include <numeric>

#include "crosslink/rng.hpp"
#include "grower.hpp"
#include "learners.hpp"

namespace crosslink::ml::detail {
namespace {

struct GradientStats {
  double grad = 0.0;
  double hess = 0.0;
  double count = 0.0;

  GradientStats& operator+=(const GradientStats& o) {
    grad += o.grad;
    hess += o.hess;
    count += o.count;
    return *this;
  }
  friend GradientStats operator-(GradientStats a, const GradientStats& b) {
    a.grad -= b.grad;
    a.hess -= b.hess;
    a.count -= b.count;
    return a;
  }
};

/// Second-order boosting objective with L1 (alpha) and L2 (lambda) leaf
/// penalties, min_child_weight on the hessian and gamma per split.
class BoostingPolicy {
 public:
  using Stats = GradientStats;

  BoostingPolicy(const ParamMap& p, std::span<const double> grad, std::span<const double> hess)
      : grad_(grad),
        hess_(hess),
        eta_(p.at("learning_rate")),
        max_depth_(static_cast<std::size_t>(p.at("max_depth"))),
        min_child_weight_(p.at("min_child_weight")),
        gamma_(p.at("gamma")),
        alpha_(p.at("alpha")),
        lambda_(p.at("lambda")) {}

  void set_features(std::vector<std::size_t> features) { features_ = std::move(features); }

  Stats row_stats(std::uint32_t r) const { return {grad_[r], hess_[r], 1.0}; }
  std::span<const std::size_t> candidate_features() const { return features_; }
  bool can_split(const Stats& s, std::size_t depth) const { return depth < max_depth_ && s.count >= 2; }
  double min_gain() const { return 1e-12; }

  double leaf_value(const Stats& s) const {
    const double denom = s.hess + lambda_;
    if (denom <= 0.0) return 0.0;
    return -eta_ * shrink(s.grad) / denom;
  }

  std::optional<double> split_gain(const Stats& left, const Stats& right, const Stats& parent) const {
    if (left.count == 0 || right.count == 0) return std::nullopt;
    if (left.hess < min_child_weight_ || right.hess < min_child_weight_) return std::nullopt;
    return 0.5 * (score(left) + score(right) - score(parent)) - gamma_;
  }

 private:
  double shrink(double g) const {
    if (g > alpha_) return g - alpha_;
    if (g < -alpha_) return g + alpha_;
    return 0.0;
  }
  double score(const Stats& s) const {
    const double t = shrink(s.grad);
    return t * t / (s.hess + lambda_);
  }

  std::span<const double> grad_;
  std::span<const double> hess_;
  std::vector<std::size_t> features_;
  double eta_;
  std::size_t max_depth_;
  double min_child_weight_;
  double gamma_;
  double alpha_;
  double lambda_;
};

double log_loss(std::span<const double> margin, std::span<const InfluenceLabel> y) {
  double total = 0.0;
  for (std::size_t i = 0; i < margin.size(); ++i) {
    // log(1 + e^m) - y m, computed stably.
    const double m = margin[i];
    const double softplus = m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    total += softplus - as_target(y[i]) * m;
  }
  return total / static_cast<double>(margin.size());
}

}  // namespace

GbtState fit_gbt(const ParamMap& params, const TrainingData& data, std::uint64_t seed) {
  const std::size_t n = data.x.size();
  const BinnedMatrix binned(data.x);
  Rng rng(seed);

  double positives = 0.0;
  for (auto label : data.y) positives += as_target(label);
  const double prior = positives / static_cast<double>(n);

  GbtState state;
  state.base_margin = std::log(prior / (1.0 - prior));
  std::vector<double> margin(n, state.base_margin);
  std::vector<double> grad(n);
  std::vector<double> hess(n);

  const auto rounds = static_cast<std::size_t>(params.at("n_rounds"));
  const double subsample = params.at("subsample");
  const auto columns = std::max<std::size_t>(
      1, static_cast<std::size_t>(params.at("colsample_bytree") * FeatureVector::kSize));

  BoostingPolicy policy(params, grad, hess);
  detail::TreeGrower grower(binned, policy);
  std::vector<std::size_t> all_features(FeatureVector::kSize);
  std::iota(all_features.begin(), all_features.end(), 0);

  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = p - as_target(data.y[i]);
      hess[i] = std::max(p * (1.0 - p), 1e-16);
    }

    std::vector<std::uint32_t> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (subsample >= 1.0 || rng.uniform() < subsample) rows.push_back(static_cast<std::uint32_t>(i));
    }
    if (rows.empty()) rows.push_back(static_cast<std::uint32_t>(rng.below(n)));

    std::vector<std::size_t> features = all_features;
    if (columns < features.size()) {
      rng.shuffle(std::span(features));
      features.resize(columns);
      std::sort(features.begin(), features.end());
    }
    policy.set_features(std::move(features));

    Tree tree = grower.grow(std::move(rows));
    for (std::size_t i = 0; i < n; ++i) margin[i] += tree.evaluate(data.x[i]);
    state.trees.push_back(std::move(tree));
    state.training_loss.push_back(log_loss(margin, data.y));
  }
  return state;
}

double score_gbt(const GbtState& state, const Features& x) {
  double margin = state.base_margin;
  for (const auto& tree : state.trees) margin += tree.evaluate(x);
  return sigmoid(margin);
}

}  // namespace crosslink::ml::detail
