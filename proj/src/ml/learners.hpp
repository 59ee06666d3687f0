#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "crosslink/ml/model.hpp"

namespace crosslink::ml::detail {

struct TrainingData {
  std::span<const Features> x;
  std::span<const InfluenceLabel> y;
};

GbtState fit_gbt(const ParamMap& params, const TrainingData& data, std::uint64_t seed);
ForestState fit_forest(const ParamMap& params, const TrainingData& data, std::uint64_t seed);
DecisionTreeState fit_decision_tree(const ParamMap& params, const TrainingData& data);
NaiveBayesState fit_naive_bayes(const TrainingData& data);
LogisticState fit_logistic(const ParamMap& params, const TrainingData& data);

double score_gbt(const GbtState& state, const Features& x);
double score_forest(const ForestState& state, const Features& x);
double score_naive_bayes(const NaiveBayesState& state, const Features& x);
double score_logistic(const LogisticState& state, const Features& x);

/// C4.5 upper-confidence error allowance for `errors` misclassified out of
/// `total` at confidence factor `cf` (added to the observed errors).
double pessimistic_extra_errors(double total, double errors, double cf);

inline double sigmoid(double margin) { return 1.0 / (1.0 + std::exp(-margin)); }

inline double as_target(InfluenceLabel label) { return label == InfluenceLabel::High ? 1.0 : 0.0; }

}  // namespace crosslink::ml::detail
