#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crosslink/ml/dataset.hpp"
#include "crosslink/ml/tree.hpp"

namespace crosslink::ml {

enum class Algorithm { GradientBoostedTrees, RandomForest, DecisionTree, NaiveBayes, LogisticRegression };

inline constexpr std::array<Algorithm, 5> kAlgorithms = {
    Algorithm::GradientBoostedTrees, Algorithm::RandomForest, Algorithm::DecisionTree,
    Algorithm::NaiveBayes, Algorithm::LogisticRegression};

/// "gbt" | "random_forest" | "decision_tree" | "naive_bayes" | "logistic_regression"
std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view text);

using ParamMap = std::map<std::string, double>;

/// Full parameter set with defaults for the family.
///   gbt: learning_rate 0.37, max_depth 6, min_child_weight 1, gamma 0,
///        subsample 0.6, colsample_bytree 0.9, alpha 0.005, lambda 1, n_rounds 100
///   random_forest: n_trees 100, features_per_split 3, max_depth 9
///   decision_tree: min_instances_per_leaf 9, confidence 0.18
///   naive_bayes: (none)
///   logistic_regression: iterations 500, learning_rate 0.5, l2 1e-4
ParamMap default_params(Algorithm algorithm);

/// Overlays `overrides` on the defaults and range-checks the result.
/// Throws UsageError naming the offending parameter.
ParamMap resolve_params(Algorithm algorithm, const ParamMap& overrides);

struct GbtState {
  double base_margin = 0.0;
  std::vector<Tree> trees;  // leaf values already scaled by the learning rate
  /// Mean training log-loss after each round (not persisted).
  std::vector<double> training_loss;
};

struct ForestState {
  std::vector<Tree> trees;  // leaf value = fraction of High rows
};

struct DecisionTreeState {
  Tree tree;
};

struct NaiveBayesState {
  double prior_high = 0.5;
  // Gaussian on log1p of each count feature, per class (0 = Low, 1 = High).
  std::array<std::array<double, 5>, 2> mean{};
  std::array<std::array<double, 5>, 2> variance{};
  std::array<double, 2> bio_rate{};  // P(bio = 1 | class), Laplace-smoothed
};

struct LogisticState {
  Features center{};
  Features scale{};
  Features weights{};
  double bias = 0.0;
};

using ModelState =
    std::variant<GbtState, ForestState, DecisionTreeState, NaiveBayesState, LogisticState>;

struct TrainedModel {
  Algorithm algorithm = Algorithm::GradientBoostedTrees;
  ParamMap params;
  std::uint64_t training_seed = 0;
  ModelState state;
};

struct Prediction {
  double score = 0.0;  // P(High), in [0, 1]
  InfluenceLabel label = InfluenceLabel::Low;
};

/// Throws DataError if `train` is empty or holds a single class.
TrainedModel train(Algorithm algorithm, const ParamMap& params, const LabeledDataset& train,
                   std::uint64_t seed);

Prediction predict(const TrainedModel& model, const FeatureVector& x);
double predict_score(const TrainedModel& model, const Features& x);

/// Versioned JSON document: format, version, algorithm, params, seed, state.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);

/// "<algorithm>/v<version>/<first 12 hex digits of the document's SHA-256>".
std::string model_ref(const TrainedModel& model);

inline constexpr int kModelFormatVersion = 1;

}  // namespace crosslink::ml
