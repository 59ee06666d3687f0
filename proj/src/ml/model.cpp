#include "crosslink/ml/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "crosslink/digest.hpp"
#include "crosslink/error.hpp"
#include "learners.hpp"

namespace crosslink::ml {

using nlohmann::ordered_json;

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::GradientBoostedTrees: return "gbt";
    case Algorithm::RandomForest: return "random_forest";
    case Algorithm::DecisionTree: return "decision_tree";
    case Algorithm::NaiveBayes: return "naive_bayes";
    case Algorithm::LogisticRegression: return "logistic_regression";
  }
  return "gbt";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  for (auto a : kAlgorithms) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

ParamMap default_params(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::GradientBoostedTrees:
      return {{"learning_rate", 0.37}, {"max_depth", 6},        {"min_child_weight", 1},
              {"gamma", 0},            {"subsample", 0.6},      {"colsample_bytree", 0.9},
              {"alpha", 0.005},        {"lambda", 1},           {"n_rounds", 100}};
    case Algorithm::RandomForest:
      return {{"n_trees", 100}, {"features_per_split", 3}, {"max_depth", 9}};
    case Algorithm::DecisionTree:
      return {{"min_instances_per_leaf", 9}, {"confidence", 0.18}};
    case Algorithm::NaiveBayes:
      return {};
    case Algorithm::LogisticRegression:
      return {{"iterations", 500}, {"learning_rate", 0.5}, {"l2", 1e-4}};
  }
  return {};
}

namespace {

[[noreturn]] void bad_param(std::string_view name, std::string_view why) {
  throw UsageError(fmt::format("invalid parameter '{}': {}", name, why));
}

void require_integer(const ParamMap& p, const char* name, double min, double max) {
  const double v = p.at(name);
  if (!(v >= min && v <= max) || v != std::floor(v)) {
    bad_param(name, fmt::format("expected an integer in [{}, {}], got {}", min, max, v));
  }
}

void require_range(const ParamMap& p, const char* name, double min, double max, bool open_min) {
  const double v = p.at(name);
  const bool ok = (open_min ? v > min : v >= min) && v <= max;
  if (!ok) {
    bad_param(name, fmt::format("expected a value in {}{}, {}], got {}", open_min ? "(" : "[", min, max, v));
  }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ParamMap resolve_params(Algorithm algorithm, const ParamMap& overrides) {
  ParamMap p = default_params(algorithm);
  for (const auto& [name, value] : overrides) {
    auto it = p.find(name);
    if (it == p.end()) {
      throw UsageError(fmt::format("unknown parameter '{}' for {}", name, to_string(algorithm)));
    }
    if (!std::isfinite(value)) bad_param(name, "must be finite");
    it->second = value;
  }

  switch (algorithm) {
    case Algorithm::GradientBoostedTrees:
      require_range(p, "learning_rate", 0, kInf, true);
      require_integer(p, "max_depth", 0, 64);
      require_range(p, "min_child_weight", 0, kInf, false);
      require_range(p, "gamma", 0, kInf, false);
      require_range(p, "subsample", 0, 1, true);
      require_range(p, "colsample_bytree", 0, 1, true);
      require_range(p, "alpha", 0, kInf, false);
      require_range(p, "lambda", 0, kInf, false);
      require_integer(p, "n_rounds", 0, 1e6);
      break;
    case Algorithm::RandomForest:
      require_integer(p, "n_trees", 1, 1e5);
      require_integer(p, "features_per_split", 1, FeatureVector::kSize);
      require_integer(p, "max_depth", 0, 64);
      break;
    case Algorithm::DecisionTree:
      require_integer(p, "min_instances_per_leaf", 1, 1e9);
      require_range(p, "confidence", 0, 0.5, true);
      break;
    case Algorithm::NaiveBayes:
      break;
    case Algorithm::LogisticRegression:
      require_integer(p, "iterations", 0, 1e7);
      require_range(p, "learning_rate", 0, kInf, true);
      require_range(p, "l2", 0, kInf, false);
      break;
  }
  return p;
}

TrainedModel train(Algorithm algorithm, const ParamMap& params, const LabeledDataset& ds,
                   std::uint64_t seed) {
  if (ds.empty()) throw DataError("training set is empty");
  if (ds.count(InfluenceLabel::High) == 0 || ds.count(InfluenceLabel::Low) == 0) {
    throw DataError("training set needs both classes");
  }
  TrainedModel model;
  model.algorithm = algorithm;
  model.params = resolve_params(algorithm, params);
  model.training_seed = seed;

  const auto x = ds.feature_matrix();
  const auto y = ds.labels();
  const detail::TrainingData data{x, y};
  switch (algorithm) {
    case Algorithm::GradientBoostedTrees: model.state = detail::fit_gbt(model.params, data, seed); break;
    case Algorithm::RandomForest: model.state = detail::fit_forest(model.params, data, seed); break;
    case Algorithm::DecisionTree: model.state = detail::fit_decision_tree(model.params, data); break;
    case Algorithm::NaiveBayes: model.state = detail::fit_naive_bayes(data); break;
    case Algorithm::LogisticRegression: model.state = detail::fit_logistic(model.params, data); break;
  }
  return model;
}

double predict_score(const TrainedModel& model, const Features& x) {
  struct Visitor {
    const Features& x;
    double operator()(const GbtState& s) const { return detail::score_gbt(s, x); }
    double operator()(const ForestState& s) const { return detail::score_forest(s, x); }
    double operator()(const DecisionTreeState& s) const { return s.tree.evaluate(x); }
    double operator()(const NaiveBayesState& s) const { return detail::score_naive_bayes(s, x); }
    double operator()(const LogisticState& s) const { return detail::score_logistic(s, x); }
  };
  return std::clamp(std::visit(Visitor{x}, model.state), 0.0, 1.0);
}

Prediction predict(const TrainedModel& model, const FeatureVector& x) {
  const double score = predict_score(model, x.as_array());
  return {score, score > 0.5 ? InfluenceLabel::High : InfluenceLabel::Low};
}

// ---- persistence ----------------------------------------------------------

namespace {

ordered_json tree_to_json(const Tree& tree) {
  ordered_json feature = ordered_json::array();
  ordered_json threshold = ordered_json::array();
  ordered_json left = ordered_json::array();
  ordered_json right = ordered_json::array();
  ordered_json value = ordered_json::array();
  for (const auto& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
          {"value", value}};
}

Tree tree_from_json(const ordered_json& j) {
  Tree tree;
  const auto& feature = j.at("feature");
  const std::size_t n = feature.size();
  if (n == 0 || j.at("threshold").size() != n || j.at("left").size() != n ||
      j.at("right").size() != n || j.at("value").size() != n) {
    throw DataError("model tree arrays are inconsistent");
  }
  tree.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = tree.nodes[i];
    node.feature = feature[i].get<std::int32_t>();
    node.threshold = j["threshold"][i].get<double>();
    node.left = j["left"][i].get<std::int32_t>();
    node.right = j["right"][i].get<std::int32_t>();
    node.value = j["value"][i].get<double>();
    if (node.feature >= static_cast<std::int32_t>(FeatureVector::kSize)) {
      throw DataError("model tree references an unknown feature");
    }
    if (node.feature >= 0) {
      const auto bound = static_cast<std::int32_t>(n);
      if (node.left <= static_cast<std::int32_t>(i) || node.left >= bound ||
          node.right <= static_cast<std::int32_t>(i) || node.right >= bound) {
        throw DataError("model tree child index out of range");
      }
    }
  }
  return tree;
}

template <std::size_t N>
ordered_json array_to_json(const std::array<double, N>& a) {
  return ordered_json(std::vector<double>(a.begin(), a.end()));
}

template <std::size_t N>
std::array<double, N> array_from_json(const ordered_json& j) {
  if (j.size() != N) throw DataError("model array has the wrong length");
  std::array<double, N> a{};
  for (std::size_t i = 0; i < N; ++i) a[i] = j[i].get<double>();
  return a;
}

ordered_json trees_to_json(const std::vector<Tree>& trees) {
  ordered_json out = ordered_json::array();
  for (const auto& t : trees) out.push_back(tree_to_json(t));
  return out;
}

std::vector<Tree> trees_from_json(const ordered_json& j) {
  std::vector<Tree> trees;
  for (const auto& t : j) trees.push_back(tree_from_json(t));
  return trees;
}

ordered_json state_to_json(const ModelState& state) {
  struct Visitor {
    ordered_json operator()(const GbtState& s) const {
      return {{"base_margin", s.base_margin}, {"trees", trees_to_json(s.trees)}};
    }
    ordered_json operator()(const ForestState& s) const { return {{"trees", trees_to_json(s.trees)}}; }
    ordered_json operator()(const DecisionTreeState& s) const { return {{"tree", tree_to_json(s.tree)}}; }
    ordered_json operator()(const NaiveBayesState& s) const {
      return {{"prior_high", s.prior_high},
              {"mean_low", array_to_json(s.mean[0])},
              {"mean_high", array_to_json(s.mean[1])},
              {"variance_low", array_to_json(s.variance[0])},
              {"variance_high", array_to_json(s.variance[1])},
              {"bio_rate", array_to_json(s.bio_rate)}};
    }
    ordered_json operator()(const LogisticState& s) const {
      return {{"center", array_to_json(s.center)},
              {"scale", array_to_json(s.scale)},
              {"weights", array_to_json(s.weights)},
              {"bias", s.bias}};
    }
  };
  return std::visit(Visitor{}, state);
}

ModelState state_from_json(Algorithm algorithm, const ordered_json& j) {
  switch (algorithm) {
    case Algorithm::GradientBoostedTrees: {
      GbtState s;
      s.base_margin = j.at("base_margin").get<double>();
      s.trees = trees_from_json(j.at("trees"));
      return s;
    }
    case Algorithm::RandomForest: return ForestState{trees_from_json(j.at("trees"))};
    case Algorithm::DecisionTree: return DecisionTreeState{tree_from_json(j.at("tree"))};
    case Algorithm::NaiveBayes: {
      NaiveBayesState s;
      s.prior_high = j.at("prior_high").get<double>();
      s.mean = {array_from_json<5>(j.at("mean_low")), array_from_json<5>(j.at("mean_high"))};
      s.variance = {array_from_json<5>(j.at("variance_low")), array_from_json<5>(j.at("variance_high"))};
      s.bio_rate = array_from_json<2>(j.at("bio_rate"));
      return s;
    }
    case Algorithm::LogisticRegression: {
      LogisticState s;
      s.center = array_from_json<FeatureVector::kSize>(j.at("center"));
      s.scale = array_from_json<FeatureVector::kSize>(j.at("scale"));
      s.weights = array_from_json<FeatureVector::kSize>(j.at("weights"));
      s.bias = j.at("bias").get<double>();
      return s;
    }
  }
  throw DataError("unknown algorithm");
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  ordered_json doc;
  doc["format"] = "crosslink-model";
  doc["version"] = kModelFormatVersion;
  doc["algorithm"] = std::string(to_string(model.algorithm));
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : model.params) params[k] = v;
  doc["params"] = params;
  doc["seed"] = model.training_seed;
  doc["state"] = state_to_json(model.state);
  return doc.dump(1) + "\n";
}

TrainedModel model_from_json(std::string_view text) {
  try {
    const auto doc = ordered_json::parse(text);
    if (doc.at("format") != "crosslink-model") throw DataError("not a crosslink model document");
    if (doc.at("version") != kModelFormatVersion) {
      throw DataError(fmt::format("unsupported model version {}", doc.at("version").dump()));
    }
    auto algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    if (!algorithm) throw DataError("unknown algorithm in model document");

    TrainedModel model;
    model.algorithm = *algorithm;
    ParamMap params;
    for (const auto& [k, v] : doc.at("params").items()) params[k] = v.get<double>();
    model.params = resolve_params(*algorithm, params);
    model.training_seed = doc.at("seed").get<std::uint64_t>();
    model.state = state_from_json(*algorithm, doc.at("state"));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("malformed model document: {}", e.what()));
  }
}

std::string model_ref(const TrainedModel& model) {
  return fmt::format("{}/v{}/{}", to_string(model.algorithm), kModelFormatVersion,
                     sha256_hex(model_to_json(model)).substr(0, 12));
}

}  // namespace crosslink::ml
