#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "crosslink/ml/dataset.hpp"
#include "crosslink/ml/model.hpp"

namespace crosslink::ml {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct EvalMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.5;
  Confusion confusion;
  bool precision_undefined = false;  // no positive predictions
  bool recall_undefined = false;     // no positive rows
  bool auc_undefined = false;        // a class is missing from the scored set
};

double f1_score(double precision, double recall);

/// Mann-Whitney AUC: sum of positive ranks (ties averaged), normalized.
/// nullopt when either class is absent.
std::optional<double> rank_auc(std::span<const double> scores, std::span<const InfluenceLabel> truth);

/// Confusion at the fixed 0.5 cut (High iff score > 0.5) plus rank AUC.
EvalMetrics metrics_from_scores(std::span<const double> scores,
                                std::span<const InfluenceLabel> truth);

/// Throws DataError on an empty test set.
EvalMetrics evaluate(const TrainedModel& model, const LabeledDataset& test);

/// Seeded shuffle of [0, n) cut into k folds whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed);

struct CvResult {
  std::vector<EvalMetrics> folds;
  // Unweighted means over folds (AUC over folds where it is defined).
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.5;
};

/// Throws UsageError if k < 2 and DataError if |ds| < k.
CvResult cross_validate(Algorithm algorithm, const ParamMap& params, const LabeledDataset& ds,
                        std::size_t k, std::uint64_t seed);

using ParamGrid = std::map<std::string, std::vector<double>>;

struct GridPoint {
  ParamMap params;
  double mean_f1 = 0.0;
};

struct GridResult {
  ParamMap best_params;
  double best_f1 = 0.0;
  std::vector<GridPoint> evaluated;  // in enumeration order
};

/// Enumeration order: keys in map order, first key varies slowest. Every
/// point is cross-validated on the same folds; the first maximum wins.
std::vector<ParamMap> enumerate_grid(const ParamMap& base, const ParamGrid& grid);

GridResult grid_search(Algorithm algorithm, const ParamMap& base, const ParamGrid& grid,
                       const LabeledDataset& ds, std::size_t k, std::uint64_t seed);

}  // namespace crosslink::ml
