#include "crosslink/ml/evaluation.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "crosslink/error.hpp"
#include "crosslink/parallel.hpp"
#include "crosslink/rng.hpp"

namespace crosslink::ml {

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

std::optional<double> rank_auc(std::span<const double> scores, std::span<const InfluenceLabel> truth) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Tied block occupies 1-based ranks i+1 .. j; each gets the mean.
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (truth[order[t]] == InfluenceLabel::High) {
        positive_rank_sum += rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

EvalMetrics metrics_from_scores(std::span<const double> scores,
                                std::span<const InfluenceLabel> truth) {
  EvalMetrics m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted_high = scores[i] > 0.5;
    const bool high = truth[i] == InfluenceLabel::High;
    if (predicted_high && high) ++m.confusion.tp;
    if (predicted_high && !high) ++m.confusion.fp;
    if (!predicted_high && !high) ++m.confusion.tn;
    if (!predicted_high && high) ++m.confusion.fn;
  }
  const auto& c = m.confusion;
  m.precision_undefined = c.tp + c.fp == 0;
  m.recall_undefined = c.tp + c.fn == 0;
  m.precision = m.precision_undefined ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  m.recall = m.recall_undefined ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  m.f1 = f1_score(m.precision, m.recall);
  const auto auc = rank_auc(scores, truth);
  m.auc_undefined = !auc;
  m.auc = auc.value_or(0.5);
  return m;
}

EvalMetrics evaluate(const TrainedModel& model, const LabeledDataset& test) {
  if (test.empty()) throw DataError("test set is empty");
  std::vector<double> scores;
  scores.reserve(test.size());
  for (const auto& row : test.rows) scores.push_back(predict_score(model, row.features.as_array()));
  return metrics_from_scores(scores, test.labels());
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw UsageError("cross-validation needs k >= 2");
  if (n < k) throw DataError(fmt::format("cannot split {} rows into {} folds", n, k));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span(order));

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t cursor = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                    order.begin() + static_cast<std::ptrdiff_t>(cursor + size));
    cursor += size;
  }
  return folds;
}

CvResult cross_validate(Algorithm algorithm, const ParamMap& params, const LabeledDataset& ds,
                        std::size_t k, std::uint64_t seed) {
  const auto resolved = resolve_params(algorithm, params);
  const auto folds = make_folds(ds.size(), k, seed);

  CvResult result;
  result.folds.resize(k);
  parallel_for(k, [&](std::size_t f) {
    std::vector<std::size_t> train_rows;
    for (std::size_t other = 0; other < k; ++other) {
      if (other != f) train_rows.insert(train_rows.end(), folds[other].begin(), folds[other].end());
    }
    const auto train_set = ds.subset(train_rows, fmt::format("cv train fold {}", f));
    const auto validation = ds.subset(folds[f], fmt::format("cv validation fold {}", f));
    const auto model = train(algorithm, resolved, train_set, Rng::derive(seed, f).next());
    result.folds[f] = evaluate(model, validation);
  });

  std::size_t auc_folds = 0;
  double auc_sum = 0.0;
  for (const auto& m : result.folds) {
    result.precision += m.precision;
    result.recall += m.recall;
    result.f1 += m.f1;
    if (!m.auc_undefined) {
      auc_sum += m.auc;
      ++auc_folds;
    }
  }
  const auto folds_d = static_cast<double>(k);
  result.precision /= folds_d;
  result.recall /= folds_d;
  result.f1 /= folds_d;
  result.auc = auc_folds > 0 ? auc_sum / static_cast<double>(auc_folds) : 0.5;
  return result;
}

std::vector<ParamMap> enumerate_grid(const ParamMap& base, const ParamGrid& grid) {
  if (grid.empty()) throw UsageError("parameter grid is empty");
  for (const auto& [name, values] : grid) {
    if (values.empty()) throw UsageError(fmt::format("grid axis '{}' has no values", name));
  }
  std::vector<ParamMap> points{base};
  for (const auto& [name, values] : grid) {
    std::vector<ParamMap> expanded;
    expanded.reserve(points.size() * values.size());
    for (const auto& point : points) {
      for (double v : values) {
        auto p = point;
        p[name] = v;
        expanded.push_back(std::move(p));
      }
    }
    points = std::move(expanded);
  }
  return points;
}

GridResult grid_search(Algorithm algorithm, const ParamMap& base, const ParamGrid& grid,
                       const LabeledDataset& ds, std::size_t k, std::uint64_t seed) {
  const auto points = enumerate_grid(base, grid);
  for (const auto& p : points) resolve_params(algorithm, p);  // fail fast on bad values

  GridResult result;
  result.evaluated.resize(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    result.evaluated[i] = {resolve_params(algorithm, points[i]),
                           cross_validate(algorithm, points[i], ds, k, seed).f1};
  });
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == 0 || result.evaluated[i].mean_f1 > result.best_f1) {
      result.best_f1 = result.evaluated[i].mean_f1;
      result.best_params = result.evaluated[i].params;
    }
  }
  return result;
}

}  // namespace crosslink::ml
