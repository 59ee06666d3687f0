#include <algorithm>
#include <cmath>
#include <numbers>

#include "learners.hpp"

namespace crosslink::ml::detail {
namespace {

constexpr std::size_t kCounts = 5;  // every feature except bio
constexpr double kMinVariance = 1e-6;

/// Counts are heavy-tailed; both learners below work on log1p(count).
Features log_counts(const Features& x) {
  Features z = x;
  for (std::size_t f = 0; f < kCounts; ++f) z[f] = std::log1p(x[f]);
  return z;
}

double log_gaussian(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

}  // namespace

NaiveBayesState fit_naive_bayes(const TrainingData& data) {
  NaiveBayesState state;
  std::array<double, 2> count{0.0, 0.0};
  std::array<double, 2> bio_on{0.0, 0.0};
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const auto c = static_cast<std::size_t>(data.y[i]);
    const Features z = log_counts(data.x[i]);
    count[c] += 1.0;
    bio_on[c] += z[FeatureVector::kBioIndex];
    for (std::size_t f = 0; f < kCounts; ++f) state.mean[c][f] += z[f];
  }
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t f = 0; f < kCounts; ++f) state.mean[c][f] /= count[c];
  }
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const auto c = static_cast<std::size_t>(data.y[i]);
    const Features z = log_counts(data.x[i]);
    for (std::size_t f = 0; f < kCounts; ++f) {
      const double d = z[f] - state.mean[c][f];
      state.variance[c][f] += d * d;
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t f = 0; f < kCounts; ++f) {
      state.variance[c][f] = std::max(state.variance[c][f] / count[c], kMinVariance);
    }
    state.bio_rate[c] = (bio_on[c] + 1.0) / (count[c] + 2.0);
  }
  state.prior_high = count[1] / (count[0] + count[1]);
  return state;
}

double score_naive_bayes(const NaiveBayesState& state, const Features& x) {
  const Features z = log_counts(x);
  std::array<double, 2> log_joint{std::log(1.0 - state.prior_high), std::log(state.prior_high)};
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t f = 0; f < kCounts; ++f) {
      log_joint[c] += log_gaussian(z[f], state.mean[c][f], state.variance[c][f]);
    }
    const double p = state.bio_rate[c];
    log_joint[c] += std::log(z[FeatureVector::kBioIndex] > 0.5 ? p : 1.0 - p);
  }
  return sigmoid(log_joint[1] - log_joint[0]);
}

LogisticState fit_logistic(const ParamMap& params, const TrainingData& data) {
  const std::size_t n = data.x.size();
  const auto iterations = static_cast<std::size_t>(params.at("iterations"));
  const double rate = params.at("learning_rate");
  const double l2 = params.at("l2");

  std::vector<Features> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = log_counts(data.x[i]);

  LogisticState state;
  for (std::size_t f = 0; f < FeatureVector::kSize; ++f) {
    double mean = 0.0;
    for (const auto& row : z) mean += row[f];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& row : z) var += (row[f] - mean) * (row[f] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    state.center[f] = mean;
    state.scale[f] = sd > 1e-12 ? sd : 1.0;
  }
  for (auto& row : z) {
    for (std::size_t f = 0; f < FeatureVector::kSize; ++f) {
      row[f] = (row[f] - state.center[f]) / state.scale[f];
    }
  }

  // Full-batch gradient descent on the mean log-loss plus (l2 / 2) |w|^2.
  for (std::size_t it = 0; it < iterations; ++it) {
    Features grad{};
    double grad_bias = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double margin = state.bias;
      for (std::size_t f = 0; f < FeatureVector::kSize; ++f) margin += state.weights[f] * z[i][f];
      const double residual = sigmoid(margin) - as_target(data.y[i]);
      grad_bias += residual;
      for (std::size_t f = 0; f < FeatureVector::kSize; ++f) grad[f] += residual * z[i][f];
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    state.bias -= rate * grad_bias * inv_n;
    for (std::size_t f = 0; f < FeatureVector::kSize; ++f) {
      state.weights[f] -= rate * (grad[f] * inv_n + l2 * state.weights[f]);
    }
  }
  return state;
}

double score_logistic(const LogisticState& state, const Features& x) {
  const Features z = log_counts(x);
  double margin = state.bias;
  for (std::size_t f = 0; f < FeatureVector::kSize; ++f) {
    margin += state.weights[f] * (z[f] - state.center[f]) / state.scale[f];
  }
  return sigmoid(margin);
}

}  // namespace crosslink::ml::detail
