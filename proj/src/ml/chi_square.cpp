#include "crosslink/ml/chi_square.hpp"

#include <algorithm>
#include <numeric>

#include "crosslink/error.hpp"

namespace crosslink::ml {

std::vector<std::uint32_t> equal_frequency_bins(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw UsageError("bins must be positive");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<std::uint32_t> bin(n, 0);
  std::size_t first = 0;  // position of the first copy of the current value
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0 && values[order[r]] != values[order[r - 1]]) first = r;
    bin[order[r]] = static_cast<std::uint32_t>(first * bins / n);
  }
  return bin;
}

double chi_square_statistic(std::span<const std::uint32_t> bins,
                            std::span<const InfluenceLabel> labels) {
  const std::size_t n = bins.size();
  if (n == 0) return 0.0;
  const std::size_t rows = *std::max_element(bins.begin(), bins.end()) + 1;
  std::vector<std::array<double, 2>> table(rows, {0.0, 0.0});
  std::array<double, 2> column{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    table[bins[i]][c] += 1.0;
    column[c] += 1.0;
  }

  double chi2 = 0.0;
  const auto total = static_cast<double>(n);
  for (const auto& row : table) {
    const double row_sum = row[0] + row[1];
    if (row_sum == 0.0) continue;
    for (std::size_t c = 0; c < 2; ++c) {
      const double expected = row_sum * column[c] / total;
      if (expected == 0.0) continue;
      const double diff = row[c] - expected;
      chi2 += diff * diff / expected;
    }
  }
  return chi2;
}

std::vector<FeatureChiSquare> chi_square_rank(const LabeledDataset& ds, std::size_t bins) {
  if (ds.empty()) throw DataError("chi-square ranking needs a non-empty dataset");
  const auto labels = ds.labels();
  if (ds.count(InfluenceLabel::High) == 0 || ds.count(InfluenceLabel::Low) == 0) {
    throw DataError("chi-square ranking needs both classes");
  }

  std::vector<FeatureChiSquare> ranked;
  std::vector<double> column(ds.size());
  for (std::size_t f = 0; f < FeatureVector::kSize; ++f) {
    for (std::size_t i = 0; i < ds.size(); ++i) column[i] = ds.rows[i].features.as_array()[f];
    std::vector<std::uint32_t> binned;
    if (f == FeatureVector::kBioIndex) {
      binned.assign(ds.size(), 0);
      for (std::size_t i = 0; i < ds.size(); ++i) binned[i] = ds.rows[i].features.bio;
    } else {
      binned = equal_frequency_bins(column, bins);
    }
    ranked.push_back({FeatureVector::kNames[f], f, chi_square_statistic(binned, labels)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.chi2 > b.chi2; });
  return ranked;
}

}  // namespace crosslink::ml
