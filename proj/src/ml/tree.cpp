#include "crosslink/ml/tree.hpp"

#include <algorithm>

#include "crosslink/error.hpp"

namespace crosslink::ml {

std::size_t Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t deepest = 0;
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (nodes[i].feature >= 0) {
      stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
    }
  }
  return deepest;
}

namespace {

double midpoint(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid > a ? mid : b;
}

}  // namespace

BinnedMatrix::BinnedMatrix(std::span<const Features> rows, std::size_t max_bins) : rows_(rows.size()) {
  if (max_bins < 2 || max_bins > 65536) throw UsageError("max_bins must lie in [2, 65536]");
  std::vector<double> column(rows_);
  for (std::size_t f = 0; f < FeatureVector::kSize; ++f) {
    for (std::size_t i = 0; i < rows_; ++i) column[i] = rows[i][f];
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> distinct;
    std::vector<std::size_t> through;  // rows with value <= distinct[i]
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (i + 1 == sorted.size() || sorted[i + 1] != sorted[i]) {
        distinct.push_back(sorted[i]);
        through.push_back(i + 1);
      }
    }

    auto& cuts = cuts_[f];
    if (distinct.size() <= max_bins) {
      for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        cuts.push_back(midpoint(distinct[i], distinct[i + 1]));
      }
    } else {
      std::size_t next_quantile = 1;
      for (std::size_t i = 0; i + 1 < distinct.size() && next_quantile < max_bins; ++i) {
        if (through[i] * max_bins >= next_quantile * rows_) {
          cuts.push_back(midpoint(distinct[i], distinct[i + 1]));
          while (next_quantile < max_bins && through[i] * max_bins >= next_quantile * rows_) {
            ++next_quantile;
          }
        }
      }
    }

    auto& bins = bins_[f];
    bins.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      bins[i] = static_cast<std::uint16_t>(std::upper_bound(cuts.begin(), cuts.end(), column[i]) -
                                           cuts.begin());
    }
  }
}

}  // namespace crosslink::ml
