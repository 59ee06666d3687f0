#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "crosslink/ml/dataset.hpp"

namespace crosslink::ml {

/// Equal-frequency discretization: a value's bin is floor(r * bins / n)
/// where r is the 0-based position of its first occurrence in sorted order.
/// Bins depend only on the ordering of the values, and equal values always
/// share a bin.
std::vector<std::uint32_t> equal_frequency_bins(std::span<const double> values, std::size_t bins);

/// Pearson statistic of a (bin x class) contingency table; empty rows skipped.
double chi_square_statistic(std::span<const std::uint32_t> bins,
                            std::span<const InfluenceLabel> labels);

struct FeatureChiSquare {
  std::string_view feature;
  std::size_t index = 0;
  double chi2 = 0.0;
};

/// All six features, descending by chi2 (ties keep feature order). Bio is
/// used as-is; numeric features are discretized into at most `bins` bins.
/// Throws DataError on an empty or single-class dataset.
std::vector<FeatureChiSquare> chi_square_rank(const LabeledDataset& ds, std::size_t bins = 10);

}  // namespace crosslink::ml
