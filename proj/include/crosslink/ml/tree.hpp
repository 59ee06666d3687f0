#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crosslink/ml/dataset.hpp"

namespace crosslink::ml {

/// Binary decision tree stored as flat arrays. A node is a leaf when
/// feature < 0; otherwise rows with x[feature] < threshold go left.
struct Tree {
  struct Node {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;

    friend bool operator==(const Node&, const Node&) = default;
  };

  std::vector<Node> nodes;

  double evaluate(const Features& x) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
      const auto& n = nodes[i];
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                                     : n.right);
    }
    return nodes[i].value;
  }

  std::size_t depth() const;

  friend bool operator==(const Tree&, const Tree&) = default;
};

/// Training matrix quantized per feature into at most `max_bins` bins.
/// Cut points are midpoints between adjacent distinct values (all of them
/// when there are few distinct values, equal-frequency picks otherwise), so
/// bin(x) = number of cuts <= x and "bin <= j" is equivalent to x < cuts[j].
class BinnedMatrix {
 public:
  static constexpr std::size_t kDefaultMaxBins = 256;

  BinnedMatrix(std::span<const Features> rows, std::size_t max_bins = kDefaultMaxBins);

  std::size_t rows() const { return rows_; }
  std::size_t bin_count(std::size_t feature) const { return cuts_[feature].size() + 1; }
  std::uint16_t bin(std::size_t feature, std::size_t row) const { return bins_[feature][row]; }
  double cut(std::size_t feature, std::size_t j) const { return cuts_[feature][j]; }

 private:
  std::size_t rows_ = 0;
  std::array<std::vector<double>, FeatureVector::kSize> cuts_;
  std::array<std::vector<std::uint16_t>, FeatureVector::kSize> bins_;
};

}  // namespace crosslink::ml
