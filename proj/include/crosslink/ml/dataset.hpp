#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "crosslink/graph.hpp"
#include "crosslink/pagerank.hpp"
#include "crosslink/user.hpp"

namespace crosslink::ml {

using Features = std::array<double, FeatureVector::kSize>;

/// Throws DataError("user not Twitter-linked") when the profile is absent.
FeatureVector extract_features(const UserRecord& user);

struct LabeledRow {
  std::string user_id;
  FeatureVector features;
  InfluenceLabel label = InfluenceLabel::Low;

  friend bool operator==(const LabeledRow&, const LabeledRow&) = default;
};

struct LabeledDataset {
  std::vector<LabeledRow> rows;
  std::string provenance;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  std::size_t count(InfluenceLabel label) const;

  std::vector<Features> feature_matrix() const;
  std::vector<InfluenceLabel> labels() const;
  LabeledDataset subset(std::span<const std::size_t> indices, std::string provenance) const;
};

/// Class counts for the train/test split.
struct SplitSizes {
  std::size_t train_high = 8000;
  std::size_t train_low = 8000;
  std::size_t test_high = 2000;
  std::size_t test_low = 2000;

  friend bool operator==(const SplitSizes&, const SplitSizes&) = default;
};

/// Shrinks every count by one common factor so the split fits the eligible
/// users; returns `requested` unchanged when it already fits.
SplitSizes fit_split(const SplitSizes& requested, std::size_t available_high,
                     std::size_t available_low);

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset test;
};

/// Twitter-linked users, labeled by `pr`, sampled without replacement per
/// class. Train and test are disjoint. Throws DataError with the available
/// counts if a class is too small.
DatasetSplit build_dataset(const SocialGraph& g, const PageRankResult& pr, const SplitSizes& sizes,
                           std::uint64_t seed);

/// Every eligible (Twitter-linked) user with its label.
LabeledDataset eligible_users(const SocialGraph& g, const PageRankResult& pr);

/// CSV header: user_id,followings,followers,tweets,likes,lists,bio,label
/// with label "high" | "low".
std::string to_csv(const LabeledDataset& ds);
LabeledDataset dataset_from_csv(std::istream& in, std::string provenance);
LabeledDataset read_dataset(const std::string& path);

std::string_view to_string(InfluenceLabel label);

}  // namespace crosslink::ml
