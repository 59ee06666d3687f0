#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crosslink/ml/model.hpp"

namespace crosslink {

struct Friend {
  std::string friend_id;
  FeatureVector features;
};

struct Recommendation {
  std::string friend_id;
  double score = 0.0;
  InfluenceLabel predicted = InfluenceLabel::Low;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

/// Invite order for one user: predicted-High friends first, then by score
/// descending, then by friend_id. When fewer friends are High than k, the
/// remaining slots go to the highest-scoring Low friends.
struct RecommendationList {
  std::string for_user;
  std::vector<Recommendation> entries;
  std::string model_ref;
};

/// Throws DataError on a repeated friend_id.
RecommendationList recommend(std::string_view for_user, std::span<const Friend> friends,
                             const ml::TrainedModel& model, std::optional<std::size_t> k = std::nullopt);

struct RecommendRequest {
  std::string for_user;
  std::vector<Friend> friends;
};

/// {"for_user": ..., "friends": [{"friend_id": ..., "features": {...}}]}
RecommendRequest recommend_request_from_json(std::string_view text);
std::string recommendation_to_json(const RecommendationList& list);

}  // namespace crosslink
