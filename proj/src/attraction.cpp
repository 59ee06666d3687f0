#include "crosslink/attraction.hpp"

#include <algorithm>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "crosslink/error.hpp"
#include "crosslink/ingest.hpp"

namespace crosslink {

RecommendationList recommend(std::string_view for_user, std::span<const Friend> friends,
                             const ml::TrainedModel& model, std::optional<std::size_t> k) {
  RecommendationList out{std::string(for_user), {}, ml::model_ref(model)};
  std::unordered_set<std::string_view> seen;
  for (const auto& f : friends) {
    if (!seen.insert(f.friend_id).second) {
      throw DataError(fmt::format("duplicate friend_id '{}'", f.friend_id));
    }
  }
  if (k == std::size_t{0}) return out;

  out.entries.reserve(friends.size());
  for (const auto& f : friends) {
    const auto p = ml::predict(model, f.features);
    out.entries.push_back({f.friend_id, p.score, p.label});
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.predicted != b.predicted) return a.predicted == InfluenceLabel::High;
    if (a.score != b.score) return a.score > b.score;
    return a.friend_id < b.friend_id;
  });
  if (k && *k < out.entries.size()) out.entries.resize(*k);
  return out;
}

RecommendRequest recommend_request_from_json(std::string_view text) {
  using nlohmann::json;
  const json doc = json::parse(text, nullptr, false);
  if (!doc.is_object()) throw DataError("recommend input is not a JSON object");
  RecommendRequest req;
  auto user = doc.find("for_user");
  if (user == doc.end() || !user->is_string()) throw DataError("recommend input lacks a string 'for_user'");
  req.for_user = user->get<std::string>();
  auto friends = doc.find("friends");
  if (friends == doc.end() || !friends->is_array()) throw DataError("recommend input lacks a 'friends' array");
  for (std::size_t i = 0; i < friends->size(); ++i) {
    const auto& entry = (*friends)[i];
    auto id = entry.is_object() ? entry.find("friend_id") : entry.end();
    if (!entry.is_object() || id == entry.end() || !id->is_string()) {
      throw DataError(fmt::format("friends[{}]: missing string 'friend_id'", i));
    }
    auto features = entry.find("features");
    std::optional<FeatureVector> f;
    if (features != entry.end()) f = feature_vector_from_json(*features);
    if (!f) throw DataError(fmt::format("friends[{}]: missing or malformed 'features'", i));
    req.friends.push_back({id->get<std::string>(), *f});
  }
  return req;
}

std::string recommendation_to_json(const RecommendationList& list) {
  nlohmann::ordered_json doc;
  doc["for_user"] = list.for_user;
  doc["model_ref"] = list.model_ref;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : list.entries) {
    doc["entries"].push_back(
        {{"friend_id", e.friend_id}, {"score", e.score}, {"predicted", ml::to_string(e.predicted)}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace crosslink
