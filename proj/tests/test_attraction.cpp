#include <doctest.h>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "crosslink/attraction.hpp"
#include "crosslink/error.hpp"
#include "crosslink/rng.hpp"

using namespace crosslink;
using namespace crosslink::ml;

namespace {

/// A fitted logistic model that scores on followers alone:
/// score = sigmoid(w * (log1p(followers) - c)).
TrainedModel follower_model(double center) {
  TrainedModel m;
  m.algorithm = Algorithm::LogisticRegression;
  m.params = default_params(Algorithm::LogisticRegression);
  LogisticState s;
  s.scale.fill(1.0);
  s.center[1] = center;
  s.weights[1] = 1.0;
  m.state = s;
  return m;
}

/// followers value whose score under follower_model(center) is p.
std::uint64_t followers_for(double p, double center) {
  return static_cast<std::uint64_t>(std::llround(std::expm1(center + std::log(p / (1 - p)))));
}

Friend make_friend(std::string id, std::uint64_t followers) {
  Friend f;
  f.friend_id = std::move(id);
  f.features.followers = followers;
  return f;
}

std::vector<std::string> ids(const RecommendationList& list) {
  std::vector<std::string> out;
  for (const auto& e : list.entries) out.push_back(e.friend_id);
  return out;
}

}  // namespace

TEST_CASE("High friends lead, then score") {
  const double c = 8.0;
  const auto m = follower_model(c);
  std::vector<Friend> friends{make_friend("f1", followers_for(0.9, c)), make_friend("f2", followers_for(0.3, c)),
                              make_friend("f3", followers_for(0.7, c))};
  auto list = recommend("u", friends, m);
  CHECK(ids(list) == std::vector<std::string>{"f1", "f3", "f2"});
  CHECK(list.entries[0].score == doctest::Approx(0.9).epsilon(1e-3));
  CHECK(list.entries[0].predicted == InfluenceLabel::High);
  CHECK(list.entries[2].predicted == InfluenceLabel::Low);
  CHECK(list.for_user == "u");
  CHECK(list.model_ref == model_ref(m));
}

TEST_CASE("all-Low friends are ordered by score, ties by id") {
  const auto m = follower_model(20.0);
  std::vector<Friend> friends{make_friend("b", 10), make_friend("a", 10), make_friend("c", 1000),
                              make_friend("d", 0)};
  auto list = recommend("u", friends, m);
  CHECK(ids(list) == std::vector<std::string>{"c", "a", "b", "d"});
  for (const auto& e : list.entries) CHECK(e.predicted == InfluenceLabel::Low);
}

TEST_CASE("output is invariant under input permutation") {
  const auto m = follower_model(6.0);
  Rng rng(3);
  std::vector<Friend> friends;
  for (int i = 0; i < 60; ++i) friends.push_back(make_friend(fmt::format("f{:02}", i), rng.below(8) * 100));
  const auto base = recommend("u", friends, m);
  for (int t = 0; t < 20; ++t) {
    rng.shuffle(std::span(friends));
    CHECK(recommend("u", friends, m).entries == base.entries);
  }
  for (std::size_t i = 1; i < base.entries.size(); ++i) {
    const auto& a = base.entries[i - 1];
    const auto& b = base.entries[i];
    const bool ordered = a.predicted != b.predicted ? a.predicted == InfluenceLabel::High
                                                    : (a.score != b.score ? a.score > b.score : a.friend_id < b.friend_id);
    CHECK(ordered);
  }
}

TEST_CASE("truncation") {
  const auto m = follower_model(6.0);
  std::vector<Friend> friends;
  for (int i = 0; i < 12; ++i) friends.push_back(make_friend(fmt::format("f{}", i), static_cast<std::uint64_t>(i * i * 30)));
  const auto full = recommend("u", friends, m);
  CHECK(recommend("u", friends, m, friends.size()).entries == full.entries);
  CHECK(recommend("u", friends, m, 100).entries == full.entries);
  CHECK(recommend("u", friends, m, 0).entries.empty());
  const auto top3 = recommend("u", friends, m, 3);
  CHECK(top3.entries == std::vector<Recommendation>(full.entries.begin(), full.entries.begin() + 3));
  // Fewer High friends than slots: the rest are filled with the best Low ones.
  std::size_t highs = 0;
  for (const auto& e : full.entries) highs += e.predicted == InfluenceLabel::High;
  REQUIRE(highs < 10);
  const auto top10 = recommend("u", friends, m, 10);
  CHECK(top10.entries.size() == 10);
  CHECK(top10.entries[highs].predicted == InfluenceLabel::Low);
}

TEST_CASE("empty and duplicate inputs") {
  const auto m = follower_model(6.0);
  CHECK(recommend("u", std::vector<Friend>{}, m).entries.empty());
  std::vector<Friend> dup{make_friend("x", 1), make_friend("x", 2)};
  CHECK_THROWS_AS(recommend("u", dup, m), DataError);
}

TEST_CASE("request and response JSON") {
  const auto req = recommend_request_from_json(
      R"({"for_user": "u9", "friends": [{"friend_id": "a", "features": {"followings": 1, "followers": 2,
      "tweets": 3, "likes": 4, "lists": 5, "bio": 1}}]})");
  CHECK(req.for_user == "u9");
  REQUIRE(req.friends.size() == 1);
  CHECK(req.friends[0].features == FeatureVector{1, 2, 3, 4, 5, 1});
  CHECK_THROWS_AS(recommend_request_from_json(R"({"friends": []})"), DataError);
  CHECK_THROWS_AS(recommend_request_from_json(R"({"for_user": "u", "friends": [{"friend_id": "a"}]})"), DataError);
  const auto out = nlohmann::json::parse(recommendation_to_json(recommend(req.for_user, req.friends, follower_model(6.0))));
  CHECK(out["for_user"] == "u9");
  CHECK(out["entries"][0]["friend_id"] == "a");
  CHECK(out["entries"][0]["predicted"] == "low");
}
