#include "crosslink/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "crosslink/error.hpp"

namespace crosslink {
namespace {

using nlohmann::json;

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read '{}'", path.string()));
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::optional<std::uint64_t> count_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) return std::nullopt;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  const auto value = it->get<std::int64_t>();
  if (value < 0) return std::nullopt;
  return static_cast<std::uint64_t>(value);
}

std::optional<UserRecord> parse_user_line(const std::string& line) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!obj.is_object()) return std::nullopt;

  auto id = obj.find("user_id");
  auto month = obj.find("registered_at");
  auto option = obj.find("linking_option");
  if (id == obj.end() || !id->is_string() || month == obj.end() || !month->is_string() ||
      option == obj.end() || !option->is_string()) {
    return std::nullopt;
  }

  UserRecord user;
  user.user_id = id->get<std::string>();
  if (user.user_id.empty()) return std::nullopt;
  auto registered = YearMonth::parse(month->get<std::string>());
  auto linking = parse_linking_option(option->get<std::string>());
  if (!registered || !linking) return std::nullopt;
  user.registered_at = *registered;
  user.linking_option = *linking;

  auto twitter = obj.find("twitter");
  const bool has_profile = twitter != obj.end() && !twitter->is_null();
  if (has_profile != has_twitter(user.linking_option)) return std::nullopt;
  if (has_profile) {
    user.twitter_features = feature_vector_from_json(*twitter);
    if (!user.twitter_features) return std::nullopt;
  }
  return user;
}

}  // namespace

UserIngest ingest_users(std::istream& in) {
  UserIngest result;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; })) {
      continue;
    }
    auto user = parse_user_line(line);
    if (!user) {
      ++result.skipped;
      continue;
    }
    if (!seen.insert(user->user_id).second) {
      throw DataError(fmt::format("duplicate user_id '{}'", user->user_id));
    }
    result.users.push_back(std::move(*user));
  }
  return result;
}

UserIngest ingest_users(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return ingest_users(in);
}

EdgeIngest ingest_edges(std::istream& in) {
  EdgeIngest result;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      ++result.skipped;
      continue;
    }
    result.edges.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return result;
}

EdgeIngest ingest_edges(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return ingest_edges(in);
}

std::optional<FeatureVector> feature_vector_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) return std::nullopt;
  FeatureVector f;
  auto followings = count_field(obj, "followings");
  auto followers = count_field(obj, "followers");
  auto tweets = count_field(obj, "tweets");
  auto likes = count_field(obj, "likes");
  auto lists = count_field(obj, "lists");
  if (!followings || !followers || !tweets || !likes || !lists) return std::nullopt;
  f.followings = *followings;
  f.followers = *followers;
  f.tweets = *tweets;
  f.likes = *likes;
  f.lists = *lists;

  if (auto bio = obj.find("bio"); bio != obj.end() && !bio->is_null()) {
    if (bio->is_boolean()) {
      f.bio = bio->get<bool>() ? 1 : 0;
    } else if (bio->is_number_integer() && (*bio == 0 || *bio == 1)) {
      f.bio = bio->get<std::uint8_t>();
    } else {
      return std::nullopt;
    }
  }
  return f;
}

nlohmann::ordered_json feature_vector_to_json(const FeatureVector& f) {
  return {{"followings", f.followings}, {"followers", f.followers}, {"tweets", f.tweets},
          {"likes", f.likes},           {"lists", f.lists},         {"bio", f.bio}};
}

std::string user_to_json_line(const UserRecord& user) {
  nlohmann::ordered_json obj;
  obj["user_id"] = user.user_id;
  obj["registered_at"] = user.registered_at.to_string();
  obj["linking_option"] = std::string(to_string(user.linking_option));
  if (user.twitter_features) {
    obj["twitter"] = feature_vector_to_json(*user.twitter_features);
  }
  return obj.dump();
}

std::string users_to_jsonl(std::span<const UserRecord> users) {
  std::string out;
  for (const auto& user : users) {
    out += user_to_json_line(user);
    out += '\n';
  }
  return out;
}

std::string edges_to_tsv(std::span<const IdEdge> edges) {
  std::string out;
  for (const auto& [src, dst] : edges) {
    out += src;
    out += '\t';
    out += dst;
    out += '\n';
  }
  return out;
}

GraphBuild load_graph(const std::filesystem::path& users_path,
                      const std::filesystem::path& edges_path) {
  auto users = ingest_users(users_path);
  auto edges = ingest_edges(edges_path);
  return build_graph(std::move(users.users), edges.edges);
}

}  // namespace crosslink
