#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "crosslink/month.hpp"

namespace crosslink {

/// Which external accounts a user has bound to their profile.
enum class LinkingOption : std::uint8_t { Neither = 0, TWOnly = 1, FBOnly = 2, Both = 3 };

inline constexpr std::array<LinkingOption, 4> kLinkingOptions = {
    LinkingOption::Neither, LinkingOption::TWOnly, LinkingOption::FBOnly, LinkingOption::Both};

/// Wire spelling: "neither" | "tw_only" | "fb_only" | "both".
std::string_view to_string(LinkingOption option);
std::optional<LinkingOption> parse_linking_option(std::string_view text);

constexpr bool has_twitter(LinkingOption option) {
  return option == LinkingOption::TWOnly || option == LinkingOption::Both;
}

constexpr std::size_t index_of(LinkingOption option) { return static_cast<std::size_t>(option); }

/// Per-option counters indexed by index_of(option).
template <typename T>
using PerOption = std::array<T, 4>;

/// The six linked-account features used for influence prediction.
struct FeatureVector {
  static constexpr std::size_t kSize = 6;
  static constexpr std::array<std::string_view, kSize> kNames = {
      "followings", "followers", "tweets", "likes", "lists", "bio"};
  static constexpr std::size_t kBioIndex = 5;

  std::uint64_t followings = 0;
  std::uint64_t followers = 0;
  std::uint64_t tweets = 0;
  std::uint64_t likes = 0;
  std::uint64_t lists = 0;
  std::uint8_t bio = 0;  // 0 or 1

  std::array<double, kSize> as_array() const {
    return {static_cast<double>(followings), static_cast<double>(followers),
            static_cast<double>(tweets),     static_cast<double>(likes),
            static_cast<double>(lists),      static_cast<double>(bio)};
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// One crawled user.
struct UserRecord {
  std::string user_id;
  YearMonth registered_at;
  LinkingOption linking_option = LinkingOption::Neither;
  /// Present iff linking_option is TWOnly or Both.
  std::optional<FeatureVector> twitter_features;

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

}  // namespace crosslink
