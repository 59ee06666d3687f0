#include "crosslink/user.hpp"

namespace crosslink {

std::string_view to_string(LinkingOption option) {
  switch (option) {
    case LinkingOption::Neither: return "neither";
    case LinkingOption::TWOnly: return "tw_only";
    case LinkingOption::FBOnly: return "fb_only";
    case LinkingOption::Both: return "both";
  }
  return "neither";
}

std::optional<LinkingOption> parse_linking_option(std::string_view text) {
  for (auto option : kLinkingOptions) {
    if (to_string(option) == text) return option;
  }
  return std::nullopt;
}

}  // namespace crosslink
