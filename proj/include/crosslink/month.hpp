#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace crosslink {

/// Calendar month, the finest time granularity the crawl format carries.
class YearMonth {
 public:
  constexpr YearMonth() = default;
  constexpr YearMonth(int year, int month) : ordinal_(year * 12 + (month - 1)) {}

  /// Parses "YYYY-MM"; nullopt on anything else (including month 00 or 13).
  static std::optional<YearMonth> parse(std::string_view text);
  /// Like parse() but throws UsageError naming the bad text.
  static YearMonth parse_or_throw(std::string_view text);

  constexpr int year() const { return ordinal_ / 12; }
  constexpr int month() const { return ordinal_ % 12 + 1; }
  constexpr int ordinal() const { return ordinal_; }

  constexpr YearMonth next() const { return from_ordinal(ordinal_ + 1); }
  constexpr static YearMonth from_ordinal(int ordinal) {
    YearMonth m;
    m.ordinal_ = ordinal;
    return m;
  }

  std::string to_string() const;

  constexpr auto operator<=>(const YearMonth&) const = default;

 private:
  int ordinal_ = 0;
};

/// Number of months in the closed range [from, to]; 0 when from > to.
constexpr int months_between(YearMonth from, YearMonth to) {
  return to < from ? 0 : to.ordinal() - from.ordinal() + 1;
}

}  // namespace crosslink
