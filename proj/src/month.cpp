#include "crosslink/month.hpp"

#include <charconv>

#include <fmt/format.h>

#include "crosslink/error.hpp"

namespace crosslink {

std::optional<YearMonth> YearMonth::parse(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  for (std::size_t i : {0, 1, 2, 3, 5, 6}) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
  }
  int year = 0;
  int month = 0;
  std::from_chars(text.data(), text.data() + 4, year);
  std::from_chars(text.data() + 5, text.data() + 7, month);
  if (month < 1 || month > 12) return std::nullopt;
  return YearMonth(year, month);
}

YearMonth YearMonth::parse_or_throw(std::string_view text) {
  auto parsed = parse(text);
  if (!parsed) throw UsageError(fmt::format("invalid month '{}' (expected YYYY-MM)", text));
  return *parsed;
}

std::string YearMonth::to_string() const { return fmt::format("{:04d}-{:02d}", year(), month()); }

}  // namespace crosslink
