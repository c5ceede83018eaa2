#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace crisisdyn {

/// Calendar date. Comparison is lexicographic (y, m, d), so ordering matches
/// chronological order for valid dates.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;
};

bool is_valid_date(const Date& d);

/// Parses strict ISO-8601 `YYYY-MM-DD`. Returns nullopt on any deviation.
std::optional<Date> try_parse_date(std::string_view text);

/// Like try_parse_date but throws DataError naming the offending text.
Date parse_date(std::string_view text);

std::string to_string(const Date& d);

/// The following calendar day (no weekend/holiday logic).
Date next_day(const Date& d);

}  // namespace crisisdyn
