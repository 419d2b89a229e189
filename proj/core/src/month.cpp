#include "bubbles/month.hpp"

#include <charconv>
#include <cstdio>

#include "bubbles/error.hpp"

namespace bubbles {

namespace {

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  if (text.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

MonthIndex::MonthIndex(int year, int month) : year_(year), month_(month) {
  if (month < 1 || month > 12) {
    throw Error(ErrorCode::bad_date, "month " + std::to_string(month) + " outside 1..12");
  }
}

MonthIndex MonthIndex::from_ordinal(long ordinal) {
  long year = ordinal / 12;
  long month = ordinal % 12;
  if (month < 0) {
    month += 12;
    --year;
  }
  return MonthIndex(static_cast<int>(year), static_cast<int>(month) + 1);
}

std::string MonthIndex::to_string() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04dM%02d", year_, month_);
  return buf;
}

std::optional<MonthIndex> MonthIndex::try_parse(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  auto sep = text.find_first_of("Mm-");
  if (sep != 4) return std::nullopt;
  auto year = parse_int(text.substr(0, 4));
  auto tail = text.substr(5);
  if (tail.empty() || tail.size() > 2) return std::nullopt;
  if (text[sep] == '-' && tail.size() != 2) return std::nullopt;
  auto month = parse_int(tail);
  if (!year || !month || *month < 1 || *month > 12) return std::nullopt;
  return MonthIndex(*year, *month);
}

MonthIndex MonthIndex::parse(std::string_view text) {
  auto parsed = try_parse(text);
  if (!parsed) throw Error(ErrorCode::bad_date, "cannot parse date '" + std::string(text) + "'");
  return *parsed;
}

}  // namespace bubbles
