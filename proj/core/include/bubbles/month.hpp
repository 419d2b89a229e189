#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace bubbles {

/// Calendar month used as the index of monthly series.
///
/// Formats as "1997M08"; parses "1997M08", "1997M8" and "1997-08".
class MonthIndex {
 public:
  constexpr MonthIndex() = default;
  /// Throws Error(bad_date) unless 1 <= month <= 12.
  MonthIndex(int year, int month);

  constexpr int year() const noexcept { return year_; }
  constexpr int month() const noexcept { return month_; }

  /// Months since year 0, January. Successive months differ by exactly one.
  constexpr long ordinal() const noexcept { return static_cast<long>(year_) * 12 + (month_ - 1); }
  static MonthIndex from_ordinal(long ordinal);

  MonthIndex operator+(long months) const { return from_ordinal(ordinal() + months); }
  MonthIndex operator-(long months) const { return from_ordinal(ordinal() - months); }
  long operator-(const MonthIndex& other) const noexcept { return ordinal() - other.ordinal(); }
  MonthIndex& operator++() { return *this = *this + 1; }

  friend constexpr auto operator<=>(const MonthIndex&, const MonthIndex&) = default;

  std::string to_string() const;
  static std::optional<MonthIndex> try_parse(std::string_view text);
  /// Throws Error(bad_date) on malformed input.
  static MonthIndex parse(std::string_view text);

 private:
  int year_ = 1970;
  int month_ = 1;
};

}  // namespace bubbles
