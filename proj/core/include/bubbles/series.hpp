#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bubbles/month.hpp"

namespace bubbles {

/// Gap-free monthly series of finite values. Immutable after construction.
class Series {
 public:
  /// Throws Error(series_too_short) for fewer than two values and
  /// Error(non_numeric_value) for non-finite values.
  Series(MonthIndex start, std::vector<double> values, std::string label = {});

  MonthIndex start() const noexcept { return start_; }
  MonthIndex end() const { return start_ + static_cast<long>(values_.size()) - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::string& label() const noexcept { return label_; }

  MonthIndex date_at(std::size_t i) const { return start_ + static_cast<long>(i); }
  std::optional<std::size_t> index_of(MonthIndex date) const;
  bool covers(MonthIndex from, MonthIndex to) const { return from >= start_ && to <= end(); }

  /// Inclusive sub-range; throws Error(range_mismatch) when outside.
  Series slice(MonthIndex from, MonthIndex to) const;
  Series relabeled(std::string label) const;

  friend bool operator==(const Series&, const Series&) = default;

 private:
  MonthIndex start_;
  std::vector<double> values_;
  std::string label_;
};

/// Reads one value column keyed by a date column ("YYYY-MM" or "YYYYMmm").
/// Rows may arrive in any order; the result is sorted. Duplicates, gaps and
/// non-numeric cells are errors naming the offending date or line.
Series ingest_csv(const std::filesystem::path& path, std::string_view date_column,
                  std::string_view value_column);
Series ingest_csv(std::istream& in, std::string_view date_column, std::string_view value_column,
                  std::string_view source = "<stream>");

/// Element-wise natural log; Error(non_positive_value) names the first bad month.
Series log_series(const Series& x);

/// Writes "date,value" with shortest round-trip decimal formatting.
void write_csv(const Series& x, std::ostream& out);
void write_csv(const Series& x, const std::filesystem::path& path);

nlohmann::json to_json(const Series& x);
Series series_from_json(const nlohmann::json& j);

}  // namespace bubbles
