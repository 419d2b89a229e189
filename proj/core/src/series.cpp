#include "bubbles/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "bubbles/csv.hpp"
#include "bubbles/error.hpp"

namespace bubbles {

namespace {

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

Series::Series(MonthIndex start, std::vector<double> values, std::string label)
    : start_(start), values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() < 2) {
    throw Error(ErrorCode::series_too_short,
                "series '" + label_ + "' has " + std::to_string(values_.size()) +
                    " observation(s); at least 2 required");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::non_numeric_value,
                  "non-finite value at " + date_at(i).to_string() + " in '" + label_ + "'");
    }
  }
}

std::optional<std::size_t> Series::index_of(MonthIndex date) const {
  long offset = date - start_;
  if (offset < 0 || offset >= static_cast<long>(values_.size())) return std::nullopt;
  return static_cast<std::size_t>(offset);
}

Series Series::slice(MonthIndex from, MonthIndex to) const {
  if (from > to || !covers(from, to)) {
    throw Error(ErrorCode::range_mismatch, "slice " + from.to_string() + ".." + to.to_string() +
                                               " outside " + start_.to_string() + ".." +
                                               end().to_string());
  }
  auto first = values_.begin() + (from - start_);
  auto last = values_.begin() + (to - start_) + 1;
  return Series(from, std::vector<double>(first, last), label_);
}

Series Series::relabeled(std::string label) const {
  Series copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

Series ingest_csv(std::istream& in, std::string_view date_column, std::string_view value_column,
                  std::string_view source) {
  const std::string where(source);
  CsvTable table;
  try {
    table = read_csv(in);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.detail());
  }
  auto date_idx = table.column(date_column);
  auto value_idx = table.column(value_column);
  if (!date_idx) {
    throw Error(ErrorCode::missing_column, where + ": no column '" + std::string(date_column) + "'");
  }
  if (!value_idx) {
    throw Error(ErrorCode::missing_column, where + ": no column '" + std::string(value_column) + "'");
  }
  if (table.rows.empty()) throw Error(ErrorCode::empty_input, where + ": no data rows");

  std::vector<std::pair<MonthIndex, double>> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    const std::string line = where + ":" + std::to_string(table.lines[r]);
    std::string_view date_cell = *date_idx < cells.size() ? std::string_view(cells[*date_idx]) : "";
    std::string_view value_cell =
        *value_idx < cells.size() ? std::string_view(cells[*value_idx]) : "";
    auto date = MonthIndex::try_parse(date_cell);
    if (!date) {
      throw Error(ErrorCode::bad_date, line + ": cannot parse date '" + std::string(date_cell) + "'");
    }
    auto value = parse_double(value_cell);
    if (!value) {
      throw Error(ErrorCode::non_numeric_value,
                  line + ": value '" + std::string(value_cell) + "' at " + date->to_string());
    }
    rows.emplace_back(*date, *value);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      long step = rows[i].first - rows[i - 1].first;
      if (step == 0) {
        throw Error(ErrorCode::duplicate_date, where + ": " + rows[i].first.to_string());
      }
      if (step > 1) {
        throw Error(ErrorCode::missing_month, where + ": " + (rows[i - 1].first + 1).to_string());
      }
    }
    values.push_back(rows[i].second);
  }
  return Series(rows.front().first, std::move(values), std::string(value_column));
}

Series ingest_csv(const std::filesystem::path& path, std::string_view date_column,
                  std::string_view value_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return ingest_csv(in, date_column, value_column, path.string());
}

Series log_series(const Series& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      throw Error(ErrorCode::non_positive_value,
                  x.date_at(i).to_string() + " in '" + x.label() + "'");
    }
    out[i] = std::log(x[i]);
  }
  return Series(x.start(), std::move(out), x.label());
}

void write_csv(const Series& x, std::ostream& out) {
  out << "date,value\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << x.date_at(i).to_string() << ',' << format_double(x[i]) << '\n';
  }
}

void write_csv(const Series& x, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  write_csv(x, out);
}

nlohmann::json to_json(const Series& x) {
  return {{"label", x.label()},
          {"start", x.start().to_string()},
          {"values", std::vector<double>(x.values().begin(), x.values().end())}};
}

Series series_from_json(const nlohmann::json& j) {
  try {
    return Series(MonthIndex::parse(j.at("start").get<std::string>()),
                  j.at("values").get<std::vector<double>>(), j.value("label", std::string{}));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, std::string("series JSON: ") + e.what());
  }
}

}  // namespace bubbles
