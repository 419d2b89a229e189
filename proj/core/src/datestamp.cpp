#include "bubbles/datestamp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "bubbles/csv.hpp"

namespace bubbles {

std::size_t EpisodeSet::total_months() const {
  std::size_t total = 0;
  for (const auto& e : episodes) total += e.length();
  return total;
}

std::size_t log_t_duration(std::size_t T) {
  const double d = std::floor(std::log(static_cast<double>(std::max<std::size_t>(T, 1))));
  return std::max<std::size_t>(1, static_cast<std::size_t>(d));
}

EpisodeSet stamp_episodes(std::span<const double> bsadf, std::span<const double> cv,
                          std::size_t first_obs, MonthIndex series_start, std::size_t min_duration,
                          double cv_level) {
  if (bsadf.size() != cv.size()) {
    throw Error(ErrorCode::length_mismatch, "BSADF has " + std::to_string(bsadf.size()) +
                                                " points but critical sequence has " +
                                                std::to_string(cv.size()));
  }
  if (min_duration < 1) throw Error(ErrorCode::invalid_config, "min_duration must be at least 1");
  if (first_obs < 1) throw Error(ErrorCode::invalid_config, "observation numbers are 1-based");

  EpisodeSet set;
  set.min_duration = min_duration;
  set.cv_level = cv_level;

  auto close = [&](std::size_t open_at, std::size_t last_in, bool ongoing) {
    if (last_in - open_at + 1 < min_duration) return;
    Episode e;
    e.first = first_obs + open_at;
    e.last = first_obs + last_in;
    e.start = series_start + static_cast<long>(e.first - 1);
    e.end = series_start + static_cast<long>(e.last - 1);
    e.peak = *std::max_element(bsadf.begin() + static_cast<long>(open_at),
                               bsadf.begin() + static_cast<long>(last_in) + 1);
    e.ongoing = ongoing;
    set.episodes.push_back(e);
  };

  bool open = false;
  std::size_t open_at = 0;
  for (std::size_t i = 0; i < bsadf.size(); ++i) {
    if (!open && bsadf[i] > cv[i]) {
      open = true;
      open_at = i;
    } else if (open && bsadf[i] < cv[i]) {
      open = false;
      close(open_at, i - 1, false);
    }
  }
  if (open) close(open_at, bsadf.size() - 1, true);
  return set;
}

EpisodeSet stamp_episodes(const RecursiveResult& result, const CriticalValueTable& table,
                          MonthIndex series_start, std::size_t min_duration, double level) {
  if (table.config.T != result.T || table.w0 != result.w0 || !(table.config.spec == result.spec)) {
    throw Error(ErrorCode::cache_mismatch,
                "critical values for T=" + std::to_string(table.config.T) +
                    ", w0=" + std::to_string(table.w0) + ", lags=" + table.config.spec.to_string() +
                    " cannot stamp a test with T=" + std::to_string(result.T) +
                    ", w0=" + std::to_string(result.w0) + ", lags=" + result.spec.to_string());
  }
  const auto& cv = table.bsadf_cv[table.quantile_slot(level)];
  const auto values = result.bsadf_values();
  return stamp_episodes(values, cv, result.w0, series_start, min_duration, level);
}

Series BubbleIndicator::to_series(std::string label) const {
  std::vector<double> v(r.begin(), r.end());
  return Series(start, std::move(v), std::move(label));
}

BubbleIndicator to_indicator(const EpisodeSet& episodes, MonthIndex from, MonthIndex to) {
  if (to < from) throw Error(ErrorCode::invalid_config, "indicator range is empty");
  BubbleIndicator ind{from, std::vector<int>(static_cast<std::size_t>(to - from + 1), 0)};
  for (const auto& e : episodes.episodes) {
    if (e.start < from || e.end > to || e.end < e.start) {
      throw Error(ErrorCode::episode_out_of_range,
                  e.start.to_string() + "-" + e.end.to_string() + " outside " + from.to_string() +
                      ".." + to.to_string());
    }
    for (MonthIndex m = e.start; m <= e.end; ++m) ind.r[static_cast<std::size_t>(m - from)] = 1;
  }
  return ind;
}

std::vector<Episode> runs_of_ones(const BubbleIndicator& indicator, MonthIndex series_start) {
  std::vector<Episode> out;
  const long offset = indicator.start - series_start;
  std::size_t i = 0;
  while (i < indicator.r.size()) {
    if (indicator.r[i] == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < indicator.r.size() && indicator.r[j + 1] != 0) ++j;
    Episode e;
    e.start = indicator.start + static_cast<long>(i);
    e.end = indicator.start + static_cast<long>(j);
    e.first = static_cast<std::size_t>(offset + static_cast<long>(i)) + 1;
    e.last = static_cast<std::size_t>(offset + static_cast<long>(j)) + 1;
    out.push_back(e);
    i = j + 1;
  }
  return out;
}

BubbleIndicator indicator_from_series(const Series& x) {
  BubbleIndicator ind{x.start(), {}};
  ind.r.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0 && x[i] != 1.0) {
      throw Error(ErrorCode::non_numeric_value,
                  "indicator value " + format_double(x[i]) + " at " + x.date_at(i).to_string() +
                      " is not 0 or 1");
    }
    ind.r.push_back(x[i] == 1.0 ? 1 : 0);
  }
  return ind;
}

std::string format_episodes(const EpisodeSet& set) {
  if (set.episodes.empty()) return "NEB";
  std::string out;
  for (const auto& e : set.episodes) {
    if (!out.empty()) out += ", ";
    out += e.start.to_string();
    if (e.end != e.start) out += "-" + e.end.to_string();
  }
  return out;
}

void write_episode_csv(const EpisodeSet& set, std::ostream& out) {
  out << "start,end,length,peak_bsadf,ongoing\n";
  for (const auto& e : set.episodes) {
    out << e.start.to_string() << ',' << e.end.to_string() << ',' << e.length() << ','
        << format_double(e.peak) << ',' << (e.ongoing ? "true" : "false") << '\n';
  }
}

nlohmann::json to_json(const EpisodeSet& set) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : set.episodes) {
    list.push_back({{"start", e.start.to_string()},
                    {"end", e.end.to_string()},
                    {"first", e.first},
                    {"last", e.last},
                    {"length", e.length()},
                    {"peak_bsadf", e.peak},
                    {"ongoing", e.ongoing}});
  }
  return {{"min_duration", set.min_duration}, {"cv_level", set.cv_level}, {"episodes", list}};
}

void write_bsadf_svg(const RecursiveResult& result, std::span<const double> cv,
                     const EpisodeSet& set, MonthIndex series_start, const std::string& title,
                     std::ostream& out) {
  constexpr double width = 900.0, height = 360.0;
  constexpr double left = 60.0, right = 20.0, top = 40.0, bottom = 40.0;
  const auto values = result.bsadf_values();
  if (values.empty()) return;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  for (double c : cv) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  if (hi - lo < 1e-9) hi = lo + 1.0;
  const double first = static_cast<double>(result.w0);
  const double span = std::max(1.0, static_cast<double>(result.T) - first);
  auto px = [&](double obs) { return left + (obs - first) / span * (width - left - right); };
  auto py = [&](double v) { return top + (hi - v) / (hi - lo) * (height - top - bottom); };

  char buf[256];
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out << buf;
  };
  line("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
       "viewBox=\"0 0 %.0f %.0f\">\n",
       width, height, width, height);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
  for (const auto& e : set.episodes) {
    const double x0 = px(static_cast<double>(e.first) - 0.5);
    const double x1 = px(static_cast<double>(e.last) + 0.5);
    line("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"#f4c7c3\"/>\n", x0, top,
         std::max(1.0, x1 - x0), height - top - bottom);
  }
  line("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", left,
       height - bottom, width - right, height - bottom);
  line("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", left, top, left,
       height - bottom);
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    line("<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"10\" "
         "text-anchor=\"end\">%.2f</text>\n",
         left - 4.0, py(v) + 3.0, v);
  }
  for (int k = 0; k <= 5; ++k) {
    const double obs = first + span * k / 5.0;
    const auto label = (series_start + static_cast<long>(std::lround(obs)) - 1).to_string();
    line("<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"10\" "
         "text-anchor=\"middle\">%s</text>\n",
         px(obs), height - bottom + 14.0, label.c_str());
  }
  auto polyline = [&](std::span<const double> ys, const char* colour, const char* dash) {
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\"" << dash
        << " points=\"";
    for (std::size_t i = 0; i < ys.size(); ++i) {
      line("%s%.2f,%.2f", i == 0 ? "" : " ", px(first + static_cast<double>(i)), py(ys[i]));
    }
    out << "\"/>\n";
  };
  polyline(values, "#1f4e79", "");
  if (cv.size() == values.size()) polyline(cv, "#c00000", " stroke-dasharray=\"4 3\"");
  out << "</svg>\n";
}

}  // namespace bubbles
