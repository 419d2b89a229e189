#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bubbles/month.hpp"
#include "bubbles/montecarlo.hpp"
#include "bubbles/recursive.hpp"
#include "bubbles/series.hpp"

namespace bubbles {

struct Episode {
  MonthIndex start;
  MonthIndex end;
  std::size_t first = 0;   ///< 1-based observation of `start`
  std::size_t last = 0;    ///< 1-based observation of `end`
  double peak = 0.0;       ///< largest BSADF inside the episode
  bool ongoing = false;    ///< still open at the last observation

  std::size_t length() const { return last - first + 1; }
  friend bool operator==(const Episode&, const Episode&) = default;
};

struct EpisodeSet {
  std::vector<Episode> episodes;
  std::size_t min_duration = 1;
  double cv_level = 0.95;

  std::size_t total_months() const;
};

/// floor(ln T), at least 1: the log(T) minimum duration.
std::size_t log_t_duration(std::size_t T);

/// Scans BSADF against its critical sequence. An episode opens at the first
/// point with bsadf > cv and closes before the first later point with
/// bsadf < cv; ties keep the current state. Runs shorter than min_duration
/// are dropped; a run reaching the end is kept and flagged ongoing.
///
/// bsadf[i] belongs to observation first_obs + i (1-based) of a series that
/// starts at series_start.
EpisodeSet stamp_episodes(std::span<const double> bsadf, std::span<const double> cv,
                          std::size_t first_obs, MonthIndex series_start, std::size_t min_duration,
                          double cv_level = 0.95);

/// Stamps a test result against the table's sequence at `level`. Throws
/// Error(cache_mismatch) when the table was built for another T or w0.
EpisodeSet stamp_episodes(const RecursiveResult& result, const CriticalValueTable& table,
                          MonthIndex series_start, std::size_t min_duration, double level);

/// R_t over [from, to]: 1 inside an episode, 0 elsewhere.
struct BubbleIndicator {
  MonthIndex start;
  std::vector<int> r;

  MonthIndex end() const { return start + static_cast<long>(r.size()) - 1; }
  Series to_series(std::string label = "R") const;
};

/// Throws Error(episode_out_of_range) if an episode leaves [from, to].
BubbleIndicator to_indicator(const EpisodeSet& episodes, MonthIndex from, MonthIndex to);

/// Maximal runs of ones as episodes (peak left at 0, never ongoing).
std::vector<Episode> runs_of_ones(const BubbleIndicator& indicator, MonthIndex series_start);

/// Reads an indicator back from a date/value series of zeros and ones.
BubbleIndicator indicator_from_series(const Series& x);

/// "1990M04-1993M09, 2015M09", or "NEB" when empty.
std::string format_episodes(const EpisodeSet& set);
/// start,end,length,peak_bsadf,ongoing
void write_episode_csv(const EpisodeSet& set, std::ostream& out);
nlohmann::json to_json(const EpisodeSet& set);

/// BSADF line, critical sequence, and shaded episodes as a standalone SVG.
void write_bsadf_svg(const RecursiveResult& result, std::span<const double> cv,
                     const EpisodeSet& set, MonthIndex series_start, const std::string& title,
                     std::ostream& out);

}  // namespace bubbles
