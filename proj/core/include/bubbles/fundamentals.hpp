#pragma once

#include <string>
#include <vector>

#include "bubbles/month.hpp"
#include "bubbles/series.hpp"

namespace bubbles {

/// Log exchange rate, PPP fundamentals, and the two deviation series.
/// All five share start and length.
struct FundamentalSet {
  Series s;
  Series f_traded;
  Series f_nontraded;
  Series s_minus_fT;
  Series s_minus_fN;

  MonthIndex start() const { return s.start(); }
  MonthIndex end() const { return s.end(); }
  std::size_t size() const { return s.size(); }
  FundamentalSet slice(MonthIndex from, MonthIndex to) const;
};

/// Rows dropped from each input when intersecting date ranges.
struct TrimReport {
  MonthIndex common_start;
  MonthIndex common_end;
  std::vector<std::string> notes;
};

/// Minimum common range accepted by build_fundamentals.
inline constexpr std::size_t kMinFundamentalLength = 24;

/// Builds the traded (PPI-based) and non-traded (CPI/PPI ratio) fundamentals
/// on the intersection of the five input ranges.
///
///   s        = ln(rate)
///   f_traded = ln(PPI) - ln(PPI*)
///   f_nontr. = (ln(CPI) - ln(PPI)) - (ln(CPI*) - ln(PPI*))
FundamentalSet build_fundamentals(const Series& rate, const Series& cpi, const Series& cpi_star,
                                  const Series& ppi, const Series& ppi_star,
                                  TrimReport* report = nullptr);

struct RegimeSplit {
  FundamentalSet full;
  FundamentalSet managed;
  FundamentalSet free;
};

/// Managed floating ended July 1997.
inline const MonthIndex kDefaultRegimeBreak{1997, 7};

/// `managed` runs through break_after, `free` starts the month after. Both
/// parts must hold at least two observations, else Error(break_out_of_range).
RegimeSplit split_regimes(const FundamentalSet& fs, MonthIndex break_after = kDefaultRegimeBreak);

}  // namespace bubbles
