#include "bubbles/fundamentals.hpp"

#include <algorithm>
#include <array>

#include "bubbles/error.hpp"

namespace bubbles {

namespace {

Series difference(const Series& a, const Series& b, std::string label) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return Series(a.start(), std::move(out), std::move(label));
}

}  // namespace

FundamentalSet FundamentalSet::slice(MonthIndex from, MonthIndex to) const {
  return {s.slice(from, to), f_traded.slice(from, to), f_nontraded.slice(from, to),
          s_minus_fT.slice(from, to), s_minus_fN.slice(from, to)};
}

FundamentalSet build_fundamentals(const Series& rate, const Series& cpi, const Series& cpi_star,
                                  const Series& ppi, const Series& ppi_star, TrimReport* report) {
  const std::array<const Series*, 5> inputs{&rate, &cpi, &cpi_star, &ppi, &ppi_star};
  const std::array<const char*, 5> names{"rate", "cpi", "cpi_star", "ppi", "ppi_star"};

  MonthIndex from = rate.start();
  MonthIndex to = rate.end();
  for (const Series* x : inputs) {
    from = std::max(from, x->start());
    to = std::min(to, x->end());
  }
  if (from > to || static_cast<std::size_t>(to - from + 1) < kMinFundamentalLength) {
    throw Error(ErrorCode::range_too_short,
                "common range of inputs has " + std::to_string(from > to ? 0 : to - from + 1) +
                    " months; at least " + std::to_string(kMinFundamentalLength) + " required");
  }

  if (report != nullptr) {
    report->common_start = from;
    report->common_end = to;
    report->notes.clear();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      long head = from - inputs[i]->start();
      long tail = inputs[i]->end() - to;
      if (head > 0 || tail > 0) {
        report->notes.push_back(std::string(names[i]) + ": trimmed " + std::to_string(head) +
                                " leading and " + std::to_string(tail) + " trailing rows");
      }
    }
  }

  Series s = log_series(rate.slice(from, to)).relabeled("s");
  Series l_cpi = log_series(cpi.slice(from, to));
  Series l_cpi_star = log_series(cpi_star.slice(from, to));
  Series l_ppi = log_series(ppi.slice(from, to));
  Series l_ppi_star = log_series(ppi_star.slice(from, to));

  Series f_traded = difference(l_ppi, l_ppi_star, "f_traded");
  std::vector<double> fn(s.size());
  for (std::size_t i = 0; i < fn.size(); ++i) {
    fn[i] = (l_cpi[i] - l_ppi[i]) - (l_cpi_star[i] - l_ppi_star[i]);
  }
  Series f_nontraded(from, std::move(fn), "f_nontraded");
  Series s_minus_fT = difference(s, f_traded, "s_minus_fT");
  Series s_minus_fN = difference(s, f_nontraded, "s_minus_fN");
  return {std::move(s), std::move(f_traded), std::move(f_nontraded), std::move(s_minus_fT),
          std::move(s_minus_fN)};
}

RegimeSplit split_regimes(const FundamentalSet& fs, MonthIndex break_after) {
  if (break_after < fs.start() + 1 || break_after > fs.end() - 2) {
    throw Error(ErrorCode::break_out_of_range,
                "break " + break_after.to_string() + " must leave two observations on each side of " +
                    fs.start().to_string() + ".." + fs.end().to_string());
  }
  return {fs, fs.slice(fs.start(), break_after), fs.slice(break_after + 1, fs.end())};
}

}  // namespace bubbles
