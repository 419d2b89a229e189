#include "bubbles/recursive.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "bubbles/parallel.hpp"

namespace bubbles {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct EndPointFamily {
  BsadfPoint best;        // value NaN when every window is singular
  double anchored = kNaN; // window starting at observation 1
  std::size_t singular = 0;
};

EndPointFamily evaluate_end_point(std::span<const double> y, std::size_t r2, std::size_t w0,
                                  const AdfSpec& spec) {
  const std::size_t starts = r2 - w0 + 1;
  std::vector<double> stats(starts);
  if (spec.rule == LagRule::fixed) {
    detail::CenteredMoments scratch(spec.lags + 2);
    detail::backward_family(y, r2 - 1, w0, spec.lags, scratch, stats);
  } else {
    for (std::size_t first = 0; first < starts; ++first) {
      try {
        stats[first] = adf_stat(y.subspan(first, r2 - first), spec).stat;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::singular_design) throw;
        stats[first] = kNaN;
      }
    }
  }

  EndPointFamily fam;
  fam.best = {r2, kNaN, 0};
  fam.anchored = stats[0];
  for (std::size_t first = 0; first < starts; ++first) {
    const double v = stats[first];
    if (std::isnan(v)) {
      ++fam.singular;
    } else if (std::isnan(fam.best.value) || v > fam.best.value) {
      fam.best.value = v;
      fam.best.r1 = first + 1;
    }
  }
  return fam;
}

std::string window_text(std::size_t r1, std::size_t r2) {
  return "[" + std::to_string(r1) + ", " + std::to_string(r2) + "]";
}

}  // namespace

std::size_t phillips_window(std::size_t T) {
  const double t = static_cast<double>(T);
  return static_cast<std::size_t>(std::floor(t * (0.01 + 1.8 / std::sqrt(t))));
}

std::size_t WindowPolicy::resolve(std::size_t T, const AdfSpec& spec) const {
  const std::size_t floor_len = min_window_length(spec.lags);
  std::size_t w0 = 0;
  if (rule == WindowRule::phillips) {
    w0 = std::max(phillips_window(T), floor_len);
  } else {
    w0 = min_window;
    if (w0 < floor_len) {
      throw Error(ErrorCode::window_too_short,
                  "minimum window " + std::to_string(w0) + " below " + std::to_string(floor_len) +
                      " required for lags " + spec.to_string());
    }
  }
  if (w0 > T) {
    throw Error(ErrorCode::window_too_short, "sample of " + std::to_string(T) +
                                                 " observations shorter than minimum window " +
                                                 std::to_string(w0));
  }
  return w0;
}

std::string WindowPolicy::to_string() const {
  return rule == WindowRule::phillips ? "phillips" : std::to_string(min_window);
}

WindowPolicy WindowPolicy::parse(std::string_view text) {
  if (text == "phillips") return phillips();
  std::size_t w0 = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), w0);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || w0 == 0) {
    throw Error(ErrorCode::invalid_config,
                "min window must be a positive integer or 'phillips', got '" + std::string(text) + "'");
  }
  return explicit_size(w0);
}

std::vector<double> RecursiveResult::bsadf_values() const {
  std::vector<double> v;
  v.reserve(bsadf.size());
  for (const auto& p : bsadf) v.push_back(p.value);
  return v;
}

RecursiveResult run_recursive(std::span<const double> y, const WindowPolicy& policy,
                              const AdfSpec& spec, unsigned threads) {
  const std::size_t T = y.size();
  const std::size_t w0 = policy.resolve(T, spec);
  const std::size_t ends = T - w0 + 1;

  std::vector<EndPointFamily> families(ends);
  parallel_for(ends, threads,
               [&](std::size_t i) { families[i] = evaluate_end_point(y, w0 + i, w0, spec); });

  RecursiveResult out;
  out.T = T;
  out.w0 = w0;
  out.spec = spec;
  out.policy = policy;
  out.bsadf.reserve(ends);
  out.sadf = {kNaN, {}};
  out.gsadf = {kNaN, {}};

  for (const auto& fam : families) {
    const std::size_t r2 = fam.best.index;
    if (std::isnan(fam.best.value)) {
      throw Error(ErrorCode::singular_design,
                  "every window ending at observation " + std::to_string(r2) + " is singular");
    }
    out.singular_windows += fam.singular;
    out.bsadf.push_back(fam.best);
    if (std::isnan(out.gsadf.value) || fam.best.value > out.gsadf.value) {
      out.gsadf = {fam.best.value, {fam.best.r1, r2}};
    }
    if (!std::isnan(fam.anchored) && (std::isnan(out.sadf.value) || fam.anchored > out.sadf.value)) {
      out.sadf = {fam.anchored, {1, r2}};
    }
  }
  out.adf_full = families.back().anchored;
  if (std::isnan(out.adf_full)) {
    throw Error(ErrorCode::singular_design, "full-sample window " + window_text(1, T) + " is singular");
  }
  return out;
}

SupStat sadf(std::span<const double> y, const WindowPolicy& policy, const AdfSpec& spec) {
  return run_recursive(y, policy, spec).sadf;
}

SupStat gsadf(std::span<const double> y, const WindowPolicy& policy, const AdfSpec& spec) {
  return run_recursive(y, policy, spec).gsadf;
}

std::vector<BsadfPoint> bsadf_sequence(std::span<const double> y, const WindowPolicy& policy,
                                       const AdfSpec& spec) {
  return run_recursive(y, policy, spec).bsadf;
}

nlohmann::json to_json(const RecursiveResult& r) {
  nlohmann::json bsadf = nlohmann::json::array();
  nlohmann::json starts = nlohmann::json::array();
  for (const auto& p : r.bsadf) {
    bsadf.push_back({p.index, p.value});
    starts.push_back(p.r1);
  }
  return {
      {"T", r.T},
      {"adf", r.adf_full},
      {"sadf", r.sadf.value},
      {"gsadf", r.gsadf.value},
      {"bsadf", std::move(bsadf)},
      {"argmax",
       {{"sadf", {{"r1", r.sadf.argmax.r1}, {"r2", r.sadf.argmax.r2}}},
        {"gsadf", {{"r1", r.gsadf.argmax.r1}, {"r2", r.gsadf.argmax.r2}}},
        {"bsadf_r1", std::move(starts)}}},
      {"policy", {{"rule", r.policy.to_string()}, {"min_window", r.w0}, {"lags", r.spec.to_string()}}},
      {"singular_windows", r.singular_windows},
  };
}

RecursiveResult recursive_result_from_json(const nlohmann::json& j) {
  try {
    RecursiveResult r;
    r.T = j.at("T").get<std::size_t>();
    r.adf_full = j.at("adf").get<double>();
    r.sadf.value = j.at("sadf").get<double>();
    r.gsadf.value = j.at("gsadf").get<double>();
    const auto& am = j.at("argmax");
    r.sadf.argmax = {am.at("sadf").at("r1").get<std::size_t>(), am.at("sadf").at("r2").get<std::size_t>()};
    r.gsadf.argmax = {am.at("gsadf").at("r1").get<std::size_t>(),
                      am.at("gsadf").at("r2").get<std::size_t>()};
    const auto& starts = am.at("bsadf_r1");
    const auto& seq = j.at("bsadf");
    for (std::size_t i = 0; i < seq.size(); ++i) {
      r.bsadf.push_back({seq[i].at(0).get<std::size_t>(), seq[i].at(1).get<double>(),
                         starts.at(i).get<std::size_t>()});
    }
    const auto& pol = j.at("policy");
    r.policy = WindowPolicy::parse(pol.at("rule").get<std::string>());
    r.w0 = pol.at("min_window").get<std::size_t>();
    r.spec = AdfSpec::parse(pol.at("lags").get<std::string>());
    r.singular_windows = j.value("singular_windows", std::size_t{0});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, std::string("recursive result JSON: ") + e.what());
  }
}

}  // namespace bubbles
