#include "bubbles/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "bubbles/parallel.hpp"
#include "bubbles/rng.hpp"

namespace bubbles {

namespace {

void validate(const McConfig& config) {
  if (config.reps < 100) {
    throw Error(ErrorCode::insufficient_reps,
                std::to_string(config.reps) + " replications; at least 100 required");
  }
  if (config.quantiles.empty()) throw Error(ErrorCode::invalid_config, "no quantiles requested");
  for (std::size_t i = 0; i < config.quantiles.size(); ++i) {
    const double p = config.quantiles[i];
    if (!(p > 0.0 && p < 1.0)) {
      throw Error(ErrorCode::invalid_config, "quantile " + std::to_string(p) + " outside (0, 1)");
    }
    if (i > 0 && !(p > config.quantiles[i - 1])) {
      throw Error(ErrorCode::invalid_config, "quantiles must be strictly ascending");
    }
  }
}

std::vector<double> null_path(std::size_t T, std::uint64_t seed, std::uint64_t rep) {
  NormalStream normal(seed, rep);
  std::vector<double> y(T);
  double level = 0.0;
  for (auto& v : y) {
    level += normal();
    v = level;
  }
  return y;
}

std::vector<double> column_quantiles(std::vector<double> column, const std::vector<double>& ps) {
  std::sort(column.begin(), column.end());
  std::vector<double> out;
  out.reserve(ps.size());
  for (double p : ps) out.push_back(quantile_sorted(column, p));
  return out;
}

}  // namespace

std::size_t CriticalValueTable::quantile_slot(double p) const {
  for (std::size_t i = 0; i < config.quantiles.size(); ++i) {
    if (std::abs(config.quantiles[i] - p) < 1e-9) return i;
  }
  throw Error(ErrorCode::invalid_config,
              "critical value table has no " + std::to_string(p) + " quantile");
}

std::string CriticalValueTable::fingerprint() const {
  return cv_fingerprint(config.T, w0, config.spec, config.reps, config.seed, generator);
}

std::string cv_fingerprint(std::size_t T, std::size_t w0, const AdfSpec& spec, std::size_t reps,
                           std::uint64_t seed, std::string_view generator) {
  return "T=" + std::to_string(T) + ";w0=" + std::to_string(w0) + ";lags=" + spec.to_string() +
         ";reps=" + std::to_string(reps) + ";seed=" + std::to_string(seed) +
         ";generator=" + std::string(generator);
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::empty_input, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::invalid_config, "probability " + std::to_string(p) + " outside [0, 1]");
  }
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> values, double p) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, p);
}

RecursiveResult simulate_null_replication(const McConfig& config, std::uint64_t rep) {
  const auto y = null_path(config.T, config.seed, rep);
  try {
    return run_recursive(y, config.policy, config.spec, 1);
  } catch (const Error& e) {
    throw Error(e.code(), "null replication " + std::to_string(rep) + " (seed " +
                              std::to_string(config.seed) + "): " + e.detail());
  }
}

CriticalValueTable simulate_null(const McConfig& config) {
  validate(config);
  const std::size_t w0 = config.policy.resolve(config.T, config.spec);
  const std::size_t ends = config.T - w0 + 1;
  const std::size_t reps = config.reps;

  std::vector<double> adf(reps), sadf_draws(reps), gsadf_draws(reps);
  // rep-major; transposed per end point below
  std::vector<double> bsadf(reps * ends);

  parallel_for(reps, config.threads, [&](std::size_t rep) {
    const auto r = simulate_null_replication(config, rep);
    adf[rep] = r.adf_full;
    sadf_draws[rep] = r.sadf.value;
    gsadf_draws[rep] = r.gsadf.value;
    for (std::size_t i = 0; i < ends; ++i) bsadf[rep * ends + i] = r.bsadf[i].value;
  });

  CriticalValueTable table;
  table.config = config;
  table.w0 = w0;
  table.generator = std::string(kGeneratorId);
  table.adf_cv = column_quantiles(adf, config.quantiles);
  table.sadf_cv = column_quantiles(sadf_draws, config.quantiles);
  table.gsadf_cv = column_quantiles(gsadf_draws, config.quantiles);
  table.bsadf_index.resize(ends);
  table.bsadf_cv.assign(config.quantiles.size(), std::vector<double>(ends));
  std::vector<double> column(reps);
  for (std::size_t i = 0; i < ends; ++i) {
    table.bsadf_index[i] = w0 + i;
    for (std::size_t rep = 0; rep < reps; ++rep) column[rep] = bsadf[rep * ends + i];
    const auto qs = column_quantiles(column, config.quantiles);
    for (std::size_t q = 0; q < qs.size(); ++q) table.bsadf_cv[q][i] = qs[q];
  }
  return table;
}

nlohmann::json to_json(const CriticalValueTable& table) {
  const auto& c = table.config;
  return {
      {"fingerprint", table.fingerprint()},
      {"generator", table.generator},
      {"config",
       {{"T", c.T},
        {"min_window", table.w0},
        {"policy", c.policy.to_string()},
        {"lags", c.spec.to_string()},
        {"reps", c.reps},
        {"seed", c.seed},
        {"quantiles", c.quantiles}}},
      {"adf", table.adf_cv},
      {"sadf", table.sadf_cv},
      {"gsadf", table.gsadf_cv},
      {"bsadf", {{"index", table.bsadf_index}, {"cv", table.bsadf_cv}}},
  };
}

CriticalValueTable cv_table_from_json(const nlohmann::json& j) {
  try {
    CriticalValueTable t;
    const auto& c = j.at("config");
    t.config.T = c.at("T").get<std::size_t>();
    t.w0 = c.at("min_window").get<std::size_t>();
    t.config.policy = WindowPolicy::parse(c.at("policy").get<std::string>());
    t.config.spec = AdfSpec::parse(c.at("lags").get<std::string>());
    t.config.reps = c.at("reps").get<std::size_t>();
    t.config.seed = c.at("seed").get<std::uint64_t>();
    t.config.quantiles = c.at("quantiles").get<std::vector<double>>();
    t.generator = j.at("generator").get<std::string>();
    t.adf_cv = j.at("adf").get<std::vector<double>>();
    t.sadf_cv = j.at("sadf").get<std::vector<double>>();
    t.gsadf_cv = j.at("gsadf").get<std::vector<double>>();
    t.bsadf_index = j.at("bsadf").at("index").get<std::vector<std::size_t>>();
    t.bsadf_cv = j.at("bsadf").at("cv").get<std::vector<std::vector<double>>>();
    const std::size_t nq = t.config.quantiles.size();
    if (t.adf_cv.size() != nq || t.sadf_cv.size() != nq || t.gsadf_cv.size() != nq ||
        t.bsadf_cv.size() != nq) {
      throw Error(ErrorCode::invalid_config, "critical value table: quantile count mismatch");
    }
    for (const auto& seq : t.bsadf_cv) {
      if (seq.size() != t.bsadf_index.size()) {
        throw Error(ErrorCode::invalid_config, "critical value table: BSADF length mismatch");
      }
    }
    if (j.contains("fingerprint") && j.at("fingerprint").get<std::string>() != t.fingerprint()) {
      throw Error(ErrorCode::cache_mismatch, "critical value table fingerprint does not match its contents");
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, std::string("critical value table JSON: ") + e.what());
  }
}

}  // namespace bubbles
