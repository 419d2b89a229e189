#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bubbles/adf.hpp"
#include "bubbles/recursive.hpp"

namespace bubbles {

struct McConfig {
  std::size_t reps = 2000;
  std::uint64_t seed = 20240112;
  std::size_t T = 0;
  WindowPolicy policy;
  AdfSpec spec;
  /// Strictly inside (0, 1), strictly ascending.
  std::vector<double> quantiles{0.90, 0.95, 0.99};
  /// Worker threads, 0 = all cores. Never affects the output.
  unsigned threads = 0;
};

/// Empirical null quantiles. Every per-quantile vector is indexed like
/// `config.quantiles`; `bsadf_cv[q][i]` is the critical value at end point
/// `bsadf_index[i]`.
struct CriticalValueTable {
  McConfig config;
  std::size_t w0 = 0;
  std::string generator;
  std::vector<double> adf_cv;
  std::vector<double> sadf_cv;
  std::vector<double> gsadf_cv;
  std::vector<std::size_t> bsadf_index;
  std::vector<std::vector<double>> bsadf_cv;

  /// Position of p in config.quantiles (within 1e-9); throws Error(invalid_config).
  std::size_t quantile_slot(double p) const;
  std::string fingerprint() const;
};

/// Cache key over everything that determines a table's contents.
std::string cv_fingerprint(std::size_t T, std::size_t w0, const AdfSpec& spec, std::size_t reps,
                           std::uint64_t seed, std::string_view generator);

/// Sample quantile with linear interpolation between closest ranks
/// (Hyndman-Fan type 7): h = (n - 1) p, x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
double quantile(std::span<const double> values, double p);
/// Same on data already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

/// Null simulation: y_t = y_{t-1} + e_t, e_t ~ N(0, 1), y_0 = 0, t = 1..T.
/// Replication i draws from NormalStream(seed, i), so tables are identical
/// for any thread count or evaluation order.
CriticalValueTable simulate_null(const McConfig& config);

/// Statistics of one null replication; exposed for size studies.
RecursiveResult simulate_null_replication(const McConfig& config, std::uint64_t rep);

nlohmann::json to_json(const CriticalValueTable& table);
CriticalValueTable cv_table_from_json(const nlohmann::json& j);

}  // namespace bubbles
