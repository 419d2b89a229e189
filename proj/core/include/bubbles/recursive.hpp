#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bubbles/adf.hpp"

namespace bubbles {

enum class WindowRule { explicit_size, phillips };

/// floor(T * (0.01 + 1.8 / sqrt(T))).
std::size_t phillips_window(std::size_t T);

/// Minimum estimation window of the recursive tests.
struct WindowPolicy {
  WindowRule rule = WindowRule::phillips;
  std::size_t min_window = 0;  ///< used by explicit_size only

  static WindowPolicy phillips() { return {}; }
  static WindowPolicy explicit_size(std::size_t w0) { return {WindowRule::explicit_size, w0}; }

  /// Resolved w0 for a sample of T observations. The Phillips rule is raised
  /// to the lag-dependent floor; an explicit size below that floor, or any
  /// w0 > T, throws Error(window_too_short).
  std::size_t resolve(std::size_t T, const AdfSpec& spec) const;

  /// "phillips" or the explicit size.
  std::string to_string() const;
  static WindowPolicy parse(std::string_view text);

  friend bool operator==(const WindowPolicy&, const WindowPolicy&) = default;
};

/// Window [r1, r2] as 1-based inclusive observation numbers.
struct WindowRef {
  std::size_t r1 = 0;
  std::size_t r2 = 0;
  friend bool operator==(const WindowRef&, const WindowRef&) = default;
};

struct SupStat {
  double value = 0.0;
  WindowRef argmax;
};

struct BsadfPoint {
  std::size_t index = 0;  ///< end point r2
  double value = 0.0;
  std::size_t r1 = 0;     ///< start attaining the sup
};

struct RecursiveResult {
  std::size_t T = 0;
  std::size_t w0 = 0;
  AdfSpec spec;
  WindowPolicy policy;
  double adf_full = 0.0;
  SupStat sadf;
  SupStat gsadf;
  /// One entry per end point w0..T.
  std::vector<BsadfPoint> bsadf;
  /// Windows skipped inside the sups because their regression was singular.
  std::size_t singular_windows = 0;

  std::vector<double> bsadf_values() const;
};

/// ADF, SADF, GSADF and the BSADF sequence in one pass over all windows.
///
/// Each end point r2 is an independent backward family, so end points are
/// spread over `threads` workers (0 = all cores) with identical results for
/// any thread count. Singular windows are skipped; an end point whose every
/// window is singular, or a singular full-sample window, throws.
/// Ties in a sup resolve to the smallest r2, then the smallest r1.
RecursiveResult run_recursive(std::span<const double> y, const WindowPolicy& policy,
                              const AdfSpec& spec, unsigned threads = 1);

SupStat sadf(std::span<const double> y, const WindowPolicy& policy, const AdfSpec& spec);
SupStat gsadf(std::span<const double> y, const WindowPolicy& policy, const AdfSpec& spec);
std::vector<BsadfPoint> bsadf_sequence(std::span<const double> y, const WindowPolicy& policy,
                                       const AdfSpec& spec);

nlohmann::json to_json(const RecursiveResult& r);
RecursiveResult recursive_result_from_json(const nlohmann::json& j);

}  // namespace bubbles
