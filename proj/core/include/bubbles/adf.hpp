#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bubbles/error.hpp"

namespace bubbles {

enum class LagRule { fixed, bic };

/// Lag order of the ADF regression: a fixed k, or BIC selection over 0..max_k.
struct AdfSpec {
  LagRule rule = LagRule::fixed;
  /// k for `fixed`, the upper bound max_k for `bic`.
  int lags = 0;

  static AdfSpec fixed(int k);
  static AdfSpec bic(int max_k);

  /// "0", "4", "bic:6".
  std::string to_string() const;
  /// Throws Error(invalid_config).
  static AdfSpec parse(std::string_view text);

  friend bool operator==(const AdfSpec&, const AdfSpec&) = default;
};

struct AdfResult {
  double stat = 0.0;          ///< t-ratio of the lagged-level coefficient
  double delta_hat = 0.0;
  double stderr_delta = 0.0;
  int n_obs = 0;              ///< window length - 1 - lags_used
  int lags_used = 0;
};

/// floor(12 * (length / 100)^0.25): the largest lag BIC may consider.
int bic_lag_cap(std::size_t window_length);

/// Shortest window that leaves the lag-k regression with three residual
/// degrees of freedom: max(k + 8, 2k + 6).
std::size_t min_window_length(int lags);

/// Right-tailed ADF statistic of Δy_t = μ + δ y_{t-1} + Σ φ_i Δy_{t-i} + ε_t
/// over the whole segment.
///
/// Throws Error(window_too_short) or Error(singular_design). Singular covers
/// regressors collinear with the intercept, a scaled normal matrix with
/// reciprocal condition below 1e-12, and zero residual variance.
AdfResult adf_stat(std::span<const double> y, const AdfSpec& spec);

/// One window of a family: [first, last] as 1-based inclusive observation
/// numbers, plus either a result or the failure for that window alone.
struct WindowStat {
  std::size_t first = 0;
  std::size_t last = 0;
  std::optional<AdfResult> result;
  std::optional<Error> error;
};

/// ADF statistics for windows [r1, r2] sharing the end point r2 (1-based).
///
/// Starts are visited in decreasing order and each regression row is added
/// once to a running centered cross-product, so a fixed-lag family costs
/// O(r2 * p^2) plus one small solve per window. Every entry equals what
/// adf_stat returns for the same window. Output follows the order of r1_grid.
std::vector<WindowStat> window_family_stats(std::span<const double> y,
                                            std::span<const std::size_t> r1_grid, std::size_t r2,
                                            const AdfSpec& spec);

namespace detail {

/// Running means and centered co-moments of (regressors..., response),
/// updated one row at a time in extended precision.
class CenteredMoments {
 public:
  explicit CenteredMoments(int dim);

  void reset();
  void add(const long double* row);

  int dim() const noexcept { return dim_; }
  long count() const noexcept { return n_; }
  long double mean(int i) const { return mean_[static_cast<std::size_t>(i)]; }
  long double comoment(int i, int j) const {
    return i <= j ? c_[index(i, j)] : c_[index(j, i)];
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(j);
  }

  int dim_;
  long n_ = 0;
  std::vector<long double> mean_;
  std::vector<long double> c_;
  std::vector<long double> delta_;
};

enum class SolveStatus { ok, collinear, ill_conditioned, zero_variance };

struct OlsSolution {
  SolveStatus status = SolveStatus::ok;
  AdfResult result;
  long double ssr = 0.0L;
};

/// OLS with intercept from centered moments; the first regressor is the
/// tested lagged level. `lags` is echoed into the result.
OlsSolution solve_centered(const CenteredMoments& m, int lags);

/// Fills `row` with (y_{t-1}, Δy_{t-1}, ..., Δy_{t-k}, Δy_t) for the 0-based
/// observation t (requires t >= k + 1).
void regression_row(std::span<const double> y, std::size_t t, int lags, long double* row);

/// Fixed-lag statistics for every start of windows ending at `last`
/// (0-based), with start running from `last - min_len + 1` down to 0.
/// `out[first]` receives the statistic or NaN for singular windows.
void backward_family(std::span<const double> y, std::size_t last, std::size_t min_len, int lags,
                     CenteredMoments& scratch, std::span<double> out);

}  // namespace detail

}  // namespace bubbles
