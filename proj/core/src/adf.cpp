#include "bubbles/adf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace bubbles {

namespace {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// A regressor whose centered sum of squares is below this fraction of its raw
// sum of squares is treated as constant, i.e. collinear with the intercept.
constexpr long double kConstantTol = 1e-20L;
// Residual sum of squares below this fraction of the response's centered sum
// of squares counts as an exact fit.
constexpr long double kExactFitTol = 1e-14L;
constexpr long double kMinReciprocalCondition = 1e-12L;

std::string window_label(std::size_t first, std::size_t last) {
  return "window [" + std::to_string(first) + ", " + std::to_string(last) + "]";
}

const char* status_text(detail::SolveStatus s) {
  switch (s) {
    case detail::SolveStatus::collinear: return "regressors collinear with the intercept";
    case detail::SolveStatus::ill_conditioned: return "normal matrix condition estimate above 1e12";
    case detail::SolveStatus::zero_variance: return "zero residual variance";
    case detail::SolveStatus::ok: break;
  }
  return "ok";
}

/// Fixed-lag regression over the whole segment, rows added last to first.
detail::OlsSolution fixed_lag_fit(std::span<const double> y, int lags, detail::CenteredMoments& m,
                                  std::size_t first_row) {
  m.reset();
  std::vector<long double> row(static_cast<std::size_t>(lags) + 2);
  for (std::size_t t = y.size(); t-- > first_row;) {
    detail::regression_row(y, t, lags, row.data());
    m.add(row.data());
  }
  return detail::solve_centered(m, lags);
}

int feasible_bic_cap(std::size_t length, int requested) {
  int cap = std::min(requested, bic_lag_cap(length));
  while (cap > 0 && min_window_length(cap) > length) --cap;
  return cap;
}

/// Chooses k by BIC on the sample common to all candidate orders.
int select_lags_bic(std::span<const double> y, int max_k) {
  const auto first_row = static_cast<std::size_t>(max_k) + 1;
  int best_k = -1;
  long double best_bic = std::numeric_limits<long double>::infinity();
  for (int k = 0; k <= max_k; ++k) {
    detail::CenteredMoments m(k + 2);
    auto sol = fixed_lag_fit(y, k, m, first_row);
    if (sol.status != detail::SolveStatus::ok) continue;
    const long double n = static_cast<long double>(m.count());
    const long double bic = n * std::log(sol.ssr / n) + static_cast<long double>(k + 2) * std::log(n);
    if (bic < best_bic) {
      best_bic = bic;
      best_k = k;
    }
  }
  return best_k;
}

AdfResult adf_or_throw(std::span<const double> y, const AdfSpec& spec) {
  const std::size_t length = y.size();
  int lags = spec.lags;
  if (spec.rule == LagRule::bic) {
    if (min_window_length(0) > length) {
      throw Error(ErrorCode::window_too_short,
                  "length " + std::to_string(length) + " below " +
                      std::to_string(min_window_length(0)));
    }
    lags = select_lags_bic(y, feasible_bic_cap(length, spec.lags));
    if (lags < 0) throw Error(ErrorCode::singular_design, "every candidate lag order is singular");
  } else if (min_window_length(lags) > length) {
    throw Error(ErrorCode::window_too_short, "length " + std::to_string(length) + " below " +
                                                 std::to_string(min_window_length(lags)) +
                                                 " for " + std::to_string(lags) + " lag(s)");
  }
  detail::CenteredMoments m(lags + 2);
  auto sol = fixed_lag_fit(y, lags, m, static_cast<std::size_t>(lags) + 1);
  if (sol.status != detail::SolveStatus::ok) {
    throw Error(ErrorCode::singular_design, status_text(sol.status));
  }
  return sol.result;
}

}  // namespace

AdfSpec AdfSpec::fixed(int k) {
  if (k < 0) throw Error(ErrorCode::invalid_config, "lags must be non-negative");
  return {LagRule::fixed, k};
}

AdfSpec AdfSpec::bic(int max_k) {
  if (max_k < 0) throw Error(ErrorCode::invalid_config, "bic max lag must be non-negative");
  return {LagRule::bic, max_k};
}

std::string AdfSpec::to_string() const {
  return rule == LagRule::bic ? "bic:" + std::to_string(lags) : std::to_string(lags);
}

AdfSpec AdfSpec::parse(std::string_view text) {
  bool bic = false;
  if (text.rfind("bic:", 0) == 0) {
    bic = true;
    text.remove_prefix(4);
  }
  int k = -1;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || k < 0) {
    throw Error(ErrorCode::invalid_config, "lags must be N or bic:N, got '" + std::string(text) + "'");
  }
  return bic ? AdfSpec::bic(k) : AdfSpec::fixed(k);
}

int bic_lag_cap(std::size_t window_length) {
  return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(window_length) / 100.0, 0.25)));
}

std::size_t min_window_length(int lags) {
  const auto k = static_cast<std::size_t>(lags);
  return std::max(k + 8, 2 * k + 6);
}

AdfResult adf_stat(std::span<const double> y, const AdfSpec& spec) { return adf_or_throw(y, spec); }

std::vector<WindowStat> window_family_stats(std::span<const double> y,
                                            std::span<const std::size_t> r1_grid, std::size_t r2,
                                            const AdfSpec& spec) {
  if (r2 < 1 || r2 > y.size()) {
    throw Error(ErrorCode::window_too_short,
                "end point " + std::to_string(r2) + " outside 1.." + std::to_string(y.size()));
  }
  std::vector<WindowStat> out(r1_grid.size());
  for (std::size_t i = 0; i < r1_grid.size(); ++i) {
    out[i].first = r1_grid[i];
    out[i].last = r2;
  }

  auto record_error = [&](std::size_t i, const Error& e) {
    out[i].error = Error(e.code(), window_label(out[i].first, out[i].last) + ": " + e.detail());
  };

  if (spec.rule == LagRule::bic) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].first < 1 || out[i].first > r2) {
        record_error(i, Error(ErrorCode::window_too_short, "empty window"));
        continue;
      }
      try {
        out[i].result = adf_or_throw(y.subspan(out[i].first - 1, r2 - out[i].first + 1), spec);
      } catch (const Error& e) {
        record_error(i, e);
      }
    }
    return out;
  }

  // Visit starts from latest to earliest so each row enters the running
  // moments exactly once.
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return out[a].first > out[b].first; });

  const int lags = spec.lags;
  const std::size_t min_len = min_window_length(lags);
  const std::size_t last = r2 - 1;
  detail::CenteredMoments m(lags + 2);
  std::vector<long double> row(static_cast<std::size_t>(lags) + 2);
  std::size_t next_row = last;  // next 0-based observation to add, counting down
  bool exhausted = false;

  for (std::size_t i : order) {
    const std::size_t first = out[i].first;
    if (first < 1 || first > r2 || r2 - first + 1 < min_len) {
      record_error(i, Error(ErrorCode::window_too_short,
                            "length " + std::to_string(first <= r2 ? r2 - first + 1 : 0) +
                                " below " + std::to_string(min_len)));
      continue;
    }
    const std::size_t first_row = (first - 1) + static_cast<std::size_t>(lags) + 1;
    while (!exhausted && next_row >= first_row) {
      detail::regression_row(y, next_row, lags, row.data());
      m.add(row.data());
      if (next_row == 0) {
        exhausted = true;
      } else {
        --next_row;
      }
    }
    auto sol = detail::solve_centered(m, lags);
    if (sol.status != detail::SolveStatus::ok) {
      record_error(i, Error(ErrorCode::singular_design, status_text(sol.status)));
    } else {
      out[i].result = sol.result;
    }
  }
  return out;
}

namespace detail {

CenteredMoments::CenteredMoments(int dim)
    : dim_(dim),
      mean_(static_cast<std::size_t>(dim)),
      c_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)),
      delta_(static_cast<std::size_t>(dim)) {}

void CenteredMoments::reset() {
  n_ = 0;
  std::fill(mean_.begin(), mean_.end(), 0.0L);
  std::fill(c_.begin(), c_.end(), 0.0L);
}

void CenteredMoments::add(const long double* row) {
  ++n_;
  const long double inv_n = 1.0L / static_cast<long double>(n_);
  for (int i = 0; i < dim_; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    delta_[ui] = row[i] - mean_[ui];
    mean_[ui] += delta_[ui] * inv_n;
  }
  for (int i = 0; i < dim_; ++i) {
    const long double di = delta_[static_cast<std::size_t>(i)];
    for (int j = i; j < dim_; ++j) {
      c_[index(i, j)] += di * (row[j] - mean_[static_cast<std::size_t>(j)]);
    }
  }
}

void regression_row(std::span<const double> y, std::size_t t, int lags, long double* row) {
  row[0] = y[t - 1];
  for (int i = 1; i <= lags; ++i) {
    const std::size_t s = t - static_cast<std::size_t>(i);
    row[i] = static_cast<long double>(y[s] - y[s - 1]);
  }
  row[lags + 1] = static_cast<long double>(y[t] - y[t - 1]);
}

OlsSolution solve_centered(const CenteredMoments& m, int lags) {
  OlsSolution sol;
  const int q = m.dim() - 1;
  const long double n = static_cast<long double>(m.count());

  for (int i = 0; i < q; ++i) {
    const long double cii = m.comoment(i, i);
    const long double raw = cii + n * m.mean(i) * m.mean(i);
    if (!(cii > kConstantTol * raw)) {
      sol.status = SolveStatus::collinear;
      return sol;
    }
  }
  const long double cyy = m.comoment(q, q);
  const long double my = m.mean(q);

  long double delta = 0.0L;
  long double inv00 = 0.0L;  // [Cxx^-1]_00
  long double explained = 0.0L;
  if (q == 1) {
    const long double cxx = m.comoment(0, 0);
    const long double cxy = m.comoment(0, 1);
    delta = cxy / cxx;
    inv00 = 1.0L / cxx;
    explained = delta * cxy;
  } else {
    VectorL scale(q);
    for (int i = 0; i < q; ++i) scale(i) = std::sqrt(m.comoment(i, i));
    MatrixL corr(q, q);
    VectorL rhs(q);
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) corr(i, j) = m.comoment(i, j) / (scale(i) * scale(j));
      rhs(i) = m.comoment(i, q) / scale(i);
    }
    Eigen::LLT<MatrixL> llt(corr);
    if (llt.info() != Eigen::Success) {
      sol.status = SolveStatus::collinear;
      return sol;
    }
    if (llt.rcond() < kMinReciprocalCondition) {
      sol.status = SolveStatus::ill_conditioned;
      return sol;
    }
    const VectorL beta_scaled = llt.solve(rhs);
    VectorL e0 = VectorL::Zero(q);
    e0(0) = 1.0L;
    const VectorL inv_col = llt.solve(e0);
    delta = beta_scaled(0) / scale(0);
    inv00 = inv_col(0) / (scale(0) * scale(0));
    explained = beta_scaled.dot(rhs);
  }

  sol.result.delta_hat = static_cast<double>(delta);
  sol.result.n_obs = static_cast<int>(m.count());
  sol.result.lags_used = lags;
  const long double ssr = cyy - explained;
  // A constant Δy, or residuals at rounding level, leave no variance to
  // scale the t-ratio.
  if (!(cyy > kConstantTol * n * my * my) || !(ssr > kExactFitTol * cyy)) {
    sol.status = SolveStatus::zero_variance;
    return sol;
  }
  const long double dof = n - static_cast<long double>(q + 1);
  const long double se = std::sqrt(ssr / dof * inv00);
  sol.ssr = ssr;
  sol.result.stderr_delta = static_cast<double>(se);
  sol.result.stat = static_cast<double>(delta / se);
  return sol;
}

void backward_family(std::span<const double> y, std::size_t last, std::size_t min_len, int lags,
                     CenteredMoments& scratch, std::span<double> out) {
  scratch.reset();
  long double row[64];
  std::vector<long double> heap_row;
  long double* r = row;
  if (lags + 2 > 64) {
    heap_row.resize(static_cast<std::size_t>(lags) + 2);
    r = heap_row.data();
  }
  const auto k1 = static_cast<std::size_t>(lags) + 1;
  const std::size_t latest_first = last + 1 - min_len;
  std::size_t t = last;
  for (std::size_t first = latest_first + 1; first-- > 0;) {
    for (; t >= first + k1; --t) {
      regression_row(y, t, lags, r);
      scratch.add(r);
    }
    auto sol = solve_centered(scratch, lags);
    out[first] = sol.status == SolveStatus::ok ? sol.result.stat
                                               : std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace detail

}  // namespace bubbles
