#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "bubbles/datestamp.hpp"
#include "bubbles/series.hpp"

namespace bubbles {

enum class Transform { level, log };

std::string_view to_string(Transform t);
Transform parse_transform(std::string_view text);

struct Covariate {
  std::string name;
  Series values;
  Transform transform = Transform::level;
};

/// Covariates aligned to one month range, transforms already applied.
struct CovariatePanel {
  MonthIndex start;
  std::size_t rows = 0;
  std::vector<std::string> names;
  std::vector<Transform> transforms;
  /// column-major: columns[j][t]
  std::vector<std::vector<double>> columns;

  /// Intercept in column 0, then the covariates.
  Eigen::MatrixXd design() const;
};

/// Slices every covariate to [from, to] and applies its transform. Throws
/// Error(range_mismatch) naming the covariate whose range falls short, and
/// Error(non_positive_value) for a log transform of a non-positive value.
CovariatePanel make_panel(const std::vector<Covariate>& covariates, MonthIndex from, MonthIndex to);

enum class EffectMode { at_means, averaged };

struct LogitFit {
  /// "constant" first, then covariates, matching beta's order.
  std::vector<std::string> names;
  Eigen::VectorXd beta;
  Eigen::VectorXd stderr_beta;
  Eigen::MatrixXd covariance;
  double lnL = 0.0;
  double lnL_null = 0.0;
  double lr_stat = 0.0;
  double lr_pvalue = 1.0;
  double mcfadden_r2 = 0.0;
  std::size_t n = 0;
  std::size_t n_events = 0;
  /// Per covariate (intercept excluded).
  std::vector<double> ame;
  std::vector<double> ame_stderr;
  std::vector<double> mem;
  std::vector<double> mem_stderr;
  bool converged = false;
  int iterations = 0;
  double gradient_max_norm = 0.0;

  std::size_t slopes() const { return names.empty() ? 0 : names.size() - 1; }
};

struct LogitOptions {
  int max_iterations = 100;
  int max_halvings = 20;
  double gradient_tol = 1e-8;
  double relative_lnl_tol = 1e-12;
  /// Bound on |beta_j| * sd(x_j); exceeding it signals separation.
  double separation_bound = 30.0;
};

/// Logistic log-likelihood sum y ln Λ(z) + (1 - y) ln(1 - Λ(z)), z = Xβ,
/// evaluated through softplus so large |z| neither overflows nor underflows.
double logit_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::VectorXd& beta);

/// Damped Newton from β = 0 with step halving; standard errors from the
/// inverse observed information. X must carry the intercept in column 0.
LogitFit fit_logit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                   std::vector<std::string> names, const LogitOptions& options = {});

/// Aligns the panel to the indicator's range and fits.
LogitFit fit_logit(const BubbleIndicator& r, const CovariatePanel& x, const LogitOptions& options = {});

/// φ(z)β_j with φ = Λ(1 - Λ), at the covariate means or averaged over rows.
std::vector<double> marginal_effects(const LogitFit& fit, const Eigen::MatrixXd& X, EffectMode mode);
std::vector<double> marginal_effects(const LogitFit& fit, const CovariatePanel& x, EffectMode mode);

struct LrTest {
  double statistic = 0.0;
  double p_value = 1.0;
  int df = 0;
};

/// 2(lnL - lnL_null) against chi-square with one degree of freedom per slope.
LrTest lr_test(const LogitFit& fit);

/// Upper tail of chi-square(df) at x, via the regularized incomplete gamma.
double chi_square_sf(double x, int df);

nlohmann::json to_json(const LogitFit& fit);
/// Aligned table: coefficients with standard errors in parentheses, marginal
/// effects, then log likelihood, LR statistic, p-value, n and McFadden R².
std::string format_logit_table(const LogitFit& fit, const std::string& title);

}  // namespace bubbles
