#include "bubbles/logit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Cholesky>
#include <boost/math/special_functions/gamma.hpp>

namespace bubbles {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Derivatives {
  Eigen::VectorXd gradient;
  Eigen::MatrixXd information;
};

Derivatives derivatives(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd z = X * beta;
  Eigen::VectorXd resid(z.size());
  Eigen::VectorXd weight(z.size());
  for (Eigen::Index t = 0; t < z.size(); ++t) {
    const double p = logistic(z(t));
    resid(t) = y(t) - p;
    weight(t) = p * (1.0 - p);
  }
  Derivatives d;
  d.gradient = X.transpose() * resid;
  d.information = X.transpose() * weight.asDiagonal() * X;
  return d;
}

/// Standard deviation of each non-intercept column.
Eigen::VectorXd column_sd(const Eigen::MatrixXd& X) {
  Eigen::VectorXd sd = Eigen::VectorXd::Zero(X.cols());
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 1; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    sd(j) = std::sqrt((X.col(j).array() - mean).square().sum() / n);
  }
  return sd;
}

void check_collinearity(const Eigen::MatrixXd& X, const std::vector<std::string>& names) {
  const Eigen::VectorXd sd = column_sd(X);
  Eigen::MatrixXd scaled = X;
  for (Eigen::Index j = 1; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    const double scale = std::sqrt(X.col(j).squaredNorm() / static_cast<double>(X.rows()));
    if (!(sd(j) > 1e-10 * scale)) {
      throw Error(ErrorCode::collinear_covariates,
                  "covariate '" + names[static_cast<std::size_t>(j)] + "' is constant");
    }
    scaled.col(j) = (X.col(j).array() - mean) / sd(j);
  }
  const Eigen::MatrixXd gram = scaled.transpose() * scaled / static_cast<double>(X.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-12) {
    throw Error(ErrorCode::collinear_covariates, "design matrix is (nearly) rank deficient");
  }
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

const char* stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

struct Effects {
  std::vector<double> value;
  std::vector<double> stderr_value;
};

/// Marginal effects and delta-method standard errors. `rows` are the
/// covariate vectors the effect is averaged over (one row for at-means).
Effects effects_for_rows(const LogitFit& fit, const Eigen::MatrixXd& rows) {
  const Eigen::Index p = fit.beta.size();
  const std::size_t k = fit.slopes();
  Effects out{std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), p);
  const double m = static_cast<double>(rows.rows());
  for (Eigen::Index t = 0; t < rows.rows(); ++t) {
    const double z = rows.row(t).dot(fit.beta);
    const double lam = logistic(z);
    const double dens = lam * (1.0 - lam);
    const double dens_slope = dens * (1.0 - 2.0 * lam);
    for (std::size_t j = 0; j < k; ++j) {
      const auto col = static_cast<Eigen::Index>(j) + 1;
      out.value[j] += dens * fit.beta(col) / m;
      jac.row(static_cast<Eigen::Index>(j)) += dens_slope * fit.beta(col) * rows.row(t) / m;
      jac(static_cast<Eigen::Index>(j), col) += dens / m;
    }
  }
  if (fit.covariance.size() == p * p) {
    const Eigen::MatrixXd v = jac * fit.covariance * jac.transpose();
    for (std::size_t j = 0; j < k; ++j) {
      out.stderr_value[j] = std::sqrt(std::max(0.0, v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j))));
    }
  }
  return out;
}

Effects effects(const LogitFit& fit, const Eigen::MatrixXd& X, EffectMode mode) {
  if (X.cols() != fit.beta.size()) {
    throw Error(ErrorCode::length_mismatch, "design has " + std::to_string(X.cols()) +
                                                " columns but the fit has " +
                                                std::to_string(fit.beta.size()) + " coefficients");
  }
  if (X.rows() == 0) throw Error(ErrorCode::empty_input, "no observations");
  if (mode == EffectMode::averaged) return effects_for_rows(fit, X);
  const Eigen::MatrixXd means = X.colwise().mean();
  return effects_for_rows(fit, means);
}

}  // namespace

std::string_view to_string(Transform t) { return t == Transform::log ? "log" : "level"; }

Transform parse_transform(std::string_view text) {
  if (text == "level") return Transform::level;
  if (text == "log") return Transform::log;
  throw Error(ErrorCode::invalid_config, "transform must be 'level' or 'log', got '" + std::string(text) + "'");
}

Eigen::MatrixXd CovariatePanel::design() const {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns.size()) + 1);
  X.col(0).setOnes();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t t = 0; t < rows; ++t) {
      X(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j) + 1) = columns[j][t];
    }
  }
  return X;
}

CovariatePanel make_panel(const std::vector<Covariate>& covariates, MonthIndex from, MonthIndex to) {
  if (to < from) throw Error(ErrorCode::range_mismatch, "empty panel range");
  CovariatePanel panel;
  panel.start = from;
  panel.rows = static_cast<std::size_t>(to - from + 1);
  for (const auto& c : covariates) {
    if (!c.values.covers(from, to)) {
      throw Error(ErrorCode::range_mismatch,
                  "covariate '" + c.name + "' spans " + c.values.start().to_string() + ".." +
                      c.values.end().to_string() + " but the indicator needs " + from.to_string() +
                      ".." + to.to_string());
    }
    const auto first = static_cast<std::size_t>(from - c.values.start());
    std::vector<double> col(panel.rows);
    for (std::size_t t = 0; t < panel.rows; ++t) {
      const double v = c.values[first + t];
      if (c.transform == Transform::log) {
        if (!(v > 0.0)) {
          throw Error(ErrorCode::non_positive_value,
                      "covariate '" + c.name + "' at " + (from + static_cast<long>(t)).to_string() +
                          " cannot be logged");
        }
        col[t] = std::log(v);
      } else {
        col[t] = v;
      }
    }
    panel.names.push_back(c.name);
    panel.transforms.push_back(c.transform);
    panel.columns.push_back(std::move(col));
  }
  return panel;
}

double logit_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd z = X * beta;
  CompensatedSum sum;
  for (Eigen::Index t = 0; t < z.size(); ++t) {
    sum.add(y(t) != 0.0 ? -softplus(-z(t)) : -softplus(z(t)));
  }
  return sum.value();
}

LogitFit fit_logit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, std::vector<std::string> names,
                   const LogitOptions& options) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) {
    throw Error(ErrorCode::length_mismatch, "outcome has " + std::to_string(y.size()) +
                                                " rows, design has " + std::to_string(n));
  }
  if (static_cast<Eigen::Index>(names.size()) != p) {
    throw Error(ErrorCode::length_mismatch, "one name per design column required");
  }
  std::size_t events = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (y(t) != 0.0 && y(t) != 1.0) throw Error(ErrorCode::non_numeric_value, "outcome must be 0 or 1");
    events += y(t) == 1.0 ? 1 : 0;
  }
  if (events == 0 || events == static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::all_same_outcome,
                "indicator is identically " + std::string(events == 0 ? "0" : "1") + " over " +
                    std::to_string(n) + " observations");
  }
  if (n < 10 * p) {
    throw Error(ErrorCode::insufficient_data, std::to_string(n) + " observations for " +
                                                  std::to_string(p) + " parameters; need 10 per parameter");
  }
  check_collinearity(X, names);

  const Eigen::VectorXd sd = column_sd(X);
  LogitFit fit;
  fit.names = std::move(names);
  fit.n = static_cast<std::size_t>(n);
  fit.n_events = events;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = logit_loglik(y, X, beta);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    const auto d = derivatives(y, X, beta);
    if (d.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tol) {
      fit.converged = true;
      break;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(d.information);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::collinear_covariates, "information matrix is not positive definite");
    }
    const Eigen::VectorXd step = llt.solve(d.gradient);
    // lnL differences below this are rounding noise
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(ll));
    double scale = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double ll_candidate = ll;
    for (int h = 0; h <= options.max_halvings; ++h) {
      candidate = beta + scale * step;
      ll_candidate = logit_loglik(y, X, candidate);
      if (ll_candidate > ll - slack) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    fit.iterations = iter;
    if (!accepted) {
      // No representable ascent left: accept the point if it is stationary.
      if (d.gradient.lpNorm<Eigen::Infinity>() < 1e-6) {
        fit.converged = true;
        break;
      }
      throw Error(ErrorCode::no_convergence, "step halving failed at iteration " + std::to_string(iter));
    }
    const double rel = std::abs(ll_candidate - ll) / std::abs(ll);
    beta = candidate;
    ll = ll_candidate;
    for (Eigen::Index j = 1; j < p; ++j) {
      if (std::abs(beta(j)) * sd(j) > options.separation_bound) {
        throw Error(ErrorCode::perfect_separation,
                    "coefficient on '" + fit.names[static_cast<std::size_t>(j)] +
                        "' diverges (|beta| * sd > " + std::to_string(options.separation_bound) + ")");
      }
    }
    if (rel < options.relative_lnl_tol) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged) {
    throw Error(ErrorCode::no_convergence,
                "no convergence in " + std::to_string(options.max_iterations) + " iterations");
  }

  const auto d = derivatives(y, X, beta);
  fit.beta = beta;
  fit.gradient_max_norm = d.gradient.lpNorm<Eigen::Infinity>();
  Eigen::LLT<Eigen::MatrixXd> llt(d.information);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::collinear_covariates, "information matrix is singular at the optimum");
  }
  fit.covariance = llt.solve(Eigen::MatrixXd::Identity(p, p));
  fit.stderr_beta = fit.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  fit.lnL = ll;
  const double n1 = static_cast<double>(events);
  const double n0 = static_cast<double>(n) - n1;
  const double nn = static_cast<double>(n);
  fit.lnL_null = n1 * std::log(n1 / nn) + n0 * std::log(n0 / nn);
  if (p == 1) fit.lnL = std::max(fit.lnL, fit.lnL_null);
  fit.lr_stat = p == 1 ? 0.0 : std::max(0.0, 2.0 * (fit.lnL - fit.lnL_null));
  fit.lr_pvalue = chi_square_sf(fit.lr_stat, static_cast<int>(p) - 1);
  fit.mcfadden_r2 = 1.0 - fit.lnL / fit.lnL_null;

  const auto avg = effects(fit, X, EffectMode::averaged);
  const auto at_means = effects(fit, X, EffectMode::at_means);
  fit.ame = avg.value;
  fit.ame_stderr = avg.stderr_value;
  fit.mem = at_means.value;
  fit.mem_stderr = at_means.stderr_value;
  return fit;
}

LogitFit fit_logit(const BubbleIndicator& r, const CovariatePanel& x, const LogitOptions& options) {
  if (x.start != r.start || x.rows != r.r.size()) {
    throw Error(ErrorCode::range_mismatch,
                "indicator covers " + r.start.to_string() + ".." + r.end().to_string() +
                    " but covariates cover " + x.start.to_string() + ".." +
                    (x.start + static_cast<long>(x.rows) - 1).to_string());
  }
  Eigen::VectorXd y(static_cast<Eigen::Index>(r.r.size()));
  for (std::size_t t = 0; t < r.r.size(); ++t) y(static_cast<Eigen::Index>(t)) = r.r[t];
  std::vector<std::string> names{"constant"};
  names.insert(names.end(), x.names.begin(), x.names.end());
  return fit_logit(y, x.design(), std::move(names), options);
}

std::vector<double> marginal_effects(const LogitFit& fit, const Eigen::MatrixXd& X, EffectMode mode) {
  if (!fit.converged) throw Error(ErrorCode::not_converged, "marginal effects need a converged fit");
  return effects(fit, X, mode).value;
}

std::vector<double> marginal_effects(const LogitFit& fit, const CovariatePanel& x, EffectMode mode) {
  return marginal_effects(fit, x.design(), mode);
}

double chi_square_sf(double x, int df) {
  if (df <= 0 || !(x > 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

LrTest lr_test(const LogitFit& fit) {
  if (!fit.converged) throw Error(ErrorCode::not_converged, "LR test needs a converged fit");
  const int df = static_cast<int>(fit.slopes());
  const double stat = df == 0 ? 0.0 : std::max(0.0, 2.0 * (fit.lnL - fit.lnL_null));
  return {stat, chi_square_sf(stat, df), df};
}

nlohmann::json to_json(const LogitFit& fit) {
  nlohmann::json coefs = nlohmann::json::array();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    nlohmann::json c{{"name", fit.names[i]}, {"beta", fit.beta(ii)}, {"stderr", fit.stderr_beta(ii)}};
    if (i > 0) {
      c["ame"] = fit.ame[i - 1];
      c["ame_stderr"] = fit.ame_stderr[i - 1];
      c["mem"] = fit.mem[i - 1];
      c["mem_stderr"] = fit.mem_stderr[i - 1];
    }
    coefs.push_back(std::move(c));
  }
  return {{"coefficients", coefs},
          {"lnL", fit.lnL},
          {"lnL_null", fit.lnL_null},
          {"lr_stat", fit.lr_stat},
          {"lr_df", fit.slopes()},
          {"lr_pvalue", fit.lr_pvalue},
          {"mcfadden_r2", fit.mcfadden_r2},
          {"n", fit.n},
          {"n_events", fit.n_events},
          {"converged", fit.converged},
          {"iterations", fit.iterations},
          {"gradient_max_norm", fit.gradient_max_norm}};
}

std::string format_logit_table(const LogitFit& fit, const std::string& title) {
  std::string out = title + "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %-24s %-24s %-24s\n", "", "Coefficient",
                "Marginal effect (avg)", "Marginal effect (mean)");
  out += buf;
  auto cell = [&](double v, double se) {
    char c[64];
    std::snprintf(c, sizeof c, "%.4f%s (%.4f)", v, stars(normal_two_sided_p(v / se)), se);
    return std::string(c);
  };
  // Covariates first and the constant last.
  for (std::size_t i = 1; i <= fit.slopes(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    std::snprintf(buf, sizeof buf, "%-14s %-24s %-24s %-24s\n", fit.names[i].c_str(),
                  cell(fit.beta(ii), fit.stderr_beta(ii)).c_str(),
                  cell(fit.ame[i - 1], fit.ame_stderr[i - 1]).c_str(),
                  cell(fit.mem[i - 1], fit.mem_stderr[i - 1]).c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-14s %-24s\n", "constant", cell(fit.beta(0), fit.stderr_beta(0)).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "%-18s %.4f\n%-18s %.4f\n%-18s %.4f\n%-18s %zu\n%-18s %.4f\n",
                "Log likelihood", fit.lnL, "LR Statistics", fit.lr_stat, "Prob>Chi square",
                fit.lr_pvalue, "Observations", fit.n, "McFadden's R^2", fit.mcfadden_r2);
  out += buf;
  return out;
}

}  // namespace bubbles
