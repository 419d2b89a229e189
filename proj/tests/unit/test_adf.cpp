#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "bubbles/adf.hpp"
#include "bubbles/rng.hpp"
#include "naive_ols.hpp"

using namespace bubbles;

namespace {

std::vector<double> explosive_ar(std::size_t n, double rho, std::uint64_t seed) {
  NormalStream e(seed, 7);
  std::vector<double> y(n);
  double level = 0.0;
  for (auto& v : y) {
    level = rho * level + e();
    v = level;
  }
  return y;
}

}  // namespace

TEST_CASE("AdfSpec parsing") {
  CHECK(AdfSpec::parse("0") == AdfSpec::fixed(0));
  CHECK(AdfSpec::parse("3") == AdfSpec::fixed(3));
  CHECK(AdfSpec::parse("bic:6") == AdfSpec::bic(6));
  CHECK(AdfSpec::bic(6).to_string() == "bic:6");
  CHECK_THROWS_AS(AdfSpec::parse("-1"), Error);
  CHECK_THROWS_AS(AdfSpec::parse("bic:"), Error);
  CHECK_THROWS_AS(AdfSpec::parse("two"), Error);
  CHECK(bic_lag_cap(100) == 12);
  CHECK(bic_lag_cap(465) == 17);
  CHECK(min_window_length(0) == 8);
  CHECK(min_window_length(4) == 14);
}

TEST_CASE("deterministic trend: design is regular, residual variance is zero") {
  std::vector<double> y(30);
  std::iota(y.begin(), y.end(), 1.0);

  detail::CenteredMoments m(2);
  long double row[2];
  for (std::size_t t = y.size(); t-- > 1;) {
    detail::regression_row(y, t, 0, row);
    m.add(row);
  }
  const auto sol = detail::solve_centered(m, 0);
  CHECK(sol.status == detail::SolveStatus::zero_variance);
  // the lagged level still varies, so the slope is identified
  const auto naive = oracle::naive_adf(y, 0);
  REQUIRE(naive.ok);
  CHECK(std::abs(sol.result.delta_hat - naive.delta) < 1e-10);
  CHECK(std::abs(sol.result.delta_hat) < 1e-10);

  try {
    adf_stat(y, AdfSpec::fixed(0));
    FAIL("zero residual variance must not yield a statistic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_design);
    CHECK(std::string(e.what()).find("zero residual variance") != std::string::npos);
  }
}

TEST_CASE("adf_stat matches the naive QR oracle") {
  std::mt19937_64 pick(99);
  int checked = 0;
  for (int k : {0, 1, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto y = oracle::random_walk(250, 1000 + trial * 7 + k);
      std::uniform_int_distribution<std::size_t> len(min_window_length(k), 200);
      const std::size_t L = len(pick);
      std::uniform_int_distribution<std::size_t> at(0, y.size() - L);
      auto seg = std::span<const double>(y).subspan(at(pick), L);
      const auto mine = adf_stat(seg, AdfSpec::fixed(k));
      const auto ref = oracle::naive_adf(seg, k);
      REQUIRE(ref.ok);
      CHECK(std::abs(mine.stat - ref.stat) < 1e-8);
      CHECK(std::abs(mine.delta_hat - ref.delta) < 1e-8 * std::max(1.0, std::abs(ref.delta)));
      CHECK(mine.n_obs == static_cast<int>(L) - 1 - k);
      CHECK(mine.lags_used == k);
      CHECK(mine.stat == doctest::Approx(mine.delta_hat / mine.stderr_delta).epsilon(1e-12));
      ++checked;
    }
  }
  CHECK(checked == 300);
}

TEST_CASE("shift and scale invariance") {
  for (int trial = 0; trial < 25; ++trial) {
    auto y = oracle::random_walk(120, 500 + trial);
    for (int k : {0, 2}) {
      const double base = adf_stat(y, AdfSpec::fixed(k)).stat;
      auto shifted = y;
      for (auto& v : shifted) v += 1234.5;
      auto scaled = y;
      for (auto& v : scaled) v *= 0.037;
      CHECK(std::abs(adf_stat(shifted, AdfSpec::fixed(k)).stat - base) < 1e-9);
      CHECK(std::abs(adf_stat(scaled, AdfSpec::fixed(k)).stat - base) < 1e-9);
    }
  }
}

TEST_CASE("window errors") {
  auto y = oracle::random_walk(20, 3);
  CHECK_THROWS_WITH_AS(adf_stat(std::span<const double>(y).first(7), AdfSpec::fixed(0)),
                       doctest::Contains("WindowTooShort"), Error);
  CHECK_THROWS_AS(adf_stat(std::span<const double>(y).first(10), AdfSpec::fixed(3)), Error);
  std::vector<double> flat(20, 4.2);
  try {
    adf_stat(flat, AdfSpec::fixed(0));
    FAIL("constant segment accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_design);
  }
}

TEST_CASE("Monte Carlo: random walk null distribution") {
  // T=400, k=0, 1000 seeds; Dickey-Fuller t with intercept has mean near -1.53.
  double sum = 0.0;
  int above = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    NormalStream e(seed, 0);
    std::vector<double> y(400);
    double level = 0.0;
    for (auto& v : y) v = (level += e());
    const double stat = adf_stat(y, AdfSpec::fixed(0)).stat;
    sum += stat;
    above += stat > 1.49 ? 1 : 0;
  }
  const double mean = sum / 1000.0;
  CHECK(std::abs(mean + 1.5) < 0.1);
  CHECK(above < 10);
}

TEST_CASE("Monte Carlo: explosive AR(1) rejects") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto y = explosive_ar(200, 1.05, seed);
    hits += adf_stat(y, AdfSpec::fixed(0)).stat > 2.0 ? 1 : 0;
  }
  CHECK(hits >= 475);
}

TEST_CASE("window_family_stats equals independent adf_stat calls") {
  auto y = oracle::random_walk(60, 17);
  const std::size_t r2 = 60;
  std::vector<std::size_t> starts{31, 5, 18};
  for (int k : {0, 2}) {
    const auto fam = window_family_stats(y, starts, r2, AdfSpec::fixed(k));
    REQUIRE(fam.size() == 3);
    for (std::size_t i = 0; i < starts.size(); ++i) {
      REQUIRE(fam[i].result);
      CHECK(fam[i].first == starts[i]);
      CHECK(fam[i].last == r2);
      const auto single = adf_stat(std::span<const double>(y).subspan(starts[i] - 1, r2 - starts[i] + 1),
                                   AdfSpec::fixed(k));
      CHECK(std::abs(fam[i].result->stat - single.stat) < 1e-10);
      const auto ref = oracle::naive_adf(std::span<const double>(y).subspan(starts[i] - 1, r2 - starts[i] + 1), k);
      CHECK(std::abs(fam[i].result->stat - ref.stat) < 1e-10);
    }
  }

  // degenerate family of one window is bit-identical
  std::vector<std::size_t> one{12};
  const auto fam = window_family_stats(y, one, 45, AdfSpec::fixed(1));
  const auto single = adf_stat(std::span<const double>(y).subspan(11, 34), AdfSpec::fixed(1));
  REQUIRE(fam[0].result);
  CHECK(fam[0].result->stat == single.stat);
  CHECK(fam[0].result->delta_hat == single.delta_hat);
  CHECK(fam[0].result->stderr_delta == single.stderr_delta);
}

TEST_CASE("window_family_stats attributes errors to the offending window") {
  auto y = oracle::random_walk(40, 5);
  y.resize(60, y.back());  // last 20 observations constant
  std::vector<std::size_t> starts{45, 30, 1, 57};
  const auto fam = window_family_stats(y, starts, 60, AdfSpec::fixed(0));
  REQUIRE(fam[0].error);
  CHECK(fam[0].error->code() == ErrorCode::singular_design);
  CHECK(std::string(fam[0].error->what()).find("[45, 60]") != std::string::npos);
  CHECK(fam[1].result);
  CHECK(fam[2].result);
  REQUIRE(fam[3].error);
  CHECK(fam[3].error->code() == ErrorCode::window_too_short);
}

TEST_CASE("BIC lag selection") {
  // AR(2) in differences: BIC should pick up the lag structure.
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  int picked_lags = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> y(300);
    double d1 = 0, d2 = 0, level = 0;
    for (auto& v : y) {
      const double d = 0.6 * d1 - 0.3 * d2 + normal(rng);
      d2 = d1;
      d1 = d;
      v = (level += d);
    }
    const auto res = adf_stat(y, AdfSpec::bic(8));
    CHECK(res.lags_used <= 8);
    CHECK(res.n_obs == 300 - 1 - res.lags_used);
    const auto fixed = adf_stat(y, AdfSpec::fixed(res.lags_used));
    CHECK(fixed.stat == res.stat);
    picked_lags += res.lags_used >= 1 ? 1 : 0;
  }
  CHECK(picked_lags >= 18);

  // the cap limits the search on short windows
  auto y = oracle::random_walk(20, 8);
  const auto res = adf_stat(y, AdfSpec::bic(50));
  CHECK(res.lags_used <= bic_lag_cap(20));
  CHECK(min_window_length(res.lags_used) <= 20);
}
