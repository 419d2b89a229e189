#include <doctest.h>

#include <algorithm>
#include <random>

#include "bubbles/montecarlo.hpp"
#include "bubbles/rng.hpp"

using namespace bubbles;

namespace {

McConfig small_config() {
  McConfig c;
  c.T = 80;
  c.reps = 200;
  c.seed = 11;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("type 7 quantiles") {
  const std::vector<double> five{5, 1, 4, 2, 3};
  CHECK(quantile(five, 0.5) == 3.0);
  const std::vector<double> four{1, 2, 3, 4};
  CHECK(quantile(four, 0.5) == 2.5);
  CHECK(quantile(four, 0.0) == 1.0);
  CHECK(quantile(four, 1.0) == 4.0);
  // h = 3 * 0.9 = 2.7 -> 3 + 0.7 * (4 - 3)
  CHECK(quantile(four, 0.9) == doctest::Approx(3.7).epsilon(1e-15));
  CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), Error);

  std::mt19937_64 engine(2024);
  std::normal_distribution<double> normal;
  std::vector<double> draws(2000);
  for (auto& d : draws) d = normal(engine);
  CHECK(std::abs(quantile(draws, 0.95) - 1.6449) < 0.08);
}

TEST_CASE("simulate_null is deterministic across runs and thread counts") {
  auto c = small_config();
  const auto a = simulate_null(c);
  c.threads = 4;
  const auto b = simulate_null(c);
  CHECK(a.gsadf_cv == b.gsadf_cv);
  CHECK(a.sadf_cv == b.sadf_cv);
  CHECK(a.adf_cv == b.adf_cv);
  CHECK(a.bsadf_cv == b.bsadf_cv);
  CHECK(to_json(a).dump() == to_json(b).dump());
  c.seed = 12;
  CHECK(simulate_null(c).gsadf_cv != a.gsadf_cv);
}

TEST_CASE("critical value table structure") {
  const auto t = simulate_null(small_config());
  CHECK(t.w0 == phillips_window(80));
  CHECK(t.bsadf_index.size() == 80 - t.w0 + 1);
  CHECK(t.bsadf_index.front() == t.w0);
  REQUIRE(t.bsadf_cv.size() == 3);
  for (std::size_t q = 0; q < 3; ++q) {
    CHECK(t.gsadf_cv[q] >= t.sadf_cv[q]);
    CHECK(t.bsadf_cv[q].size() == t.bsadf_index.size());
    if (q > 0) {
      CHECK(t.gsadf_cv[q] >= t.gsadf_cv[q - 1]);
      CHECK(t.sadf_cv[q] >= t.sadf_cv[q - 1]);
      for (std::size_t i = 0; i < t.bsadf_index.size(); ++i) {
        CHECK(t.bsadf_cv[q][i] >= t.bsadf_cv[q - 1][i]);
      }
    }
  }
  CHECK(t.quantile_slot(0.95) == 1);
  CHECK_THROWS_AS(t.quantile_slot(0.975), Error);
  CHECK(t.generator == kGeneratorId);
}

TEST_CASE("replications reproduce the table's inputs") {
  const auto c = small_config();
  const auto t = simulate_null(c);
  std::vector<double> g;
  for (std::uint64_t i = 0; i < c.reps; ++i) g.push_back(simulate_null_replication(c, i).gsadf.value);
  CHECK(quantile(g, 0.95) == t.gsadf_cv[1]);
}

TEST_CASE("configuration errors") {
  auto c = small_config();
  c.reps = 99;
  CHECK_THROWS_WITH_AS(simulate_null(c), doctest::Contains("InsufficientReps"), Error);
  c = small_config();
  c.quantiles = {0.95, 0.90};
  CHECK_THROWS_AS(simulate_null(c), Error);
  c.quantiles = {0.5, 1.0};
  CHECK_THROWS_AS(simulate_null(c), Error);
  c = small_config();
  c.T = 6;
  CHECK_THROWS_AS(simulate_null(c), Error);
}

TEST_CASE("JSON round trip and fingerprint check") {
  const auto t = simulate_null(small_config());
  const auto j = to_json(t);
  const auto back = cv_table_from_json(j);
  CHECK(back.gsadf_cv == t.gsadf_cv);
  CHECK(back.bsadf_cv == t.bsadf_cv);
  CHECK(back.fingerprint() == t.fingerprint());
  CHECK(t.fingerprint() ==
        cv_fingerprint(80, t.w0, AdfSpec::fixed(0), 200, 11, kGeneratorId));
  auto tampered = j;
  tampered["config"]["seed"] = 12;
  CHECK_THROWS_AS(cv_table_from_json(tampered), Error);
}
