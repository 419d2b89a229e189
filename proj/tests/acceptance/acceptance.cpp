// Acceptance run: one PASS/FAIL line per criterion. Optional arguments pick
// criteria by number ("acceptance 2 4"); no arguments runs all nine.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "bubbles/datestamp.hpp"
#include "bubbles/dgp.hpp"
#include "bubbles/logit.hpp"
#include "bubbles/montecarlo.hpp"
#include "bubbles/recursive.hpp"
#include "naive_ols.hpp"

namespace fs = std::filesystem;
using namespace bubbles;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + BUBBLES_CLI_PATH + "\" -q " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bubbles_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<double> bubble_series(std::size_t T, std::vector<BubbleWindow> windows, double growth,
                                  std::uint64_t seed) {
  BubbleDgpConfig c;
  c.T = T;
  c.alpha = 1.0 / growth;
  c.bubble_windows = std::move(windows);
  c.seed = seed;
  const auto v = generate(c).series.values();
  return {v.begin(), v.end()};
}

// 1: null critical values against reference values

Verdict critical_values() {
  struct Row {
    std::size_t T, w0;
    double gsadf95;
  };
  // SADF 95% and GSADF 99% references exist for T = 465 only.
  const Row rows[] = {{465, 43, 2.1957}, {151, 23, 2.1128}, {314, 35, 2.1141}};
  bool pass = true;
  std::string detail;
  for (const auto& row : rows) {
    McConfig c;
    c.T = row.T;
    c.policy = WindowPolicy::explicit_size(row.w0);
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = simulate_null(c);
    const double secs = seconds_since(t0);
    const double g95 = table.gsadf_cv[table.quantile_slot(0.95)];
    bool ok = g95 >= 2.05 && g95 <= 2.35;
    detail += fmt("T=%.0f GSADF95=%.4f (reference %.4f)", double(row.T), g95, row.gsadf95);
    if (row.T == 465) {
      const double s95 = table.sadf_cv[table.quantile_slot(0.95)];
      const double g99 = table.gsadf_cv[table.quantile_slot(0.99)];
      ok = ok && s95 >= 1.36 && s95 <= 1.60 && g99 >= 2.41 && g99 <= 2.81;
      detail += fmt(" SADF95=%.4f (1.4818) GSADF99=%.4f (2.6111)", s95, g99);
    }
    detail += fmt(" in %.1fs; ", secs);
    pass = pass && ok && secs < 300.0;
  }
  return {pass, detail};
}

// 2: minimum window rule

Verdict window_rule() {
  const bool pass = phillips_window(465) == 43 && phillips_window(314) == 35 && phillips_window(151) == 23;
  return {pass, fmt("w0(465)=%.0f w0(314)=%.0f w0(151)=%.0f", double(phillips_window(465)),
                    double(phillips_window(314)), double(phillips_window(151)))};
}

// 3: gsadf >= sadf >= adf over null and bubble inputs

Verdict ordering() {
  std::mt19937_64 pick(3);
  std::uniform_int_distribution<std::size_t> length(60, 200);
  std::size_t violations = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const std::size_t T = length(pick);
    const auto y = i % 2 == 0 ? oracle::random_walk(T, i)
                              : bubble_series(T, {{T / 2, std::max<std::size_t>(T / 6, 5)}}, 1.05, i);
    const auto r = run_recursive(y, WindowPolicy::phillips(), AdfSpec::fixed(static_cast<int>(i % 3)));
    if (!(r.gsadf.value >= r.sadf.value && r.sadf.value >= r.adf_full)) ++violations;
  }
  return {violations == 0, fmt("%.0f violations over 1000 inputs (500 null, 500 bubble)", double(violations))};
}

// 4: incremental BSADF against per-window QR

Verdict oracle_equivalence() {
  std::mt19937_64 pick(4);
  std::uniform_int_distribution<std::size_t> length(40, 200);
  double worst = 0.0;
  bool shapes = true;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t T = length(pick);
    const int k = static_cast<int>(i % 3);
    const std::size_t w0 = std::max(phillips_window(T), min_window_length(k));
    const auto y = i % 2 == 0 ? oracle::random_walk(T, 100 + i, 0.02)
                              : bubble_series(T, {{T / 2, T / 5}}, 1.04, 100 + i);
    const auto seq = bsadf_sequence(y, WindowPolicy::explicit_size(w0), AdfSpec::fixed(k));
    const auto ref = oracle::brute_force_recursive(y, w0, k);
    if (seq.size() != ref.bsadf.size()) {
      shapes = false;
      continue;
    }
    for (std::size_t j = 0; j < seq.size(); ++j) worst = std::max(worst, std::abs(seq[j].value - ref.bsadf[j]));
  }
  return {shapes && worst < 1e-8, fmt("max |difference| = %.3g over 50 series, T in [40, 200], k in {0,1,2}", worst)};
}

// 5: size, power and origination accuracy

Verdict size_and_power() {
  constexpr std::size_t T = 300;
  constexpr std::size_t bubble_start = 150, bubble_length = 30;
  McConfig c;
  c.T = T;
  const auto table = simulate_null(c);
  const std::size_t slot = table.quantile_slot(0.95);
  const double cv = table.gsadf_cv[slot];

  std::size_t null_rejections = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto y = bubble_series(T, {}, 1.05, 50000 + seed);
    if (gsadf(y, WindowPolicy::phillips(), AdfSpec::fixed(0)).value > cv) ++null_rejections;
  }
  std::size_t detections = 0, on_time = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto y = bubble_series(T, {{bubble_start, bubble_length}}, 1.05, 90000 + seed);
    const auto r = run_recursive(y, WindowPolicy::phillips(), AdfSpec::fixed(0));
    if (!(r.gsadf.value > cv)) continue;
    ++detections;
    const auto set = stamp_episodes(r, table, MonthIndex(2000, 1), 1, 0.95);
    for (const auto& e : set.episodes) {
      if (e.last + 3 < bubble_start) continue;
      const auto gap = static_cast<long>(e.first) - static_cast<long>(bubble_start);
      if (std::abs(gap) <= 3) ++on_time;
      break;
    }
  }
  const double size = static_cast<double>(null_rejections) / 500.0;
  const double power = static_cast<double>(detections) / 200.0;
  const double timing = detections ? static_cast<double>(on_time) / static_cast<double>(detections) : 0.0;
  const bool pass = std::abs(size - 0.05) <= 0.02 && power >= 0.80 && timing >= 0.80;
  return {pass, fmt("size %.3f (0.05 +/- 0.02), power %.3f (>= 0.80), origination within 3 obs %.3f "
                    "(>= 0.80); cv95 = %.4f",
                    size, power, timing, cv)};
}

// 6: logit estimator

Verdict logit() {
  bool pass = true;
  std::string detail;

  // (a) 2x2 table
  Eigen::VectorXd y2 = Eigen::VectorXd::Zero(200);
  Eigen::MatrixXd X2 = Eigen::MatrixXd::Ones(200, 2);
  for (int i = 0; i < 200; ++i) {
    const bool treated = i < 100;
    X2(i, 1) = treated ? 1.0 : 0.0;
    y2(i) = (treated ? i : i - 100) < (treated ? 30 : 10) ? 1.0 : 0.0;
  }
  const auto f2 = fit_logit(y2, X2, {"constant", "x"});
  const double err_a = std::abs(f2.beta(1) - std::log(27.0 / 7.0));
  const bool a = err_a < 1e-6;
  detail += fmt("(a) |slope - ln(27/7)| = %.2g; ", err_a);

  // (b) recovery at n = 5000 and (d) marginal effects, from one simulated design
  const std::vector<double> truth{-0.4, 0.9, -0.6, 0.3};
  const int n = 5000, p = 4;
  std::mt19937_64 engine(6);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  Eigen::VectorXd y(n);
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(n, p);
  for (int i = 0; i < n; ++i) {
    double z = truth[0];
    for (int j = 1; j < p; ++j) {
      X(i, j) = normal(engine);
      z += truth[static_cast<std::size_t>(j)] * X(i, j);
    }
    y(i) = unif(engine) < 1.0 / (1.0 + std::exp(-z)) ? 1.0 : 0.0;
  }
  const auto fit = fit_logit(y, X, {"constant", "x1", "x2", "x3"});
  double worst_z = 0.0;
  for (int j = 0; j < p; ++j) {
    worst_z = std::max(worst_z, std::abs(fit.beta(j) - truth[static_cast<std::size_t>(j)]) / fit.stderr_beta(j));
  }
  const bool b = worst_z < 2.0;
  detail += fmt("(b) max |beta - truth| / se = %.3f; ", worst_z);

  // (c) gradient at the optima reported above
  const double grad = std::max(f2.gradient_max_norm, fit.gradient_max_norm);
  const bool c = grad < 1e-6 && f2.converged && fit.converged;
  detail += fmt("(c) max gradient norm %.2g; ", grad);

  auto mean_p = [&](const Eigen::MatrixXd& M) {
    const Eigen::VectorXd z = M * fit.beta;
    return (1.0 / (1.0 + (-z.array()).exp())).mean();
  };
  double worst_fd = 0.0;
  const double h = 1e-5;
  for (int j = 1; j < p; ++j) {
    Eigen::MatrixXd up = X, down = X;
    up.col(j).array() += h;
    down.col(j).array() -= h;
    const double fd = (mean_p(up) - mean_p(down)) / (2 * h);
    worst_fd = std::max(worst_fd, std::abs(fit.ame[static_cast<std::size_t>(j - 1)] - fd));
  }
  const bool d = worst_fd < 1e-6;
  detail += fmt("(d) max |AME - finite difference| = %.2g; ", worst_fd);

  // (e) printed chi-square p-values
  const double p1 = std::round(chi_square_sf(19.36, 3) * 1e4) / 1e4;
  const double p2 = std::round(chi_square_sf(7.27, 3) * 1e4) / 1e4;
  const bool e = std::abs(p1 - 0.0002) < 1e-12 && std::abs(p2 - 0.0638) < 1e-12;
  detail += fmt("(e) p(19.36, 3) = %.4f, p(7.27, 3) = %.4f", p1, p2);

  pass = a && b && c && d && e;
  return {pass, detail};
}

// 7: byte-identical JSON on rerun

Verdict determinism() {
  const auto root = scratch("determinism");
  std::vector<std::pair<std::string, std::function<std::string(const fs::path&)>>> commands = {
      {"simulate", [&](const fs::path& o) { return "simulate --window 150:30 --seed 3 --out " + o.string(); }},
      {"demo-kit", [&](const fs::path& o) { return "simulate --demo-kit " + o.string() + " --seed 7"; }},
      {"fundamentals",
       [&](const fs::path& o) {
         const auto k = root / "kit";
         return "fundamentals --s " + (k / "rate.csv").string() + " --cpi " + (k / "cpi.csv").string() +
                " --cpi-star " + (k / "cpi_star.csv").string() + " --ppi " + (k / "ppi.csv").string() +
                " --ppi-star " + (k / "ppi_star.csv").string() + " --out " + o.string();
       }},
      {"critvals", [&](const fs::path& o) { return "critvals --T 120 --reps 300 --seed 11 --out " + o.string(); }},
      {"test",
       [&](const fs::path& o) {
         return "test --input " + (root / "kit" / "rate.csv").string() +
                " --log --reps 300 --seed 12 --no-svg --out " + o.string();
       }},
      {"stamp",
       [&](const fs::path& o) {
         return "stamp --result " + (root / "test_ref" / "recursive.json").string() + " --cv " +
                (root / "test_ref" / "critical_values.json").string() + " --min-duration logT --out " + o.string();
       }},
      {"logit",
       [&](const fs::path& o) {
         return "logit --episodes " + (root / "test_ref" / "episodes.csv").string() +
                " --from 1985M01 --to 2023M09 --covariate gpr=" + (root / "kit" / "gpr.csv").string() +
                ":log --covariate gepu=" + (root / "kit" / "gepu.csv").string() + ":log --out " + o.string();
       }},
  };
  // fixtures shared by the later commands
  if (run_cli("simulate --demo-kit " + (root / "kit").string() + " --seed 7") != 0 ||
      run_cli(commands[4].second(root / "test_ref")) != 0) {
    return {false, "could not prepare fixtures"};
  }
  {
    std::string ini = slurp(root / "kit" / "pipeline.ini");
    ini.replace(ini.find("reps = 2000"), 11, "reps = 300");
    std::ofstream(root / "kit" / "pipeline.ini", std::ios::binary) << ini;
  }
  commands.push_back({"pipeline", [&](const fs::path& o) {
                        return "pipeline --config " + (root / "kit" / "pipeline.ini").string() + " --out " +
                               o.string();
                      }});

  std::size_t files = 0;
  std::vector<std::string> differing;
  for (const auto& [name, args] : commands) {
    const auto a = root / (name + "_a");
    const auto b = root / (name + "_b");
    if (run_cli(args(a)) != 0 || run_cli(args(b)) != 0) {
      differing.push_back(name + " (failed to run)");
      continue;
    }
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
      if (entry.path().extension() != ".json") continue;
      ++files;
      const auto rel = fs::relative(entry.path(), a);
      if (slurp(entry.path()) != slurp(b / rel)) differing.push_back(name + ":" + rel.string());
    }
  }
  std::string detail = fmt("%.0f commands, %.0f JSON artifacts compared", double(commands.size()), double(files));
  for (const auto& d : differing) detail += "; differs: " + d;
  fs::remove_all(root);
  return {differing.empty() && files > 0, detail};
}

// 8: wall time

Verdict performance() {
  const auto y = oracle::random_walk(500, 8);
  auto t0 = std::chrono::steady_clock::now();
  const auto r = run_recursive(y, WindowPolicy::phillips(), AdfSpec::fixed(0));
  const double one = seconds_since(t0);
  McConfig c;
  c.T = 500;
  t0 = std::chrono::steady_clock::now();
  const auto table = simulate_null(c);
  const double sim = seconds_since(t0);
  const double cores = static_cast<double>(std::max(1u, std::thread::hardware_concurrency()));
  return {one < 1.0 && sim < 300.0 && r.bsadf.size() == 500 - r.w0 + 1 && !table.gsadf_cv.empty(),
          fmt("GSADF + BSADF at T=500: %.3fs (< 1s); 2000-rep table at T=500: %.1fs (< 300s) on %.0f core(s)", one,
              sim, cores)};
}

// 9: declared scope on bundled synthetic data

Verdict declared_scope(const std::vector<std::pair<int, Verdict>>& earlier) {
  bool tables = false;
  bool ran_tables = false;
  for (const auto& [k, v] : earlier) {
    if (k == 1) tables = v.pass, ran_tables = true;
  }
  if (!ran_tables) tables = critical_values().pass;
  const bool windows = window_rule().pass;
  // 6e stands alone from the other logit items
  const bool chi = std::round(chi_square_sf(19.36, 3) * 1e4) / 1e4 == 0.0002 &&
                   std::round(chi_square_sf(7.27, 3) * 1e4) / 1e4 == 0.0638;
  const bool data_free = tables && windows && chi;

  const auto out = scratch("demo");
  const bool ran = run_cli("pipeline --config " + (fs::path(BUBBLES_DEMO_DIR) / "pipeline.ini").string() +
                           " --out " + out.string()) == 0;
  std::size_t found = 0, total = 0;
  if (ran) {
    const auto truth = nlohmann::json::parse(slurp(fs::path(BUBBLES_DEMO_DIR) / "truth.json"));
    const auto episodes = nlohmann::json::parse(slurp(out / "tests" / "full" / "s_minus_fT" / "episodes.json"));
    for (const auto& w : truth.at("windows")) {
      ++total;
      const auto first = w.at("first").get<std::size_t>();
      const auto last = w.at("last").get<std::size_t>();
      for (const auto& e : episodes.at("episodes")) {
        if (e.at("first").get<std::size_t>() <= last && e.at("last").get<std::size_t>() >= first) {
          ++found;
          break;
        }
      }
    }
  }
  fs::remove_all(out);
  std::string detail = std::string("data-independent items: 1 ") + (tables ? "pass" : "FAIL") + ", 2 " +
                       (windows ? "pass" : "FAIL") + ", 6e " + (chi ? "pass" : "FAIL") +
                       "; demo pipeline " + (ran ? "ran end to end" : "FAILED") +
                       fmt(", %.0f of %.0f true bubbles overlapped by stamped episodes in s - fT; "
                           "real-data statistics, dates and coefficients need licensed price data and are "
                           "declared out of scope",
                           double(found), double(total));
  return {data_free && ran, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto want = [&](int n) { return wanted.empty() || wanted.count(n) > 0; };

  const std::vector<std::pair<int, Verdict (*)()>> criteria = {
      {1, critical_values}, {2, window_rule},    {3, ordering},    {4, oracle_equivalence},
      {5, size_and_power},  {6, logit},          {7, determinism}, {8, performance},
  };
  std::vector<std::pair<int, Verdict>> results;
  auto report = [&](int n, const Verdict& v) {
    std::printf("CRITERION %d: %s  %s\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  };
  for (const auto& [n, f] : criteria) {
    if (!want(n)) continue;
    results.emplace_back(n, f());
    report(n, results.back().second);
  }
  if (want(9)) {
    results.emplace_back(9, declared_scope(results));
    report(9, results.back().second);
  }
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.second.pass; });
  return all ? 0 : 1;
}
