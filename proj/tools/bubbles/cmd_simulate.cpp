#include <cmath>
#include <iostream>
#include <sstream>

#include "artifacts.hpp"
#include "bubbles/csv.hpp"
#include "bubbles/dgp.hpp"
#include "bubbles/error.hpp"
#include "bubbles/rng.hpp"
#include "commands.hpp"

namespace bubbles::cli {

namespace {

BubbleDgpConfig dgp_config(const SimulateArgs& args) {
  if (!(args.growth > 1.0)) throw Error(ErrorCode::invalid_config, "--growth must exceed 1");
  BubbleDgpConfig c;
  c.T = args.T;
  c.alpha = 1.0 / args.growth;
  for (const auto& w : args.windows) c.bubble_windows.push_back(parse_window(w));
  c.innovation_sd = args.innovation_sd;
  c.bubble_sd = args.bubble_sd;
  c.seed = args.seed;
  c.start = MonthIndex::parse(args.start);
  if (args.collapse == "reset") {
    c.collapse = CollapseRule::reset_to_zero;
  } else if (args.collapse.rfind("fraction:", 0) == 0) {
    c.collapse = CollapseRule::fraction;
    try {
      c.collapse_fraction = std::stod(args.collapse.substr(9));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_config, "--collapse fraction is not a number: " + args.collapse);
    }
  } else {
    throw Error(ErrorCode::invalid_config, "--collapse must be 'reset' or 'fraction:F', got '" + args.collapse + "'");
  }
  return c;
}

/// exp(base + cumulative sum of drift + sd * e_t).
Series index_path(MonthIndex start, std::size_t T, double base, double drift, double sd,
                  std::uint64_t seed, std::uint64_t stream) {
  NormalStream e(seed, stream);
  std::vector<double> v(T);
  double level = base;
  for (auto& x : v) {
    level += drift + sd * e();
    x = std::exp(level);
  }
  return Series(start, std::move(v));
}

/// exp(base + AR(1) + shift * R_t): uncertainty index that dips inside bubbles.
Series covariate_path(MonthIndex start, const std::vector<int>& r, double base, double shift,
                      std::uint64_t seed, std::uint64_t stream) {
  NormalStream e(seed, stream);
  std::vector<double> v(r.size());
  double ar = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    ar = 0.85 * ar + 0.12 * e();
    v[t] = std::exp(base + ar + shift * r[t]);
  }
  return Series(start, std::move(v));
}

void write_demo_kit(const SimulateArgs& args) {
  const fs::path dir = *args.demo_kit;
  ensure_directory(dir);
  Manifest manifest("simulate --demo-kit");

  // 1985M01-2023M09 with two bubbles per regime
  BubbleDgpConfig c;
  c.T = 465;
  c.start = MonthIndex(1985, 1);
  c.alpha = 1.0 / 1.06;
  c.bubble_windows = {{60, 28}, {118, 22}, {215, 26}, {380, 30}};
  c.innovation_sd = 1.0;
  c.bubble_sd = 3.0;
  c.seed = args.seed;
  const auto dgp = generate(c);
  const auto indicator = to_indicator(dgp.true_episodes, c.start, c.start + 464);

  const auto ppi_star = index_path(c.start, c.T, std::log(100.0), 0.0020, 0.003, c.seed, 10);
  const auto ppi = index_path(c.start, c.T, std::log(100.0), 0.0060, 0.005, c.seed, 11);
  const auto cpi_star = index_path(c.start, c.T, std::log(100.0), 0.0025, 0.002, c.seed, 12);
  const auto cpi = index_path(c.start, c.T, std::log(100.0), 0.0070, 0.004, c.seed, 13);

  // ln s = ln 1100 + (ln PPI - ln PPI*) + 0.02 y
  std::vector<double> rate(c.T);
  for (std::size_t t = 0; t < c.T; ++t) {
    const double f_traded = std::log(ppi[t]) - std::log(ppi_star[t]);
    rate[t] = std::exp(std::log(1100.0) + f_traded + 0.02 * dgp.series[t]);
  }

  const std::pair<const char*, Series> files[] = {
      {"rate.csv", Series(c.start, rate)},
      {"cpi.csv", cpi},
      {"cpi_star.csv", cpi_star},
      {"ppi.csv", ppi},
      {"ppi_star.csv", ppi_star},
      {"gpr.csv", covariate_path(c.start, indicator.r, std::log(100.0), -0.30, c.seed, 20)},
      {"gepu.csv", covariate_path(c.start, indicator.r, std::log(120.0), -0.20, c.seed, 21)},
      {"gpri.csv", covariate_path(c.start, indicator.r, std::log(90.0), 0.0, c.seed, 22)},
  };
  for (const auto& [name, x] : files) {
    write_series(dir / name, x);
    manifest.artifact(name);
  }
  auto truth = truth_to_json(c, dgp);
  truth["observation_map"] = "ln rate = ln 1100 + ln PPI - ln PPI* + 0.02 y";
  write_json(dir / "truth.json", truth);
  manifest.artifact("truth.json");

  write_text(dir / "pipeline.ini",
             "; demo pipeline over the bundled synthetic data\n"
             "[inputs]\n"
             "s = rate.csv\n"
             "cpi = cpi.csv\n"
             "cpi_star = cpi_star.csv\n"
             "ppi = ppi.csv\n"
             "ppi_star = ppi_star.csv\n"
             "\n"
             "[regimes]\n"
             "break = 1997M07\n"
             "\n"
             "[test]\n"
             "min_window = phillips\n"
             "lags = 0\n"
             "level = 0.95\n"
             "min_duration = 1\n"
             "reps = 2000\n"
             "seed = 20240112\n"
             "\n"
             "[covariates]\n"
             "gpr = gpr.csv:log\n"
             "gepu = gepu.csv:log\n"
             "gpri = gpri.csv:log\n");
  manifest.artifact("pipeline.ini");
  manifest.parameters() = {{"seed", c.seed}};
  manifest.write(dir);
  std::cout << "demo kit written to " << dir.string() << " (bubbles: " << format_episodes(dgp.true_episodes)
            << ")\n";
}

}  // namespace

void cmd_simulate(const SimulateArgs& args) {
  if (args.demo_kit) {
    write_demo_kit(args);
    return;
  }
  const auto c = dgp_config(args);
  const auto out = generate(c);
  ensure_directory(args.out);
  Manifest manifest("simulate");

  write_series(args.out / "series.csv", out.series);
  manifest.artifact("series.csv");
  std::ostringstream components;
  components << "date,fundamental,bubble,value\n";
  for (std::size_t t = 0; t < c.T; ++t) {
    components << out.series.date_at(t).to_string() << ',' << format_double(out.fundamental[t]) << ','
               << format_double(out.bubble[t]) << ',' << format_double(out.series[t]) << '\n';
  }
  write_text(args.out / "components.csv", components.str());
  manifest.artifact("components.csv");
  write_json(args.out / "truth.json", truth_to_json(c, out));
  manifest.artifact("truth.json");

  manifest.parameters() = truth_to_json(c, out);
  manifest.parameters().erase("windows");
  manifest.write(args.out);
  std::cout << "simulated " << c.T << " observations; bubbles: " << format_episodes(out.true_episodes) << "\n";
}

}  // namespace bubbles::cli
