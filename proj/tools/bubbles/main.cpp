#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "artifacts.hpp"
#include "bubbles/error.hpp"
#include "commands.hpp"

namespace {

using namespace bubbles;
using namespace bubbles::cli;

/// Raw strings for the shared flags, parsed after CLI11 accepts the line.
struct SharedFlags {
  std::string min_window = "phillips";
  std::string lags = "0";
  std::string level = "0.95";
  std::string min_duration = "1";
  std::size_t reps = 2000;
  std::uint64_t seed = 20240112;
  unsigned threads = 0;
  std::string cv;
  std::string cache_dir;
  bool no_svg = false;

  TestParams resolve() const {
    TestParams p;
    p.policy = WindowPolicy::parse(min_window);
    p.spec = AdfSpec::parse(lags);
    p.level = parse_level(level);
    p.min_duration = DurationRule::parse(min_duration);
    p.reps = reps;
    p.seed = seed;
    p.threads = threads;
    if (!cv.empty()) p.cv_file = cv;
    if (!cache_dir.empty()) p.cache_dir = cache_dir;
    p.svg = !no_svg;
    return p;
  }
};

void add_simulation_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--min-window", f.min_window, "Minimum window: N or 'phillips'")->capture_default_str();
  cmd->add_option("--lags", f.lags, "ADF lags: N or bic:N")->capture_default_str();
  cmd->add_option("--reps", f.reps, "Null replications for critical values")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed of the null simulation")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads, 0 = all cores")->capture_default_str();
}

void add_stamping_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--level", f.level, "Critical value level: 0.90, 0.95 or 0.99")->capture_default_str();
  cmd->add_option("--min-duration", f.min_duration, "Minimum episode length: N or 'logT'")
      ->capture_default_str();
  cmd->add_flag("--no-svg", f.no_svg, "Skip the BSADF plot");
}

void add_columns(CLI::App* cmd, ColumnNames& c) {
  cmd->add_option("--date-column", c.date, "Date column of input CSVs")->capture_default_str();
  cmd->add_option("--value-column", c.value, "Value column of input CSVs")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive right-tailed unit root tests, bubble date-stamping and logit attribution"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress messages");
  app.set_version_flag("--version", BUBBLES_VERSION);

  FundamentalsArgs fa;
  auto* fund = app.add_subcommand("fundamentals", "Build log exchange rate and PPP fundamentals");
  fund->add_option("--s", fa.s, "Exchange rate CSV")->required();
  fund->add_option("--cpi", fa.cpi, "Domestic CPI CSV")->required();
  fund->add_option("--cpi-star", fa.cpi_star, "Foreign CPI CSV")->required();
  fund->add_option("--ppi", fa.ppi, "Domestic PPI CSV")->required();
  fund->add_option("--ppi-star", fa.ppi_star, "Foreign PPI CSV")->required();
  add_columns(fund, fa.columns);
  fund->add_option("--out", fa.out, "Output directory")->capture_default_str();

  TestArgs ta;
  SharedFlags tf;
  auto* test = app.add_subcommand("test", "ADF, SADF, GSADF and BSADF with date-stamped episodes");
  test->add_option("--input", ta.input, "Series CSV")->required();
  add_columns(test, ta.columns);
  test->add_option("--label", ta.label, "Series label (default: file stem)");
  test->add_flag("--log", ta.take_log, "Take natural logs before testing");
  add_simulation_flags(test, tf);
  add_stamping_flags(test, tf);
  test->add_option("--cv", tf.cv, "Critical value table to use instead of simulating");
  test->add_option("--cache-dir", tf.cache_dir, "Directory of cached critical value tables");
  test->add_option("--out", ta.out, "Output directory")->capture_default_str();

  CritvalsArgs ca;
  SharedFlags cf;
  auto* crit = app.add_subcommand("critvals", "Simulate null critical values");
  crit->add_option("--T", ca.T, "Sample length")->required();
  add_simulation_flags(crit, cf);
  crit->add_option("--out", ca.out, "Output directory")->capture_default_str();

  StampArgs sa;
  SharedFlags sf;
  auto* stamp = app.add_subcommand("stamp", "Date-stamp episodes from a saved test result");
  stamp->add_option("--result", sa.result, "recursive.json from the test command")->required();
  stamp->add_option("--cv", sa.cv, "critical_values.json")->required();
  add_stamping_flags(stamp, sf);
  stamp->add_option("--out", sa.out, "Output directory")->capture_default_str();

  LogitArgs la;
  auto* logit = app.add_subcommand("logit", "Logit of the bubble indicator on covariates");
  logit->add_option("--indicator", la.indicator, "Indicator CSV of zeros and ones");
  logit->add_option("--episodes", la.episodes, "episodes.csv from the test or stamp command");
  logit->add_option("--from", la.from, "First month of the estimation range");
  logit->add_option("--to", la.to, "Last month of the estimation range");
  logit->add_option("--covariate", la.covariates, "name=path[:log|:level], repeatable")->required();
  add_columns(logit, la.columns);
  logit->add_option("--out", la.out, "Output directory")->capture_default_str();

  PipelineArgs pa;
  auto* pipe = app.add_subcommand("pipeline", "Fundamentals, tests per regime and logit from a config file");
  pipe->add_option("--config", pa.config, "INI configuration")->required();
  pipe->add_option("--out", pa.out, "Output directory")->capture_default_str();

  SimulateArgs ma;
  auto* sim = app.add_subcommand("simulate", "Random walk plus explosive bubble windows");
  sim->add_option("--T", ma.T, "Sample length")->capture_default_str();
  sim->add_option("--growth", ma.growth, "Bubble growth factor 1/alpha")->capture_default_str();
  sim->add_option("--window", ma.windows, "Bubble window start:length (1-based), repeatable");
  sim->add_option("--innovation-sd", ma.innovation_sd, "Innovation standard deviation")->capture_default_str();
  sim->add_option("--bubble-sd", ma.bubble_sd, "Innovation standard deviation inside bubbles");
  sim->add_option("--collapse", ma.collapse, "reset or fraction:F")->capture_default_str();
  sim->add_option("--seed", ma.seed, "Seed")->capture_default_str();
  sim->add_option("--start", ma.start, "First month")->capture_default_str();
  sim->add_option("--demo-kit", ma.demo_kit, "Write the bundled demo dataset into this directory");
  sim->add_option("--out", ma.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  set_quiet(quiet);

  try {
    if (*fund) cmd_fundamentals(fa);
    if (*test) {
      ta.params = tf.resolve();
      cmd_test(ta);
    }
    if (*crit) {
      ca.params = cf.resolve();
      cmd_critvals(ca);
    }
    if (*stamp) {
      sa.params = sf.resolve();
      cmd_stamp(sa);
    }
    if (*logit) cmd_logit(la);
    if (*pipe) cmd_pipeline(pa);
    if (*sim) cmd_simulate(ma);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::internal ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
