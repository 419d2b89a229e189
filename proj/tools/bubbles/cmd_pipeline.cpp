#include <iostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "artifacts.hpp"
#include "bubbles/error.hpp"
#include "bubbles/fundamentals.hpp"
#include "commands.hpp"
#include "run_test.hpp"

namespace bubbles::cli {

namespace {

namespace pt = boost::property_tree;

struct PipelineConfig {
  fs::path s, cpi, cpi_star, ppi, ppi_star;
  ColumnNames columns;
  MonthIndex break_after = kDefaultRegimeBreak;
  bool break_defaulted = true;
  TestParams params;
  std::vector<CovariateSpec> covariates;
};

const std::set<std::string> kInputKeys{"s", "cpi", "cpi_star", "ppi", "ppi_star", "date_column",
                                       "value_column"};
const std::set<std::string> kTestKeys{"min_window", "lags",    "level",   "min_duration", "reps",
                                      "seed",       "threads", "svg",     "cache_dir"};

void reject_unknown(const pt::ptree& section, const std::string& name, const std::set<std::string>& known) {
  for (const auto& [key, value] : section) {
    if (!known.count(key)) {
      throw Error(ErrorCode::invalid_config, "config: unknown key '" + key + "' in [" + name + "]");
    }
  }
}

std::string required(const pt::ptree& section, const std::string& name, const std::string& key) {
  const auto v = section.get_optional<std::string>(key);
  if (!v || v->empty()) throw Error(ErrorCode::invalid_config, "config: [" + name + "] " + key + " is required");
  return *v;
}

PipelineConfig load_config(const fs::path& path, const fs::path& out) {
  if (!fs::is_regular_file(path)) throw Error(ErrorCode::io, "--config: file not found: " + path.string());
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::invalid_config, std::string("config: ") + e.what());
  }
  for (const auto& [name, section] : tree) {
    if (name != "inputs" && name != "regimes" && name != "test" && name != "covariates") {
      throw Error(ErrorCode::invalid_config, "config: unknown section [" + name + "]");
    }
  }
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  PipelineConfig c;
  const auto inputs = tree.get_child("inputs", pt::ptree());
  reject_unknown(inputs, "inputs", kInputKeys);
  c.s = resolve(required(inputs, "inputs", "s"));
  c.cpi = resolve(required(inputs, "inputs", "cpi"));
  c.cpi_star = resolve(required(inputs, "inputs", "cpi_star"));
  c.ppi = resolve(required(inputs, "inputs", "ppi"));
  c.ppi_star = resolve(required(inputs, "inputs", "ppi_star"));
  c.columns.date = inputs.get("date_column", c.columns.date);
  c.columns.value = inputs.get("value_column", c.columns.value);

  const auto regimes = tree.get_child("regimes", pt::ptree());
  reject_unknown(regimes, "regimes", {"break"});
  if (const auto b = regimes.get_optional<std::string>("break"); b && !b->empty()) {
    c.break_after = MonthIndex::parse(*b);
    c.break_defaulted = false;
  }

  const auto test = tree.get_child("test", pt::ptree());
  reject_unknown(test, "test", kTestKeys);
  auto& p = c.params;
  try {
    if (auto v = test.get_optional<std::string>("min_window")) p.policy = WindowPolicy::parse(*v);
    if (auto v = test.get_optional<std::string>("lags")) p.spec = AdfSpec::parse(*v);
    if (auto v = test.get_optional<std::string>("level")) p.level = parse_level(*v);
    if (auto v = test.get_optional<std::string>("min_duration")) p.min_duration = DurationRule::parse(*v);
    p.reps = test.get<std::size_t>("reps", p.reps);
    p.seed = test.get<std::uint64_t>("seed", p.seed);
    p.threads = test.get<unsigned>("threads", p.threads);
    p.svg = test.get<bool>("svg", p.svg);
  } catch (const pt::ptree_bad_data& e) {
    throw Error(ErrorCode::invalid_config, std::string("config: [test] ") + e.what());
  }
  p.cache_dir = test.get_optional<std::string>("cache_dir") ? resolve(test.get<std::string>("cache_dir"))
                                                            : out / "cache";

  for (const auto& [name, value] : tree.get_child("covariates", pt::ptree())) {
    auto spec = parse_covariate(name + "=" + value.get_value<std::string>());
    spec.path = resolve(spec.path.string());
    c.covariates.push_back(spec);
  }
  return c;
}

Error in_stage(const Error& e, const std::string& stage) {
  return Error(e.code(), "stage " + stage + ": " + e.detail());
}

bool skippable(ErrorCode code) {
  switch (code) {
    case ErrorCode::all_same_outcome:
    case ErrorCode::perfect_separation:
    case ErrorCode::insufficient_data:
    case ErrorCode::no_convergence:
    case ErrorCode::collinear_covariates:
      return true;
    default:
      return false;
  }
}

}  // namespace

void cmd_pipeline(const PipelineArgs& args) {
  const auto config = load_config(args.config, args.out);
  const fs::path& out = args.out;
  ensure_directory(out);
  Manifest manifest("pipeline");
  manifest.input("--config", args.config);

  // fundamentals
  const std::pair<const char*, const fs::path*> inputs[] = {
      {"s", &config.s},     {"cpi", &config.cpi},           {"cpi_star", &config.cpi_star},
      {"ppi", &config.ppi}, {"ppi_star", &config.ppi_star},
  };
  std::vector<Series> raw;
  for (const auto& [key, path] : inputs) {
    try {
      raw.push_back(read_series(*path, std::string("inputs.") + key, config.columns.date, config.columns.value));
    } catch (const Error& e) {
      throw in_stage(e, "ingest");
    }
    manifest.input(std::string("inputs.") + key, *path);
  }
  TrimReport trim;
  FundamentalSet fset = [&] {
    try {
      return build_fundamentals(raw[0], raw[1], raw[2], raw[3], raw[4], &trim);
    } catch (const Error& e) {
      throw in_stage(e, "fundamentals");
    }
  }();
  for (const auto& n : trim.notes) manifest.note(n);
  ensure_directory(out / "fundamentals");
  const std::pair<const char*, const Series*> fund_files[] = {
      {"s.csv", &fset.s},
      {"f_traded.csv", &fset.f_traded},
      {"f_nontraded.csv", &fset.f_nontraded},
      {"s_minus_fT.csv", &fset.s_minus_fT},
      {"s_minus_fN.csv", &fset.s_minus_fN},
  };
  for (const auto& [name, x] : fund_files) {
    write_series(out / "fundamentals" / name, *x);
    manifest.artifact(fs::path("fundamentals") / name);
  }

  if (config.break_defaulted) {
    manifest.note("regimes.break not set; managed regime ends " + kDefaultRegimeBreak.to_string());
  }
  const auto split = [&] {
    try {
      return split_regimes(fset, config.break_after);
    } catch (const Error& e) {
      throw in_stage(e, "regimes");
    }
  }();

  const std::pair<const char*, const FundamentalSet*> regimes[] = {
      {"full", &split.full}, {"managed", &split.managed}, {"free", &split.free}};
  const std::pair<const char*, Series FundamentalSet::*> variants[] = {
      {"s", &FundamentalSet::s},
      {"s_minus_fT", &FundamentalSet::s_minus_fT},
      {"s_minus_fN", &FundamentalSet::s_minus_fN}};

  // recursive tests
  nlohmann::json summary;
  std::ostringstream panels;
  std::vector<std::vector<TestOutcome>> outcomes;
  for (const auto& [regime, data] : regimes) {
    panels << "== " << regime << " regime: " << data->start().to_string() << "-" << data->end().to_string()
           << " ==\n\n";
    auto& row = outcomes.emplace_back();
    for (const auto& [variant, member] : variants) {
      const std::string stage = std::string("test [") + regime + "/" + variant + "]";
      progress(stage);
      try {
        const Series y = (data->*member).relabeled(variant);
        row.push_back(run_test(y, config.params));
        write_test_report(row.back(), config.params, out / "tests" / regime / variant, out, false, manifest);
      } catch (const Error& e) {
        throw in_stage(e, stage);
      }
      const auto& o = row.back();
      if (!o.cv_path.empty()) manifest.artifact(fs::relative(o.cv_path, out).lexically_normal());
      panels << format_panel(o) << "\n";
      auto level = [&](const std::vector<double>& cv) {
        nlohmann::json j;
        for (double q : kPanelLevels) j.push_back(cv[o.table.quantile_slot(q)]);
        return j;
      };
      summary["tests"][regime][variant] = {
          {"start", o.series.start().to_string()},
          {"end", o.series.end().to_string()},
          {"T", o.result.T},
          {"w0", o.result.w0},
          {"adf", o.result.adf_full},
          {"sadf", o.result.sadf.value},
          {"gsadf", o.result.gsadf.value},
          {"cv", {{"levels", kPanelLevels}, {"adf", level(o.table.adf_cv)},
                  {"sadf", level(o.table.sadf_cv)}, {"gsadf", level(o.table.gsadf_cv)}}},
          {"episodes", format_episodes(o.episodes)},
          {"episode_months", o.episodes.total_months()}};
    }
  }
  write_text(out / "tests.txt", panels.str());
  manifest.artifact("tests.txt");

  // logit on the bubble indicators
  if (config.covariates.empty()) {
    manifest.note("no [covariates] section; logit stage skipped");
  } else {
    const auto covariates = load_covariates(config.covariates, config.columns, manifest);
    std::ostringstream tables;
    for (std::size_t r = 0; r < std::size(regimes); ++r) {
      const auto& [regime, data] = regimes[r];
      const auto from = data->start();
      const auto to = data->end();
      const auto panel = [&] {
        try {
          return make_panel(covariates, from, to);
        } catch (const Error& e) {
          throw in_stage(e, std::string("logit [") + regime + "]");
        }
      }();
      for (std::size_t v = 0; v < std::size(variants); ++v) {
        const auto& variant = variants[v].first;
        const std::string where = std::string(regime) + "/" + variant;
        const auto indicator = to_indicator(outcomes[r][v].episodes, from, to);
        try {
          const auto fit = fit_logit(indicator, panel);
          const std::string title = std::string("Logit of R(") + variant + "), " + regime + " regime " +
                                    from.to_string() + "-" + to.to_string();
          write_logit_report(fit, title, out / "logit" / regime / variant, out, manifest);
          tables << format_logit_table(fit, title) << "\n";
          summary["logit"][regime][variant] = to_json(fit);
        } catch (const Error& e) {
          if (!skippable(e.code())) throw in_stage(e, "logit [" + where + "]");
          manifest.note("logit [" + where + "] skipped: " + e.what());
          summary["logit"][regime][variant] = {{"skipped", e.what()}};
          tables << "Logit of R(" << variant << "), " << regime << " regime: skipped (" << e.what()
                 << ")\n\n";
        }
      }
    }
    write_text(out / "logit.txt", tables.str());
    manifest.artifact("logit.txt");
  }
  write_json(out / "summary.json", summary);
  manifest.artifact("summary.json");

  auto params = config.params.to_json();
  params["break"] = config.break_after.to_string();
  params["break_defaulted"] = config.break_defaulted;
  params["date_column"] = config.columns.date;
  params["value_column"] = config.columns.value;
  params["common_start"] = trim.common_start.to_string();
  params["common_end"] = trim.common_end.to_string();
  nlohmann::json covs = nlohmann::json::array();
  for (const auto& c : config.covariates) covs.push_back({{"name", c.name}, {"transform", to_string(c.transform)}});
  params["covariates"] = covs;
  manifest.parameters() = params;
  manifest.write(out);
  std::cout << panels.str();
  std::cout << "pipeline artifacts written to " << out.string() << "\n";
}

}  // namespace bubbles::cli
