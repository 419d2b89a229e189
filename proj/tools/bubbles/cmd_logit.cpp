#include <iostream>

#include "artifacts.hpp"
#include "bubbles/csv.hpp"
#include "bubbles/datestamp.hpp"
#include "bubbles/error.hpp"
#include "commands.hpp"

namespace bubbles::cli {

namespace {

EpisodeSet read_episode_csv(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw Error(ErrorCode::io, "--episodes: file not found: " + path.string());
  const auto table = read_csv(path);
  const auto start_col = table.column("start");
  const auto end_col = table.column("end");
  if (!start_col || !end_col) {
    throw Error(ErrorCode::missing_column, "--episodes: " + path.string() + " needs start and end columns");
  }
  EpisodeSet set;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    Episode e;
    e.start = MonthIndex::parse(row.at(*start_col));
    e.end = MonthIndex::parse(row.at(*end_col));
    set.episodes.push_back(e);
  }
  return set;
}

}  // namespace

std::vector<Covariate> load_covariates(const std::vector<CovariateSpec>& specs,
                                       const ColumnNames& columns, Manifest& manifest) {
  std::vector<Covariate> out;
  for (const auto& c : specs) {
    const std::string role = "covariate:" + c.name;
    auto x = read_series(c.path, role, columns.date, columns.value);
    manifest.input(role, c.path);
    out.push_back({c.name, x.relabeled(c.name), c.transform});
  }
  return out;
}

void write_logit_report(const LogitFit& fit, const std::string& title, const fs::path& dir,
                        const fs::path& root, Manifest& manifest) {
  ensure_directory(dir);
  write_json(dir / "logit.json", to_json(fit));
  write_text(dir / "logit.txt", format_logit_table(fit, title));
  manifest.artifact(fs::relative(dir / "logit.json", root));
  manifest.artifact(fs::relative(dir / "logit.txt", root));
}

void cmd_logit(const LogitArgs& args) {
  if (args.indicator.has_value() == args.episodes.has_value()) {
    throw Error(ErrorCode::invalid_config, "give exactly one of --indicator or --episodes");
  }
  if (args.covariates.empty()) throw Error(ErrorCode::invalid_config, "at least one --covariate is required");

  Manifest manifest("logit");
  BubbleIndicator indicator;
  if (args.indicator) {
    const auto x = read_series(*args.indicator, "--indicator", args.columns.date, args.columns.value);
    manifest.input("--indicator", *args.indicator);
    indicator = indicator_from_series(x);
  } else {
    if (!args.from || !args.to) {
      throw Error(ErrorCode::invalid_config, "--episodes needs --from and --to to fix the indicator range");
    }
    const auto set = read_episode_csv(*args.episodes);
    manifest.input("--episodes", *args.episodes);
    indicator = to_indicator(set, MonthIndex::parse(*args.from), MonthIndex::parse(*args.to));
  }

  // optional restriction of the indicator range
  MonthIndex from = indicator.start;
  MonthIndex to = indicator.end();
  if (args.from) from = std::max(from, MonthIndex::parse(*args.from));
  if (args.to) to = std::min(to, MonthIndex::parse(*args.to));
  if (to < from) throw Error(ErrorCode::range_mismatch, "--from/--to leave an empty range");
  BubbleIndicator r{from, std::vector<int>(indicator.r.begin() + (from - indicator.start),
                                           indicator.r.begin() + (to - indicator.start) + 1)};

  std::vector<CovariateSpec> specs;
  for (const auto& text : args.covariates) specs.push_back(parse_covariate(text));
  const auto covariates = load_covariates(specs, args.columns, manifest);
  const auto panel = make_panel(covariates, from, to);
  const auto fit = fit_logit(r, panel);

  const std::string title = "Logit of R on covariates, " + from.to_string() + "-" + to.to_string();
  write_logit_report(fit, title, args.out, args.out, manifest);

  nlohmann::json covs = nlohmann::json::array();
  for (const auto& c : specs) covs.push_back({{"name", c.name}, {"transform", to_string(c.transform)}});
  manifest.parameters() = {{"from", from.to_string()},
                           {"to", to.to_string()},
                           {"covariates", covs},
                           {"date_column", args.columns.date},
                           {"value_column", args.columns.value}};
  manifest.write(args.out);
  std::cout << format_logit_table(fit, title);
}

}  // namespace bubbles::cli
