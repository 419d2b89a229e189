#include <cstdio>
#include <fstream>
#include <iostream>

#include "artifacts.hpp"
#include "bubbles/error.hpp"
#include "commands.hpp"
#include "run_test.hpp"

namespace bubbles::cli {

namespace {

nlohmann::json read_json_file(const fs::path& path, const std::string& flag) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, flag + ": file not found: " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, flag + ": " + path.string() + ": " + e.what());
  }
}

}  // namespace

void cmd_test(const TestArgs& args) {
  Manifest manifest("test");
  auto y = read_series(args.input, "--input", args.columns.date, args.columns.value);
  manifest.input("--input", args.input);
  if (args.params.cv_file) manifest.input("--cv", *args.params.cv_file);
  if (args.take_log) y = log_series(y);
  y = y.relabeled(args.label.empty() ? args.input.stem().string() : args.label);

  const auto outcome = run_test(y, args.params);
  write_test_report(outcome, args.params, args.out, args.out, !args.params.cv_file, manifest);

  auto params = args.params.to_json();
  params["date_column"] = args.columns.date;
  params["value_column"] = args.columns.value;
  params["label"] = y.label();
  params["log"] = args.take_log;
  params["T"] = y.size();
  params["w0"] = outcome.result.w0;
  params["resolved_min_duration"] = outcome.episodes.min_duration;
  params["cv_fingerprint"] = outcome.table.fingerprint();
  manifest.parameters() = params;
  manifest.write(args.out);
  std::cout << format_panel(outcome);
}

void cmd_critvals(const CritvalsArgs& args) {
  if (args.T == 0) throw Error(ErrorCode::invalid_config, "--T is required");
  auto params = args.params;
  params.cv_file.reset();
  params.cache_dir.reset();
  std::string source;
  fs::path path;
  const auto table = obtain_critical_values(args.T, params, source, path);

  Manifest manifest("critvals");
  ensure_directory(args.out);
  write_json(args.out / "critical_values.json", to_json(table));
  manifest.artifact("critical_values.json");
  auto p = params.to_json();
  p["T"] = args.T;
  p["w0"] = table.w0;
  p["cv_fingerprint"] = table.fingerprint();
  manifest.parameters() = p;
  manifest.write(args.out);

  std::printf("T=%zu  w0=%zu  lags=%s  reps=%zu  seed=%llu\n", args.T, table.w0,
              params.spec.to_string().c_str(), params.reps,
              static_cast<unsigned long long>(params.seed));
  std::printf("%-8s%10s%10s%10s\n", "", "90%", "95%", "99%");
  auto row = [&](const char* name, const std::vector<double>& cv) {
    std::printf("%-8s", name);
    for (double q : kPanelLevels) std::printf("%10.4f", cv[table.quantile_slot(q)]);
    std::printf("\n");
  };
  row("ADF", table.adf_cv);
  row("SADF", table.sadf_cv);
  row("GSADF", table.gsadf_cv);
}

void cmd_stamp(const StampArgs& args) {
  const auto rj = read_json_file(args.result, "--result");
  const auto result = recursive_result_from_json(rj);
  const auto table = cv_table_from_json(read_json_file(args.cv, "--cv"));
  MonthIndex start;
  std::string label = "series";
  try {
    start = MonthIndex::parse(rj.at("series").at("start").get<std::string>());
    label = rj.at("series").value("label", label);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::invalid_config, "--result: " + args.result.string() + " has no series.start");
  }

  const auto min_duration = args.params.min_duration.resolve(result.T);
  const auto episodes = stamp_episodes(result, table, start, min_duration, args.params.level);

  Manifest manifest("stamp");
  manifest.input("--result", args.result);
  manifest.input("--cv", args.cv);
  ensure_directory(args.out);
  write_json(args.out / "episodes.json", to_json(episodes));
  manifest.artifact("episodes.json");
  {
    std::ofstream csv(args.out / "episodes.csv", std::ios::binary);
    write_episode_csv(episodes, csv);
  }
  manifest.artifact("episodes.csv");
  const auto end = start + static_cast<long>(result.T) - 1;
  write_series(args.out / "indicator.csv", to_indicator(episodes, start, end).to_series("R"));
  manifest.artifact("indicator.csv");
  if (args.params.svg) {
    std::ofstream svg(args.out / "bsadf.svg", std::ios::binary);
    write_bsadf_svg(result, table.bsadf_cv[table.quantile_slot(args.params.level)], episodes, start,
                    "BSADF: " + label, svg);
    manifest.artifact("bsadf.svg");
  }
  manifest.parameters() = {{"level", args.params.level},
                           {"min_duration", args.params.min_duration.to_string()},
                           {"resolved_min_duration", min_duration},
                           {"cv_fingerprint", table.fingerprint()},
                           {"svg", args.params.svg}};
  manifest.write(args.out);
  std::cout << label << ": " << format_episodes(episodes) << "\n";
}

}  // namespace bubbles::cli
