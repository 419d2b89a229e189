#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "artifacts.hpp"
#include "bubbles/logit.hpp"
#include "params.hpp"

namespace bubbles::cli {

namespace fs = std::filesystem;

struct ColumnNames {
  std::string date = "date";
  std::string value = "value";
};

struct FundamentalsArgs {
  fs::path s, cpi, cpi_star, ppi, ppi_star;
  ColumnNames columns;
  fs::path out = "fundamentals";
};

struct TestArgs {
  fs::path input;
  ColumnNames columns;
  std::string label;
  bool take_log = false;
  TestParams params;
  fs::path out = "test";
};

struct CritvalsArgs {
  std::size_t T = 0;
  TestParams params;
  fs::path out = "critvals";
};

struct StampArgs {
  fs::path result;
  fs::path cv;
  TestParams params;
  fs::path out = "stamp";
};

struct LogitArgs {
  std::optional<fs::path> indicator;
  std::optional<fs::path> episodes;
  std::optional<std::string> from, to;
  std::vector<std::string> covariates;
  ColumnNames columns;
  fs::path out = "logit";
};

struct PipelineArgs {
  fs::path config;
  fs::path out = "run";
};

struct SimulateArgs {
  std::size_t T = 300;
  double growth = 1.05;
  std::vector<std::string> windows;
  double innovation_sd = 1.0;
  std::optional<double> bubble_sd;
  std::string collapse = "reset";
  std::uint64_t seed = 1;
  std::string start = "1985M01";
  std::optional<fs::path> demo_kit;
  fs::path out = "simulate";
};

/// Reads each covariate file and records its digest.
std::vector<Covariate> load_covariates(const std::vector<CovariateSpec>& specs,
                                       const ColumnNames& columns, Manifest& manifest);

/// logit.json and logit.txt in `dir`, recorded relative to `root`.
void write_logit_report(const LogitFit& fit, const std::string& title, const fs::path& dir,
                        const fs::path& root, Manifest& manifest);

void cmd_fundamentals(const FundamentalsArgs& args);
void cmd_test(const TestArgs& args);
void cmd_critvals(const CritvalsArgs& args);
void cmd_stamp(const StampArgs& args);
void cmd_logit(const LogitArgs& args);
void cmd_pipeline(const PipelineArgs& args);
void cmd_simulate(const SimulateArgs& args);

}  // namespace bubbles::cli
