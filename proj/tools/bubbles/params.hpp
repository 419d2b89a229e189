#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bubbles/adf.hpp"
#include "bubbles/dgp.hpp"
#include "bubbles/logit.hpp"
#include "bubbles/recursive.hpp"

namespace bubbles::cli {

namespace fs = std::filesystem;

/// Levels printed in every panel and simulated into every table.
inline const std::vector<double> kPanelLevels{0.90, 0.95, 0.99};

/// "N" or "logT".
struct DurationRule {
  bool log_t = false;
  std::size_t fixed = 1;

  std::size_t resolve(std::size_t T) const;
  std::string to_string() const;
  static DurationRule parse(std::string_view text);
};

/// Parameters shared by test, critvals, stamp and pipeline.
struct TestParams {
  WindowPolicy policy = WindowPolicy::phillips();
  AdfSpec spec = AdfSpec::fixed(0);
  double level = 0.95;
  DurationRule min_duration;
  std::size_t reps = 2000;
  std::uint64_t seed = 20240112;
  unsigned threads = 0;
  std::optional<fs::path> cv_file;
  std::optional<fs::path> cache_dir;
  bool svg = true;

  nlohmann::json to_json() const;
};

/// One of 0.90, 0.95, 0.99; anything else is Error(invalid_config).
double parse_level(std::string_view text);

/// "name=path" or "name=path:log" / "name=path:level".
struct CovariateSpec {
  std::string name;
  fs::path path;
  Transform transform = Transform::level;
};
CovariateSpec parse_covariate(std::string_view text);

/// "start:length" with a 1-based start.
BubbleWindow parse_window(std::string_view text);

}  // namespace bubbles::cli
