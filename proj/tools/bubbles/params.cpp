#include "params.hpp"

#include <charconv>
#include <cmath>

#include "bubbles/datestamp.hpp"
#include "bubbles/dgp.hpp"
#include "bubbles/error.hpp"

namespace bubbles::cli {

namespace {

std::size_t parse_count(std::string_view text, const std::string& what) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::invalid_config, what + " must be a non-negative integer, got '" +
                                               std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::size_t DurationRule::resolve(std::size_t T) const { return log_t ? log_t_duration(T) : fixed; }

std::string DurationRule::to_string() const { return log_t ? "logT" : std::to_string(fixed); }

DurationRule DurationRule::parse(std::string_view text) {
  if (text == "logT" || text == "logt") return {true, 0};
  const auto n = parse_count(text, "min-duration");
  if (n < 1) throw Error(ErrorCode::invalid_config, "min-duration must be at least 1");
  return {false, n};
}

nlohmann::json TestParams::to_json() const {
  nlohmann::json j{{"min_window", policy.to_string()},
                   {"lags", spec.to_string()},
                   {"level", level},
                   {"min_duration", min_duration.to_string()},
                   {"reps", reps},
                   {"seed", seed},
                   {"threads", threads},
                   {"quantiles", kPanelLevels},
                   {"svg", svg}};
  if (cv_file) j["cv_file"] = cv_file->generic_string();
  return j;
}

double parse_level(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec == std::errc() && ptr == end) {
    for (double level : kPanelLevels) {
      if (std::abs(value - level) < 1e-9) return level;
    }
  }
  throw Error(ErrorCode::invalid_config,
              "level must be one of 0.90, 0.95, 0.99, got '" + std::string(text) + "'");
}

CovariateSpec parse_covariate(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw Error(ErrorCode::invalid_config,
                "covariate must look like name=path[:log], got '" + std::string(text) + "'");
  }
  CovariateSpec c;
  c.name = std::string(text.substr(0, eq));
  std::string_view rest = text.substr(eq + 1);
  const auto colon = rest.rfind(':');
  if (colon != std::string_view::npos) {
    const auto suffix = rest.substr(colon + 1);
    if (suffix == "log" || suffix == "level") {
      c.transform = parse_transform(suffix);
      rest = rest.substr(0, colon);
    }
  }
  c.path = fs::path(std::string(rest));
  return c;
}

BubbleWindow parse_window(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::invalid_config,
                "bubble window must look like start:length, got '" + std::string(text) + "'");
  }
  return {parse_count(text.substr(0, colon), "window start"),
          parse_count(text.substr(colon + 1), "window length")};
}

}  // namespace bubbles::cli
