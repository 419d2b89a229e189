#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "bubbles/datestamp.hpp"
#include "bubbles/month.hpp"
#include "bubbles/series.hpp"

namespace bubbles {

enum class CollapseRule { reset_to_zero, fraction };

/// Bubble active on observations start..start+length-1 (1-based).
struct BubbleWindow {
  std::size_t start = 0;
  std::size_t length = 0;
};

struct BubbleDgpConfig {
  std::size_t T = 0;
  /// Discount factor; the bubble grows by 1/alpha per period.
  double alpha = 1.0 / 1.05;
  std::vector<BubbleWindow> bubble_windows;
  double innovation_sd = 1.0;
  /// Innovation scale inside bubbles; defaults to innovation_sd. Zero gives
  /// a noise-free bubble path.
  std::optional<double> bubble_sd;
  CollapseRule collapse = CollapseRule::reset_to_zero;
  /// Share of the bubble kept after collapse when collapse == fraction.
  double collapse_fraction = 0.0;
  std::uint64_t seed = 1;
  MonthIndex start{1985, 1};
};

struct DgpOutput {
  Series series;
  Series fundamental;
  std::vector<double> bubble;
  EpisodeSet true_episodes;
};

/// Random-walk fundamental plus an explosive AR(1) component
/// η_t = η_{t-1} / alpha + ε_t inside each window, started from
/// innovation_sd / 10 above the post-collapse level. Fundamental innovations
/// come from stream 0 and bubble innovations from stream 1 of `seed`.
/// Throws Error(invalid_config) for overlapping or out-of-range windows,
/// alpha outside (0, 1), or a non-positive innovation_sd.
DgpOutput generate(const BubbleDgpConfig& config);

nlohmann::json truth_to_json(const BubbleDgpConfig& config, const DgpOutput& out);

}  // namespace bubbles
