#include "bubbles/dgp.hpp"

#include <algorithm>

#include "bubbles/rng.hpp"

namespace bubbles {

namespace {

void validate(const BubbleDgpConfig& c) {
  if (c.T < 2) throw Error(ErrorCode::invalid_config, "T must be at least 2");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) {
    throw Error(ErrorCode::invalid_config, "alpha must lie in (0, 1) so that 1/alpha > 1");
  }
  if (!(c.innovation_sd > 0.0)) throw Error(ErrorCode::invalid_config, "innovation_sd must be positive");
  if (c.bubble_sd && !(*c.bubble_sd >= 0.0)) {
    throw Error(ErrorCode::invalid_config, "bubble_sd must be non-negative");
  }
  if (c.collapse == CollapseRule::fraction &&
      !(c.collapse_fraction >= 0.0 && c.collapse_fraction < 1.0)) {
    throw Error(ErrorCode::invalid_config, "collapse fraction must lie in [0, 1)");
  }
  auto windows = c.bubble_windows;
  std::sort(windows.begin(), windows.end(),
            [](const BubbleWindow& a, const BubbleWindow& b) { return a.start < b.start; });
  std::size_t previous_end = 0;
  for (const auto& w : windows) {
    if (w.start < 1 || w.length < 1 || w.start + w.length - 1 > c.T) {
      throw Error(ErrorCode::invalid_config,
                  "bubble window (" + std::to_string(w.start) + ", " + std::to_string(w.length) +
                      ") outside 1.." + std::to_string(c.T));
    }
    if (w.start <= previous_end) throw Error(ErrorCode::invalid_config, "bubble windows overlap");
    previous_end = w.start + w.length - 1;
  }
}

}  // namespace

DgpOutput generate(const BubbleDgpConfig& config) {
  validate(config);
  const std::size_t T = config.T;
  const double growth = 1.0 / config.alpha;
  const double bubble_sd = config.bubble_sd.value_or(config.innovation_sd);
  const double seed_level = config.innovation_sd / 10.0;

  NormalStream fundamental_noise(config.seed, 0);
  NormalStream bubble_noise(config.seed, 1);

  std::vector<double> fundamental(T);
  double level = 0.0;
  for (auto& f : fundamental) {
    level += config.innovation_sd * fundamental_noise();
    f = level;
  }

  auto windows = config.bubble_windows;
  std::sort(windows.begin(), windows.end(),
            [](const BubbleWindow& a, const BubbleWindow& b) { return a.start < b.start; });

  std::vector<double> bubble(T, 0.0);
  double residual = 0.0;  // level left behind by the last collapse
  std::size_t next = 0;
  for (std::size_t t = 1; t <= T;) {
    if (next < windows.size() && windows[next].start == t) {
      const auto& w = windows[next];
      double eta = residual + seed_level;
      for (std::size_t s = w.start; s < w.start + w.length; ++s) {
        eta = growth * eta + bubble_sd * bubble_noise();
        bubble[s - 1] = eta;
      }
      residual = config.collapse == CollapseRule::fraction ? config.collapse_fraction * eta : 0.0;
      t = w.start + w.length;
      ++next;
    } else {
      bubble[t - 1] = residual;
      ++t;
    }
  }

  std::vector<double> observed(T);
  for (std::size_t t = 0; t < T; ++t) observed[t] = fundamental[t] + bubble[t];

  EpisodeSet truth;
  truth.min_duration = 1;
  truth.cv_level = 0.0;
  for (const auto& w : windows) {
    Episode e;
    e.first = w.start;
    e.last = w.start + w.length - 1;
    e.start = config.start + static_cast<long>(e.first - 1);
    e.end = config.start + static_cast<long>(e.last - 1);
    truth.episodes.push_back(e);
  }
  return {Series(config.start, std::move(observed), "y"),
          Series(config.start, std::move(fundamental), "fundamental"), std::move(bubble),
          std::move(truth)};
}

nlohmann::json truth_to_json(const BubbleDgpConfig& config, const DgpOutput& out) {
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& e : out.true_episodes.episodes) {
    windows.push_back({{"start", e.start.to_string()},
                       {"end", e.end.to_string()},
                       {"first", e.first},
                       {"last", e.last},
                       {"length", e.length()}});
  }
  return {{"T", config.T},
          {"alpha", config.alpha},
          {"growth", 1.0 / config.alpha},
          {"innovation_sd", config.innovation_sd},
          {"bubble_sd", config.bubble_sd.value_or(config.innovation_sd)},
          {"collapse", config.collapse == CollapseRule::fraction ? "fraction" : "reset_to_zero"},
          {"collapse_fraction", config.collapse_fraction},
          {"seed", config.seed},
          {"generator", std::string(kGeneratorId)},
          {"start", config.start.to_string()},
          {"windows", windows}};
}

}  // namespace bubbles
