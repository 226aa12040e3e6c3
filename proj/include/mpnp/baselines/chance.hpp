#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mpnp/models/episode.hpp"

namespace mpnp::baselines {

inline constexpr std::size_t kMaxChanceClasses = 6;

using EpisodeClassifier = std::function<std::vector<std::uint32_t>(const models::Episode&)>;

/// Mean target accuracy of `classifier` over all N! relabellings of the
/// episode's classes (context and target labels permuted alike).
double chance_level_check(const EpisodeClassifier& classifier, const models::Episode& episode);

/// Same average for a fixed prediction vector against every relabelling of `truth`.
double chance_level_check(std::span<const std::uint32_t> predictions, std::span<const std::uint32_t> truth,
                          std::size_t num_classes);

}  // namespace mpnp::baselines
