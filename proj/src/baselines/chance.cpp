#include "mpnp/baselines/chance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mpnp::baselines {
namespace {

void check_classes(std::size_t n) {
  if (n == 0) throw std::invalid_argument("chance_level_check: num_classes must be positive");
  if (n > kMaxChanceClasses) throw std::invalid_argument("chance_level_check: at most 6 classes can be enumerated");
}

template <class Fn>
double average_over_permutations(std::size_t num_classes, Fn&& accuracy_under) {
  std::vector<std::uint32_t> perm(num_classes);
  std::iota(perm.begin(), perm.end(), 0u);
  double total = 0.0;
  std::size_t count = 0;
  do {
    total += accuracy_under(perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / static_cast<double>(count);
}

double matches(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
               const std::vector<std::uint32_t>& perm) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += pred[i] == perm[truth[i]];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace

double chance_level_check(std::span<const std::uint32_t> predictions, std::span<const std::uint32_t> truth,
                          std::size_t num_classes) {
  check_classes(num_classes);
  if (truth.empty() || predictions.size() != truth.size())
    throw std::invalid_argument("chance_level_check: predictions and truth must be non-empty and equal length");
  for (auto t : truth)
    if (t >= num_classes) throw std::out_of_range("chance_level_check: label out of range");
  return average_over_permutations(num_classes,
                                   [&](const std::vector<std::uint32_t>& perm) { return matches(predictions, truth, perm); });
}

double chance_level_check(const EpisodeClassifier& classifier, const models::Episode& episode) {
  check_classes(episode.num_classes);
  models::validate(episode);
  if (!episode.labelled_targets()) throw std::invalid_argument("chance_level_check: targets need labels");
  return average_over_permutations(episode.num_classes, [&](const std::vector<std::uint32_t>& perm) {
    models::Episode relabelled = episode;
    for (auto& l : relabelled.context_labels) l = perm[l];
    for (auto& l : relabelled.target_labels) l = perm[l];
    const auto pred = classifier(relabelled);
    if (pred.size() != episode.num_targets()) throw std::invalid_argument("chance_level_check: one prediction per target");
    return matches(pred, episode.target_labels, perm);
  });
}

}  // namespace mpnp::baselines
