#include "mpnp/ca/step.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mpnp::ca {
namespace {

void check_state(const graph::Graph& graph, std::span<const std::uint32_t> state) {
  if (state.size() != graph.num_nodes()) throw std::invalid_argument("state size does not match node count");
  for (auto s : state)
    if (s > 1) throw std::invalid_argument("cell state must be 0 or 1, got " + std::to_string(s));
}

}  // namespace

std::vector<std::size_t> live_neighbour_counts(const graph::Graph& graph, std::span<const std::uint32_t> state) {
  check_state(graph, state);
  std::vector<std::size_t> counts(graph.num_nodes(), 0);
  for (std::size_t i = 0; i < graph.num_nodes(); ++i)
    for (auto j : graph.neighbors(i)) counts[i] += state[j];
  return counts;
}

State life_step(const graph::Graph& graph, std::span<const std::uint32_t> state, const LifeRule& rule) {
  const auto counts = live_neighbour_counts(graph, state);
  State next(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (graph.degree(i) > kMaxLifeNeighbours)
      throw std::invalid_argument("life_step: node degree exceeds 8 neighbours");
    next[i] = state[i] ? rule.survives(counts[i]) : rule.born(counts[i]);
  }
  return next;
}

State density_step(const graph::Graph& graph, std::span<const std::uint32_t> state, const DensityRule& rule) {
  const auto counts = live_neighbour_counts(graph, state);
  State next(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const std::size_t deg = graph.degree(i);
    const double d = deg == 0 ? 0.0 : static_cast<double>(counts[i]) / static_cast<double>(deg);
    next[i] = static_cast<std::uint32_t>(state[i] ? rule.survive(d) : rule.birth(d));
  }
  return next;
}

State step(const graph::Graph& graph, std::span<const std::uint32_t> state, const Rule& rule) {
  return std::visit(
      [&](const auto& r) -> State {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, LifeRule>) return life_step(graph, state, r);
        else return density_step(graph, state, r);
      },
      rule);
}

std::array<std::size_t, 18> condition_census(const graph::Graph& graph, std::span<const std::uint32_t> state) {
  const auto counts = live_neighbour_counts(graph, state);
  std::array<std::size_t, 18> census{};
  for (std::size_t i = 0; i < state.size(); ++i)
    if (counts[i] <= kMaxLifeNeighbours) ++census[state[i] * 9 + counts[i]];
  return census;
}

bool covers_all_conditions(const graph::Graph& graph, std::span<const std::uint32_t> state) {
  const auto census = condition_census(graph, state);
  return std::all_of(census.begin(), census.end(), [](std::size_t c) { return c > 0; });
}

}  // namespace mpnp::ca
