#include "mpnp/baselines/mode.hpp"

#include <map>
#include <stdexcept>

#include "mpnp/baselines/label_propagation.hpp"

namespace mpnp::baselines {

ModeVariant parse_mode_variant(const std::string& name) {
  if (name == "global") return ModeVariant::kGlobal;
  if (name == "population") return ModeVariant::kPopulation;
  if (name == "state") return ModeVariant::kState;
  throw std::invalid_argument("unknown mode variant '" + name + "'");
}

std::string mode_variant_name(ModeVariant variant) {
  switch (variant) {
    case ModeVariant::kGlobal: return "global";
    case ModeVariant::kPopulation: return "population";
    case ModeVariant::kState: return "state";
  }
  return "";
}

std::uint32_t most_common(std::span<const std::uint32_t> labels, std::size_t num_classes) {
  if (labels.empty()) throw std::invalid_argument("most_common: no labels");
  std::vector<std::size_t> counts(num_classes, 0);
  for (auto l : labels) {
    if (l >= num_classes) throw std::out_of_range("most_common: label out of range");
    ++counts[l];
  }
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < num_classes; ++c)
    if (counts[c] > counts[best]) best = c;
  return best;
}

std::uint32_t node_state(const graph::Graph& graph, graph::NodeId node) {
  if (graph.features().empty()) throw std::invalid_argument("node_state: graph has no features");
  return argmax(graph.features().row(node));
}

std::vector<std::uint32_t> mode_predict(const models::Episode& e, ModeVariant variant) {
  models::validate(e);
  const std::uint32_t global = most_common(e.context_labels, e.num_classes);
  std::vector<std::uint32_t> out(e.num_targets(), global);
  if (variant != ModeVariant::kState) return out;

  std::map<std::uint32_t, std::vector<std::uint32_t>> by_state;
  for (std::size_t i = 0; i < e.num_context(); ++i)
    by_state[node_state(*e.graph, e.context_ids[i])].push_back(e.context_labels[i]);
  std::map<std::uint32_t, std::uint32_t> mode_of;
  for (const auto& [state, labels] : by_state) mode_of[state] = most_common(labels, e.num_classes);
  for (std::size_t i = 0; i < e.num_targets(); ++i) {
    const auto it = mode_of.find(node_state(*e.graph, e.target_ids[i]));
    if (it != mode_of.end()) out[i] = it->second;
  }
  return out;
}

}  // namespace mpnp::baselines
