#include "mpnp/models/episode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mpnp::models {
namespace {

std::size_t count_at(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

void check_range(FractionRange r, const char* what) {
  if (!(r.lo > 0.0 && r.lo <= r.hi && r.hi <= 1.0))
    throw std::invalid_argument(std::string(what) + " fraction range must satisfy 0 < lo <= hi <= 1");
}

const std::vector<std::uint32_t>& graph_labels(const graph::Graph& graph) {
  if (!graph.labels()) throw std::invalid_argument("episode sampling needs a labelled graph");
  return *graph.labels();
}

}  // namespace

void validate(const Episode& e) {
  if (!e.graph) throw std::invalid_argument("episode has no graph");
  if (e.context_ids.empty()) throw std::invalid_argument("episode has an empty context");
  if (e.context_labels.size() != e.context_ids.size())
    throw std::invalid_argument("episode: one label per context node required");
  if (e.target_ids.size() < e.context_ids.size() ||
      !std::equal(e.context_ids.begin(), e.context_ids.end(), e.target_ids.begin()))
    throw std::invalid_argument("episode: targets must start with the context");
  if (!e.target_labels.empty() && e.target_labels.size() != e.target_ids.size())
    throw std::invalid_argument("episode: target labels must cover every target");
  std::vector<char> seen(e.graph->num_nodes(), 0);
  for (auto t : e.target_ids) {
    if (t >= e.graph->num_nodes()) throw std::out_of_range("episode: target id out of range");
    if (seen[t]++) throw std::invalid_argument("episode: duplicate target id");
  }
  for (auto l : e.context_labels)
    if (l >= e.num_classes) throw std::out_of_range("episode: context label out of range");
  for (auto l : e.target_labels)
    if (l >= e.num_classes) throw std::out_of_range("episode: target label out of range");
}

Episode make_episode(const graph::Graph& graph, std::vector<NodeId> context_ids, std::span<const NodeId> target_ids,
                     std::span<const std::uint32_t> labels, std::size_t num_classes) {
  Episode e;
  e.graph = &graph;
  e.num_classes = num_classes;
  std::vector<char> in_context(graph.num_nodes(), 0);
  for (auto c : context_ids) {
    if (c >= graph.num_nodes()) throw std::out_of_range("make_episode: context id out of range");
    in_context[c] = 1;
  }
  e.context_ids = std::move(context_ids);
  e.target_ids = e.context_ids;
  for (auto t : target_ids) {
    if (t >= graph.num_nodes()) throw std::out_of_range("make_episode: target id out of range");
    if (!in_context[t]) e.target_ids.push_back(t);
  }
  if (labels.size() != graph.num_nodes()) throw std::invalid_argument("make_episode: one label per node required");
  for (auto c : e.context_ids) e.context_labels.push_back(labels[c]);
  for (auto t : e.target_ids) e.target_labels.push_back(labels[t]);
  validate(e);
  return e;
}

Episode sample_episode(const graph::Graph& graph, FractionRange context, FractionRange extra, Rng& rng,
                       Labelling labelling, std::size_t num_classes) {
  check_range(context, "context");
  check_range(extra, "target");
  const auto& labels = graph_labels(graph);
  const std::size_t n = graph.num_nodes();
  const double u = context.lo + (context.hi - context.lo) * uniform01(rng);
  const std::size_t m = std::clamp<std::size_t>(count_at(u, n), 1, n);
  const double v = extra.lo + (extra.hi - extra.lo) * uniform01(rng);
  const std::size_t k = std::min(count_at(v, n), n - m);

  const auto order = sample_without_replacement(rng, n, m + k);
  std::vector<std::uint32_t> classes(num_classes);
  std::iota(classes.begin(), classes.end(), 0u);
  if (labelling == Labelling::kArbitrary) std::shuffle(classes.begin(), classes.end(), rng);

  Episode e;
  e.graph = &graph;
  e.num_classes = num_classes;
  for (std::size_t i = 0; i < m + k; ++i) {
    const auto id = static_cast<NodeId>(order[i]);
    if (labels[id] >= num_classes) throw std::out_of_range("sample_episode: label out of range");
    const auto label = classes[labels[id]];
    if (i < m) {
      e.context_ids.push_back(id);
      e.context_labels.push_back(label);
    }
    e.target_ids.push_back(id);
    e.target_labels.push_back(label);
  }
  return e;
}

Episode rate_episode(const graph::Graph& graph, double rate, Rng& rng, std::size_t num_classes) {
  if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("sampling rate must be in (0, 1]");
  const auto& labels = graph_labels(graph);
  const std::size_t n = graph.num_nodes();
  const std::size_t m = std::clamp<std::size_t>(count_at(rate, n), 1, n);
  auto picked = sample_without_replacement(rng, n, m);
  std::vector<NodeId> context(picked.begin(), picked.end());
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  return make_episode(graph, std::move(context), all, labels, num_classes);
}

}  // namespace mpnp::models
