#include "mpnp/harness/active.hpp"

#include <algorithm>
#include <numeric>

namespace mpnp::harness {

double ActiveCurve::auc() const {
  if (accuracy.empty()) return 0.0;
  return std::accumulate(accuracy.begin(), accuracy.end(), 0.0) / static_cast<double>(accuracy.size());
}

namespace {

double accuracy_all(const PredictOutput& out, const models::Episode& e) {
  std::vector<std::uint32_t> pred(e.graph->num_nodes()), truth(e.graph->num_nodes());
  for (std::size_t i = 0; i < e.num_targets(); ++i) {
    pred[e.target_ids[i]] = out.labels[i];
    truth[e.target_ids[i]] = e.target_labels[i];
  }
  return compute_accuracy(pred, truth);
}

}  // namespace

ActiveCurve active_sampling(const Predictor& predictor, const graph::Graph& graph,
                            std::vector<graph::NodeId> context, std::size_t steps, PickRule rule,
                            std::size_t num_classes, Rng* rng) {
  if (!graph.labels()) throw std::invalid_argument("active_sampling: graph has no labels");
  const std::size_t n = graph.num_nodes();
  std::vector<char> labelled(n, 0);
  for (auto id : context) {
    if (id >= n || labelled[id]) throw std::invalid_argument("active_sampling: bad initial context");
    labelled[id] = 1;
  }
  if (steps > n - context.size())
    throw std::invalid_argument("active_sampling: more steps than unlabelled nodes");
  if (rule == PickRule::kRandom && rng == nullptr) throw std::invalid_argument("active_sampling: random picks need an rng");

  std::vector<graph::NodeId> all(n);
  std::iota(all.begin(), all.end(), graph::NodeId{0});
  const auto& labels = *graph.labels();

  ActiveCurve curve;
  for (std::size_t step = 0;; ++step) {
    const auto episode = models::make_episode(graph, context, all, labels, num_classes);
    const auto out = predictor(episode);
    curve.accuracy.push_back(accuracy_all(out, episode));
    if (step == steps) break;

    graph::NodeId pick = 0;
    if (rule == PickRule::kUncertainty) {
      if (out.uncertainty.size() != episode.num_targets())
        throw std::invalid_argument("active_sampling: predictor has no uncertainty output");
      double best = -1.0;
      bool found = false;
      for (std::size_t i = 0; i < episode.num_targets(); ++i) {
        const auto id = episode.target_ids[i];
        if (labelled[id]) continue;
        const double u = out.uncertainty[i];
        if (!found || u > best || (u == best && id < pick)) {
          best = u;
          pick = id;
          found = true;
        }
      }
    } else {
      std::vector<graph::NodeId> free;
      for (graph::NodeId id = 0; id < n; ++id)
        if (!labelled[id]) free.push_back(id);
      pick = free[uniform_index(*rng, 0, free.size() - 1)];
    }
    labelled[pick] = 1;
    context.push_back(pick);
    curve.picked.push_back(pick);
  }
  return curve;
}

std::size_t ActiveComparison::wins() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < uncertainty.size(); ++i) w += uncertainty[i].auc() > random[i].auc();
  return w;
}

double ActiveComparison::win_rate() const {
  return uncertainty.empty() ? 0.0 : static_cast<double>(wins()) / static_cast<double>(uncertainty.size());
}

ActiveComparison compare_active(const Predictor& predictor, std::span<const graph::Graph> graphs,
                                const ActiveOptions& opt) {
  if (graphs.empty()) throw std::invalid_argument("compare_active: no graphs");
  ActiveComparison out;
  for (std::size_t k = 0; k < opt.episodes; ++k) {
    const auto& g = graphs[k % graphs.size()];
    Rng rng(derive_seed(opt.seed, k + 1));
    const auto m = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(opt.initial_rate * static_cast<double>(g.num_nodes()))), 1,
        g.num_nodes());
    const auto drawn = sample_without_replacement(rng, g.num_nodes(), m);
    std::vector<graph::NodeId> context(drawn.begin(), drawn.end());
    const std::size_t steps = std::min(opt.steps, g.num_nodes() - m);
    out.uncertainty.push_back(
        active_sampling(predictor, g, context, steps, PickRule::kUncertainty, opt.num_classes));
    out.random.push_back(active_sampling(predictor, g, context, steps, PickRule::kRandom, opt.num_classes, &rng));
  }
  return out;
}

}  // namespace mpnp::harness
