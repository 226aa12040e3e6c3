#include "mpnp/baselines/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mpnp/baselines/label_propagation.hpp"

namespace mpnp::baselines {

using ad::Tensor;
using ad::Var;

NormalizedAdjacency normalized_adjacency(const graph::Graph& graph) {
  NormalizedAdjacency adj;
  const std::size_t n = graph.num_nodes();
  std::vector<double> inv_sqrt(n);
  for (std::size_t v = 0; v < n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(graph.degree(v) + 1));
  for (std::uint32_t v = 0; v < n; ++v) {
    adj.src.push_back(v);
    adj.dst.push_back(v);
    adj.weight.push_back(inv_sqrt[v] * inv_sqrt[v]);
    for (auto u : graph.neighbors(v)) {
      adj.src.push_back(u);
      adj.dst.push_back(v);
      adj.weight.push_back(inv_sqrt[u] * inv_sqrt[v]);
    }
  }
  return adj;
}

Gnn::Gnn(GnnConfig config, std::uint64_t seed) : config_(config) {
  if (config.feature_dim == 0 || config.num_classes == 0 || config.h == 0 || config.layers == 0)
    throw std::invalid_argument("gnn config: dimensions must be positive");
  Rng rng(derive_seed(seed, 0x6e6eULL));
  std::size_t in = config.feature_dim;
  for (std::size_t l = 0; l < config.layers; ++l) {
    const std::string name = "gnn.layer" + std::to_string(l);
    LayerIds ids{};
    ids.gcn = params_.add_uniform(name + ".gcn", {config.h, in}, in, rng);
    ids.skip = params_.add_uniform(name + ".skip", {config.h, in}, in, rng);
    ids.bias = params_.add_uniform(name + ".bias", {config.h}, in, rng);
    layers_.push_back(ids);
    in = config.h;
  }
  head_weight_ = params_.add_uniform("gnn.head.weight", {config.num_classes, in}, in, rng);
  head_bias_ = params_.add_uniform("gnn.head.bias", {config.num_classes}, in, rng);
}

std::vector<Var> Gnn::bind(ad::Tape& tape) {
  std::vector<Var> vars;
  for (auto& p : params_) vars.push_back(tape.parameter(p));
  return vars;
}

Var Gnn::forward(ad::Tape& tape, std::span<const Var> b, const graph::Graph& graph) const {
  const Tensor& x = graph.features();
  if (x.empty() || x.cols() != config_.feature_dim || x.rows() != graph.num_nodes())
    throw std::invalid_argument("gnn: graph features must be [n x " + std::to_string(config_.feature_dim) + "]");
  const auto adj = normalized_adjacency(graph);
  Var h = tape.constant(x);
  for (const auto& l : layers_) {
    Var spread = ad::segment_sum(ad::scale_rows(ad::gather_rows(ad::linear(b[l.gcn], h), adj.src), adj.weight),
                                 adj.dst, graph.num_nodes());
    h = ad::relu(ad::add(ad::linear(b[l.skip], b[l.bias], h), spread));
  }
  return ad::linear(b[head_weight_], b[head_bias_], h);
}

Tensor Gnn::logits(const graph::Graph& graph) const {
  ad::Tape tape(false);
  std::vector<Var> vars;
  for (const auto& p : params_) vars.push_back(tape.constant(p.value));
  return forward(tape, vars, graph).value();
}

std::vector<std::uint32_t> Gnn::predict(const graph::Graph& graph) const {
  const Tensor l = logits(graph);
  std::vector<std::uint32_t> out(l.rows());
  for (std::size_t i = 0; i < l.rows(); ++i) out[i] = argmax(l.row(i));
  return out;
}

void train_gnn(Gnn& gnn, std::span<const graph::Graph* const> graphs, const GnnTrainConfig& config, std::uint64_t seed,
               const std::function<void(std::size_t, double)>& on_epoch) {
  if (graphs.empty()) throw std::invalid_argument("train_gnn: no training graphs");
  for (const auto* g : graphs)
    if (!g->labels()) throw std::invalid_argument("train_gnn: training graphs need labels");
  ad::AdamConfig adam;
  adam.learning_rate = config.learning_rate;
  ad::AdamState state(gnn.parameters(), adam);
  Rng rng(derive_seed(seed, 0x7a1bULL));
  std::vector<std::size_t> order(graphs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (auto i : order) {
      const graph::Graph& g = *graphs[i];
      gnn.parameters().zero_grad();
      ad::Tape tape;
      const auto vars = gnn.bind(tape);
      Var loss = ad::scale(ad::softmax_cross_entropy(gnn.forward(tape, vars, g), *g.labels()),
                           1.0 / static_cast<double>(g.num_nodes()));
      tape.backward(loss);
      ad::adam_step(gnn.parameters(), state);
      total += loss.value().item();
    }
    if (on_epoch) on_epoch(epoch, total / static_cast<double>(graphs.size()));
  }
}

}  // namespace mpnp::baselines
