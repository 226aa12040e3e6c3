#include "mpnp/analytic/life_solution.hpp"

#include <stdexcept>

namespace mpnp::analytic {

using ad::Tensor;
using ad::Var;

namespace {

constexpr std::size_t kCountWidth = 9;

// min(s, 1) = s - ReLU(s - 1): turns occurrence counts into a max over binary codes.
Var saturate(Var s) { return ad::sub(s, ad::relu(ad::add_scalar(s, -1.0))); }

void check_state(const graph::Graph& graph, std::span<const std::uint32_t> state) {
  if (state.size() != graph.num_nodes()) throw std::invalid_argument("analytic: one state per node required");
  for (auto s : state)
    if (s > 1) throw std::invalid_argument("analytic: states must be 0 or 1");
}

AnalyticLatent to_latent(const Tensor& t) {
  AnalyticLatent out{};
  std::copy(t.values().begin(), t.values().end(), out.begin());
  return out;
}

}  // namespace

OneHotLayer build_one_hot_layer(std::size_t n) {
  if (n == 0) throw std::invalid_argument("build_one_hot_layer: N must be positive");
  OneHotLayer layer;
  layer.width = n;
  layer.maxout_weight = Tensor({2 * n, 1});
  layer.maxout_bias = Tensor({2 * n});
  layer.negate = Tensor({n, n});
  for (std::size_t j = 0; j < n; ++j) {
    layer.maxout_weight[j] = -1.0;
    layer.maxout_weight[n + j] = 1.0;
    layer.maxout_bias[j] = static_cast<double>(j) - 1.0;
    layer.maxout_bias[n + j] = -static_cast<double>(j) - 1.0;
    layer.negate(j, j) = -1.0;
  }
  return layer;
}

Var apply_one_hot(const OneHotLayer& layer, Var x) {
  ad::Tape& tape = x.tape();
  Var v = ad::maxout(ad::linear(tape.constant(layer.maxout_weight), tape.constant(layer.maxout_bias), x));
  return ad::relu(ad::linear(tape.constant(layer.negate), v));
}

Var condition_codes(ad::Tape& tape, const graph::Graph& graph, std::span<const std::uint32_t> state_in) {
  check_state(graph, state_in);
  const std::size_t n = graph.num_nodes();
  Tensor s({n, 1});
  for (std::size_t i = 0; i < n; ++i) s[i] = state_in[i];
  std::vector<std::uint32_t> src, dst;
  for (std::uint32_t v = 0; v < n; ++v)
    for (auto u : graph.neighbors(v)) {
      src.push_back(u);
      dst.push_back(v);
    }
  Var state = tape.constant(s);
  Var count = src.empty() ? tape.constant(Tensor({n, 1})) : ad::segment_sum(ad::gather_rows(state, src), dst, n);
  Var index = ad::linear(tape.constant(Tensor::matrix({{static_cast<double>(kCountWidth), 1.0}})),
                         ad::concat_cols(state, count));
  return apply_one_hot(build_one_hot_layer(kConditions), index);
}

std::array<double, kConditions> encode_condition(std::uint32_t state, std::uint32_t count) {
  if (state > 1 || count >= kCountWidth) throw std::out_of_range("encode_condition: state must be 0/1, count 0..8");
  ad::Tape tape(false);
  Var index = tape.constant(Tensor({1, 1}, {static_cast<double>(kCountWidth * state + count)}));
  const Tensor code = apply_one_hot(build_one_hot_layer(kConditions), index).value();
  std::array<double, kConditions> out{};
  std::copy(code.values().begin(), code.values().end(), out.begin());
  return out;
}

AnalyticLatent analytic_latent(const graph::Graph& graph, std::span<const std::uint32_t> state_in,
                               std::span<const graph::NodeId> context_ids,
                               std::span<const std::uint32_t> context_outcomes) {
  if (context_ids.empty() || context_ids.size() != context_outcomes.size())
    throw std::invalid_argument("analytic_latent: need one outcome per context node");
  std::vector<std::uint32_t> outcome_class;  // 0 = lives, 1 = dies: the alive half comes first
  for (auto o : context_outcomes) {
    if (o > 1) throw std::invalid_argument("analytic_latent: outcomes must be 0 or 1");
    outcome_class.push_back(o == 1 ? 0u : 1u);
  }
  ad::Tape tape(false);
  Var codes = ad::gather_rows(condition_codes(tape, graph, state_in), context_ids);
  Var seen = saturate(ad::segment_sum(codes, outcome_class, 2));
  return to_latent(ad::reshape(seen, {1, 2 * kConditions}).value());
}

AnalyticLatent analytic_latent(const ca::CAExample& example) {
  const std::size_t n = example.graph.num_nodes();
  if (example.state_out.size() != n || example.state_in.size() != n)
    throw std::invalid_argument("analytic_latent: incomplete context, every node's outcome is required");
  std::vector<graph::NodeId> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<graph::NodeId>(i);
  return analytic_latent(example.graph, example.state_in, all, example.state_out);
}

AnalyticDecoding analytic_decode_detailed(const AnalyticLatent& latent, const graph::Graph& graph,
                                          std::span<const std::uint32_t> state_in) {
  ad::Tape tape(false);
  const std::size_t n = graph.num_nodes();
  Var codes = condition_codes(tape, graph, state_in);
  Var halves = tape.constant(Tensor({2, kConditions}, std::vector<double>(latent.begin(), latent.end())));
  Var ones = tape.constant(Tensor({1, kConditions}, 1.0));
  auto match = [&](std::uint32_t half) {
    const std::uint32_t row[] = {half};
    Var mask = ad::repeat_rows(ad::gather_rows(halves, row), n);
    // AND: ReLU(code + latent - 1), then any component firing.
    return ad::linear(ones, ad::relu(ad::add_scalar(ad::add(codes, mask), -1.0))).value();
  };
  const Tensor alive = match(0);
  const Tensor dead = match(1);
  AnalyticDecoding out;
  out.state.resize(n);
  out.unknown.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.state[i] = alive[i] > 0.5 ? 1u : 0u;
    out.unknown[i] = alive[i] <= 0.5 && dead[i] <= 0.5;
  }
  return out;
}

ca::State analytic_decode(const AnalyticLatent& latent, const graph::Graph& graph,
                          std::span<const std::uint32_t> state_in) {
  return analytic_decode_detailed(latent, graph, state_in).state;
}

VerifyReport verify_example(const ca::CAExample& example) {
  VerifyReport report;
  report.rule = example.rule_id;
  report.nodes = example.graph.num_nodes();
  const auto decoded = analytic_decode_detailed(analytic_latent(example), example.graph, example.state_in);
  for (std::size_t i = 0; i < report.nodes; ++i) {
    report.errors += decoded.state[i] != example.state_out[i];
    report.unknown += decoded.unknown[i] != 0;
  }
  return report;
}

}  // namespace mpnp::analytic
