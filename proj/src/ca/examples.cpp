#include "mpnp/ca/examples.hpp"

#include "mpnp/graph/generators.hpp"

namespace mpnp::ca {

std::string family_name(Family family) {
  switch (family) {
    case Family::kWattsStrogatz: return "ws";
    case Family::kBarabasiAlbert: return "ba";
    case Family::kVoronoi: return "voronoi";
    case Family::kSphericalVoronoi: return "sphvoronoi";
  }
  throw std::invalid_argument("unknown family");
}

Family parse_family(const std::string& name) {
  if (name == "ws") return Family::kWattsStrogatz;
  if (name == "ba") return Family::kBarabasiAlbert;
  if (name == "voronoi") return Family::kVoronoi;
  if (name == "sphvoronoi") return Family::kSphericalVoronoi;
  throw std::invalid_argument("unknown graph family '" + name + "' (expected ws, ba, voronoi, sphvoronoi)");
}

graph::Graph make_family_graph(Family family, std::size_t n, const DensityTaskConfig& config, Rng& rng) {
  switch (family) {
    case Family::kWattsStrogatz: return graph::watts_strogatz(n, config.ws_k, config.ws_p, rng);
    case Family::kBarabasiAlbert: return graph::barabasi_albert(n, config.ba_m, rng);
    case Family::kVoronoi: return graph::voronoi_adjacency(n, rng);
    case Family::kSphericalVoronoi: return graph::spherical_voronoi_adjacency(n, rng);
  }
  throw std::invalid_argument("unknown family");
}

CAExample make_example(graph::Graph graph, State state_in, Rule rule, std::string rule_id) {
  State state_out = step(graph, state_in, rule);
  graph.set_features(graph::one_hot_features(state_in, 2));
  graph.set_labels(state_out);
  return {std::move(graph), std::move(state_in), std::move(state_out), rule, std::move(rule_id)};
}

namespace {
State random_state(std::size_t n, double live_probability, Rng& rng) {
  std::bernoulli_distribution alive(live_probability);
  State s(n);
  for (auto& v : s) v = alive(rng) ? 1u : 0u;
  return s;
}
}  // namespace

CAExample gen_life_example(const LifeRule& rule, Rng& rng) {
  graph::Graph torus = graph::torus_lattice(kLifeGridSide, kLifeGridSide);
  for (int attempt = 0; attempt < kCoverageTries; ++attempt) {
    State s = random_state(torus.num_nodes(), 0.5, rng);
    if (!covers_all_conditions(torus, s)) continue;
    return make_example(std::move(torus), std::move(s), rule, rule.notation());
  }
  throw CoverageError("no state covering all 18 conditions found for rule " + rule.notation());
}

CAExample gen_density_example(Family family, const DensityRule& rule, Rng& rng, const DensityTaskConfig& config) {
  if (config.min_nodes > config.max_nodes) throw std::invalid_argument("gen_density_example: empty node range");
  const std::size_t n = uniform_index(rng, config.min_nodes, config.max_nodes);
  graph::Graph g = make_family_graph(family, n, config, rng);
  State s = random_state(n, config.live_probability, rng);
  return make_example(std::move(g), std::move(s), rule, "");
}

CAExample gen_density_example(Family family, Rng& rng, const DensityTaskConfig& config) {
  const DensityRule rule = sample_density_rule(rng);
  return gen_density_example(family, rule, rng, config);
}

}  // namespace mpnp::ca
