#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpnp/ca/step.hpp"
#include "mpnp/common/random.hpp"
#include "mpnp/graph/graph.hpp"

namespace mpnp::ca {

/// One input/output pair. The graph carries one-hot state_in as features and
/// state_out as labels.
struct CAExample {
  graph::Graph graph;
  State state_in;
  State state_out;
  Rule rule;
  std::string rule_id;
};

enum class Family { kWattsStrogatz, kBarabasiAlbert, kVoronoi, kSphericalVoronoi };

std::string family_name(Family family);  // "ws", "ba", "voronoi", "sphvoronoi"
Family parse_family(const std::string& name);

struct DensityTaskConfig {
  std::size_t min_nodes = 100;
  std::size_t max_nodes = 200;
  double live_probability = 0.5;
  std::size_t ws_k = 10;
  double ws_p = 0.1;
  std::size_t ba_m = 3;
};

inline constexpr std::size_t kLifeGridSide = 30;
inline constexpr int kCoverageTries = 1000;

class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

graph::Graph make_family_graph(Family family, std::size_t n, const DensityTaskConfig& config, Rng& rng);

/// Assemble an example (features, labels, step) from a graph, state and rule.
CAExample make_example(graph::Graph graph, State state_in, Rule rule, std::string rule_id);

/// Random 30x30 torus state, resampled until all 18 (state, count) conditions
/// occur, then stepped once. Throws CoverageError after kCoverageTries draws.
CAExample gen_life_example(const LifeRule& rule, Rng& rng);

CAExample gen_density_example(Family family, Rng& rng, const DensityTaskConfig& config = {});
CAExample gen_density_example(Family family, const DensityRule& rule, Rng& rng, const DensityTaskConfig& config = {});

using Fractions = std::array<double, 3>;

template <class T>
struct Split {
  std::vector<T> train;
  std::vector<T> val;
  std::vector<T> test;
};

/// Shuffle (seeded) and cut into train/val/test by rounded fractions.
template <class T>
Split<T> split_disjoint(const std::vector<T>& rules, Fractions fractions, std::uint64_t seed) {
  if (rules.empty()) throw std::invalid_argument("split_disjoint: no rules to split");
  const double total = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(total - 1.0) > 1e-9 || fractions[0] < 0 || fractions[1] < 0 || fractions[2] < 0)
    throw std::invalid_argument("split_disjoint: fractions must be non-negative and sum to 1");
  std::vector<std::size_t> order(rules.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, 0, i - 1)]);
  const auto n = static_cast<double>(rules.size());
  const auto n_train = std::min(rules.size(), static_cast<std::size_t>(std::llround(fractions[0] * n)));
  const auto n_val = std::min(rules.size() - n_train, static_cast<std::size_t>(std::llround(fractions[1] * n)));
  Split<T> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& bucket = i < n_train ? out.train : (i < n_train + n_val ? out.val : out.test);
    bucket.push_back(rules[order[i]]);
  }
  return out;
}

}  // namespace mpnp::ca
