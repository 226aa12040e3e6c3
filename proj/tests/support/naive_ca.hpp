#pragma once

#include <vector>

#include "mpnp/ca/rules.hpp"
#include "mpnp/ca/step.hpp"
#include "mpnp/graph/graph.hpp"

namespace mpnp::test_support {

// Counts from grid coordinates, not from the graph's adjacency.
inline ca::State naive_life(std::size_t rows, std::size_t cols, const ca::State& s, std::uint16_t birth, std::uint16_t survive) {
  ca::State out(s.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      int count = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const auto rr = (r + rows + dr) % rows, cc = (c + cols + dc) % cols;
          count += s[rr * cols + cc];
        }
      const bool alive = s[r * cols + c];
      out[r * cols + c] = alive ? (survive >> count) & 1 : (birth >> count) & 1;
    }
  return out;
}

// Neighbour lists rebuilt from the edge list; density as a plain ratio.
inline ca::State naive_density(const graph::Graph& g, const ca::State& s, const ca::DensityRule& rule) {
  std::vector<std::vector<std::size_t>> nb(g.num_nodes());
  for (const auto& e : g.edges()) {
    nb[e.u].push_back(e.v);
    nb[e.v].push_back(e.u);
  }
  auto apply = [](const ca::IntervalRule& r, double d) {
    const int inside = (r.k1 <= d && d <= r.k2) ? 1 : 0;
    return r.form == ca::IntervalForm::kInside ? inside : 1 - inside;
  };
  ca::State out(s.size());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    double live = 0;
    for (auto j : nb[i]) live += s[j];
    const double d = nb[i].empty() ? 0.0 : live / static_cast<double>(nb[i].size());
    out[i] = static_cast<std::uint32_t>(s[i] ? apply(rule.survive, d) : apply(rule.birth, d));
  }
  return out;
}

}  // namespace mpnp::test_support
