#include "mpnp/baselines/label_propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpnp::baselines {

std::uint32_t argmax(std::span<const double> row) {
  if (row.empty()) throw std::invalid_argument("argmax: empty row");
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < row.size(); ++c)
    if (row[c] > row[best]) best = c;
  return best;
}

LabelPropagationResult label_propagation(const graph::Graph& graph, std::span<const graph::NodeId> labelled,
                                         std::span<const std::uint32_t> labels, std::size_t num_classes,
                                         std::size_t max_iters, double tol) {
  if (labelled.empty()) throw std::invalid_argument("label_propagation: no labelled nodes");
  if (labelled.size() != labels.size()) throw std::invalid_argument("label_propagation: one label per node");
  if (num_classes == 0) throw std::invalid_argument("label_propagation: num_classes must be positive");
  const std::size_t n = graph.num_nodes();
  std::vector<char> clamped(n, 0);
  ad::Tensor f({n, num_classes});
  for (std::size_t i = 0; i < labelled.size(); ++i) {
    if (labelled[i] >= n) throw std::out_of_range("label_propagation: node out of range");
    if (labels[i] >= num_classes) throw std::out_of_range("label_propagation: label out of range");
    clamped[labelled[i]] = 1;
    f(labelled[i], labels[i]) = 1.0;
  }

  LabelPropagationResult result;
  ad::Tensor next = f;
  for (std::size_t it = 0; it < max_iters; ++it) {
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      const auto nbrs = graph.neighbors(v);
      if (clamped[v] || nbrs.empty()) continue;
      auto row = next.row(v);
      std::fill(row.begin(), row.end(), 0.0);
      for (auto u : nbrs) {
        const auto src = f.row(u);
        for (std::size_t c = 0; c < num_classes; ++c) row[c] += src[c];
      }
      const double inv = 1.0 / static_cast<double>(nbrs.size());
      for (std::size_t c = 0; c < num_classes; ++c) {
        row[c] *= inv;
        change = std::max(change, std::abs(row[c] - f(v, c)));
      }
    }
    std::swap(f, next);
    next = f;
    result.iterations = it + 1;
    result.max_change.push_back(change);
    if (change < tol) break;
  }
  result.predictions.resize(n);
  for (std::size_t v = 0; v < n; ++v) result.predictions[v] = argmax(f.row(v));
  result.distribution = std::move(f);
  return result;
}

}  // namespace mpnp::baselines
