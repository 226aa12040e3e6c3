#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpnp/graph/graph.hpp"
#include "mpnp/harness/metrics.hpp"
#include "mpnp/models/episode.hpp"
#include "mpnp/models/neural_process.hpp"

namespace mpnp::harness {

/// Labels for every target of an episode, in target order, plus an optional
/// per-target uncertainty (empty for models without one).
struct PredictOutput {
  std::vector<std::uint32_t> labels;
  std::vector<double> uncertainty;
};
using Predictor = std::function<PredictOutput(const models::Episode&)>;

Predictor np_predictor(const models::NeuralProcess& model);
/// "mode-global", "mode-population", "mode-state" or "labelprop".
Predictor baseline_predictor(const std::string& name);

/// One prediction, for the optional uncertainty dump.
struct PredictionRow {
  double rate = 0.0;
  std::size_t repeat = 0;
  std::size_t graph = 0;
  graph::NodeId node = 0;
  bool in_context = false;
  std::uint32_t truth = 0;
  std::uint32_t predicted = 0;
  double uncertainty = 0.0;
};

struct EvalOptions {
  std::vector<double> rates{0.1, 0.3, 0.5, 1.0};
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // 0 = hardware concurrency
  std::size_t num_classes = 2;
  /// Receives every prediction when set (called from the calling thread).
  std::function<void(const PredictionRow&)> on_prediction;
};

/// One repeat at one rate: episode-level metrics averaged over the graphs.
struct EvalRow {
  double rate = 0.0;
  std::size_t repeat = 0;
  MetricsRecord metrics;
};

struct RateSummary {
  double rate = 0.0;
  MeanStd accuracy, miou, f_measure, mcc;  // over repeats
};

struct EvalResult {
  std::vector<EvalRow> rows;
  std::vector<RateSummary> summary;
  const RateSummary& at_rate(double rate) const;
};

/// Context indices for (rate, repeat, graph) come from their own sub-seed, so
/// results do not depend on the thread count. Every node is a target; scores
/// cover the non-context nodes, or every node when the context is the whole graph.
EvalResult evaluate(const Predictor& predictor, std::span<const graph::Graph> graphs, const EvalOptions& options);

/// Sub-seed of the context draw for one (rate index, repeat, graph).
std::uint64_t episode_seed(std::uint64_t seed, std::size_t rate_index, std::size_t repeat, std::size_t graph);

/// Scoring mask semantics: the non-context targets, or all targets when
/// there are none.
std::vector<std::size_t> scored_positions(const models::Episode& episode);

inline constexpr const char* kResultsHeader = "model,task,rate,repeat,accuracy,miou,f_measure,mcc,seed";
void write_results_csv(std::ostream& out, const EvalResult& result, const std::string& model, const std::string& task,
                       std::uint64_t seed, bool header = true);
nlohmann::ordered_json summary_json(const EvalResult& result);

}  // namespace mpnp::harness
