#include "mpnp/harness/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

#include "mpnp/baselines/label_propagation.hpp"
#include "mpnp/baselines/mode.hpp"

namespace mpnp::harness {

Predictor np_predictor(const models::NeuralProcess& model) {
  return [&model](const models::Episode& e) {
    const auto p = model.predict(e);
    return PredictOutput{p.labels(), p.uncertainty()};
  };
}

Predictor baseline_predictor(const std::string& name) {
  if (name.rfind("mode-", 0) == 0) {
    const auto variant = baselines::parse_mode_variant(name.substr(5));
    return [variant](const models::Episode& e) { return PredictOutput{baselines::mode_predict(e, variant), {}}; };
  }
  if (name == "labelprop") {
    return [](const models::Episode& e) {
      const auto lp = baselines::label_propagation(*e.graph, e.context_ids, e.context_labels, e.num_classes);
      PredictOutput out;
      out.labels.reserve(e.num_targets());
      for (auto id : e.target_ids) out.labels.push_back(lp.predictions[id]);
      return out;
    };
  }
  throw std::invalid_argument("unknown baseline '" + name + "'");
}

std::uint64_t episode_seed(std::uint64_t seed, std::size_t rate_index, std::size_t repeat, std::size_t graph) {
  return derive_seed(derive_seed(derive_seed(seed, 0xe7a1 + rate_index), repeat), graph);
}

std::vector<std::size_t> scored_positions(const models::Episode& e) {
  std::vector<std::size_t> out;
  const std::size_t first = e.num_extra() > 0 ? e.num_context() : 0;
  for (std::size_t i = first; i < e.num_targets(); ++i) out.push_back(i);
  return out;
}

const RateSummary& EvalResult::at_rate(double rate) const {
  for (const auto& s : summary)
    if (std::abs(s.rate - rate) < 1e-12) return s;
  throw std::out_of_range("no evaluation at rate " + std::to_string(rate));
}

namespace {

struct EpisodeOutcome {
  MetricsRecord metrics;
  std::vector<PredictionRow> predictions;
};

EpisodeOutcome run_episode(const Predictor& predictor, const graph::Graph& g, double rate, std::size_t rate_index,
                           std::size_t repeat, std::size_t gi, const EvalOptions& opt) {
  if (!g.labels()) throw std::invalid_argument("evaluate: graph " + std::to_string(gi) + " has no labels");
  Rng rng(episode_seed(opt.seed, rate_index, repeat, gi));
  const auto episode = models::rate_episode(g, rate, rng, opt.num_classes);
  const auto out = predictor(episode);
  if (out.labels.size() != episode.num_targets())
    throw std::logic_error("evaluate: predictor returned the wrong number of labels");

  const auto positions = scored_positions(episode);
  std::vector<std::uint32_t> pred, truth;
  pred.reserve(positions.size());
  truth.reserve(positions.size());
  for (auto p : positions) {
    pred.push_back(out.labels[p]);
    truth.push_back(episode.target_labels[p]);
  }
  EpisodeOutcome result{compute_metrics(pred, truth, opt.num_classes), {}};
  if (opt.on_prediction) {
    for (std::size_t i = 0; i < episode.num_targets(); ++i) {
      result.predictions.push_back({rate, repeat, gi, episode.target_ids[i], i < episode.num_context(),
                                    episode.target_labels[i], out.labels[i],
                                    out.uncertainty.empty() ? std::nan("") : out.uncertainty[i]});
    }
  }
  return result;
}

MeanStd field_stats(const std::vector<EvalRow>& rows, double rate, double MetricsRecord::*field) {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.rate == rate) v.push_back(r.metrics.*field);
  return mean_std(v);
}

}  // namespace

EvalResult evaluate(const Predictor& predictor, std::span<const graph::Graph> graphs, const EvalOptions& opt) {
  if (graphs.empty()) throw std::invalid_argument("evaluate: no graphs");
  if (opt.repeats == 0) throw std::invalid_argument("evaluate: repeats must be positive");
  for (double rate : opt.rates)
    if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("evaluate: rates must lie in (0, 1]");

  std::size_t threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
  threads = std::min(threads, graphs.size());

  EvalResult result;
  std::vector<EpisodeOutcome> outcomes(graphs.size());
  for (std::size_t ri = 0; ri < opt.rates.size(); ++ri) {
    const double rate = opt.rates[ri];
    for (std::size_t rep = 0; rep < opt.repeats; ++rep) {
      auto work = [&](std::size_t gi) { outcomes[gi] = run_episode(predictor, graphs[gi], rate, ri, rep, gi, opt); };
      if (threads <= 1) {
        for (std::size_t gi = 0; gi < graphs.size(); ++gi) work(gi);
      } else {
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (std::size_t t = 0; t < threads; ++t) {
          pool.emplace_back([&, t] {
            try {
              for (std::size_t gi = t; gi < graphs.size(); gi += threads) work(gi);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
      }
      std::vector<MetricsRecord> per_graph;
      per_graph.reserve(graphs.size());
      for (auto& o : outcomes) {
        per_graph.push_back(o.metrics);
        if (opt.on_prediction)
          for (const auto& p : o.predictions) opt.on_prediction(p);
      }
      result.rows.push_back({rate, rep, mean_of(per_graph)});
    }
    RateSummary s;
    s.rate = rate;
    s.accuracy = field_stats(result.rows, rate, &MetricsRecord::accuracy);
    s.miou = field_stats(result.rows, rate, &MetricsRecord::miou);
    s.f_measure = field_stats(result.rows, rate, &MetricsRecord::f_measure);
    s.mcc = field_stats(result.rows, rate, &MetricsRecord::mcc);
    result.summary.push_back(s);
  }
  return result;
}

void write_results_csv(std::ostream& out, const EvalResult& result, const std::string& model, const std::string& task,
                       std::uint64_t seed, bool header) {
  if (header) out << kResultsHeader << '\n';
  out << std::setprecision(10);
  for (const auto& r : result.rows) {
    out << model << ',' << task << ',' << r.rate << ',' << r.repeat << ',' << r.metrics.accuracy << ','
        << r.metrics.miou << ',' << r.metrics.f_measure << ',' << r.metrics.mcc << ',' << seed << '\n';
  }
}

nlohmann::ordered_json summary_json(const EvalResult& result) {
  auto ms = [](const MeanStd& m) -> nlohmann::ordered_json {
    // NaN is not representable in JSON.
    if (std::isnan(m.mean)) return nullptr;
    return {{"mean", m.mean}, {"std", m.std}};
  };
  nlohmann::ordered_json rates = nlohmann::ordered_json::array();
  for (const auto& s : result.summary) {
    rates.push_back({{"rate", s.rate},
                     {"accuracy", ms(s.accuracy)},
                     {"miou", ms(s.miou)},
                     {"f_measure", ms(s.f_measure)},
                     {"mcc", ms(s.mcc)}});
  }
  return {{"std_over", "context draws"}, {"rates", rates}};
}

}  // namespace mpnp::harness
