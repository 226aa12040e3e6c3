#include "mpnp/models/neural_process.hpp"

#include <numeric>
#include <stdexcept>

namespace mpnp::models {

using ad::Tensor;
using ad::Var;

namespace {

Tensor feature_rows(const graph::Graph& graph, const Subgraph& sub) {
  const Tensor& x = graph.features();
  Tensor out({sub.size(), x.cols()});
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const auto src = x.row(sub.nodes[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::vector<std::uint32_t> first_rows(std::size_t m) {
  std::vector<std::uint32_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0u);
  return idx;
}

}  // namespace

std::string ModelConfig::kind() const {
  std::string k = message_passing ? "mpnp" : "np";
  if (aggregation == Aggregation::kPerClass) k += "-c";
  return k;
}

std::size_t ModelConfig::hops() const {
  if (!message_passing) return 0;
  return architecture == Architecture::kCellular ? 1 : T;
}

void ModelConfig::validate() const {
  if (feature_dim == 0 || num_classes == 0 || h == 0 || r == 0 || z == 0)
    throw std::invalid_argument("model config: dimensions must be positive");
  if (architecture == Architecture::kStandard && (T < 1 || T > 2))
    throw std::invalid_argument("model config: T must be 1 or 2");
}

ModelConfig config_for_kind(const std::string& kind, ModelConfig base) {
  if (kind == "np" || kind == "np-c") base.message_passing = false;
  else if (kind == "mpnp" || kind == "mpnp-c") base.message_passing = true;
  else throw std::invalid_argument("unknown model kind '" + kind + "'");
  base.aggregation = kind.ends_with("-c") ? Aggregation::kPerClass : Aggregation::kMean;
  return base;
}

std::vector<std::uint32_t> Prediction::labels() const {
  std::vector<std::uint32_t> out(mean.rows());
  for (std::size_t i = 0; i < mean.rows(); ++i) {
    const auto row = mean.row(i);
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < row.size(); ++c)
      if (row[c] > row[best]) best = c;
    out[i] = best;
  }
  return out;
}

std::vector<double> Prediction::uncertainty() const {
  std::vector<double> out(sigma.rows());
  for (std::size_t i = 0; i < sigma.rows(); ++i) {
    const auto row = sigma.row(i);
    out[i] = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
  }
  return out;
}

Var mp_layer(Var skip, Var message, Var bias, Var h, const Subgraph& sub) {
  Var self = ad::linear(skip, bias, h);
  if (sub.src.empty()) return ad::relu(self);
  Var outgoing = ad::gather_rows(ad::linear(message, h), sub.src);
  return ad::relu(ad::add(self, ad::segment_sum(outgoing, sub.dst, h.value().rows())));
}

Var aggregate_mean(Var r_rows) {
  const std::size_t m = r_rows.value().rows();
  if (m == 0) throw std::invalid_argument("aggregate_mean: empty context");
  const std::vector<std::uint32_t> ids(m, 0);
  return ad::scale(ad::segment_sum(r_rows, ids, 1), 1.0 / static_cast<double>(m));
}

Var aggregate_per_class(Var r_rows, std::span<const std::uint32_t> labels, std::size_t num_classes) {
  const std::size_t m = r_rows.value().rows();
  if (labels.size() != m) throw std::invalid_argument("aggregate_per_class: one label per row required");
  std::vector<double> counts(num_classes, 0.0);
  for (auto l : labels) {
    if (l >= num_classes) throw std::out_of_range("aggregate_per_class: label out of range");
    counts[l] += 1.0;
  }
  for (auto& c : counts) c = c > 0.0 ? 1.0 / c : 0.0;
  Var sums = ad::segment_sum(r_rows, labels, num_classes);
  return ad::reshape(ad::scale_rows(sums, counts), {1, num_classes * r_rows.value().cols()});
}

NeuralProcess::NeuralProcess(ModelConfig config, std::uint64_t seed) : config_(config), seed_(seed) {
  config_.validate();
  build();
}

Layer NeuralProcess::make_dense(const std::string& name, std::size_t in, std::size_t out, Rng& rng) {
  Layer layer{Layer::Op::kDense};
  layer.weight = params_.add_he_uniform(name + ".weight", {out, in}, in, rng);
  layer.bias = params_.add_zeros(name + ".bias", {out});
  return layer;
}

Layer NeuralProcess::make_message(const std::string& name, std::size_t in, std::size_t out, Rng& rng) {
  Layer layer{Layer::Op::kMessage};
  layer.weight = params_.add_he_uniform(name + ".skip", {out, in}, in, rng);
  layer.message = params_.add_he_uniform(name + ".message", {out, in}, in, rng);
  layer.bias = params_.add_zeros(name + ".bias", {out});
  return layer;
}

void NeuralProcess::build() {
  Rng rng(derive_seed(seed_, 0x1417ULL));
  const auto& c = config_;
  const Layer relu{Layer::Op::kRelu};
  const std::size_t d = c.feature_dim;
  const std::size_t labelled_in = d + c.num_classes;

  if (c.architecture == Architecture::kStandard) {
    auto trunk = [&](const std::string& prefix, std::size_t in, std::vector<Layer>& stack) {
      stack.push_back(make_dense(prefix + ".input", in, c.h, rng));
      stack.push_back(relu);
      for (std::size_t t = 0; t < c.T; ++t) {
        const std::string name = prefix + ".round" + std::to_string(t);
        if (c.message_passing) {
          stack.push_back(make_message(name, c.h, c.h, rng));
        } else {
          stack.push_back(make_dense(name, c.h, c.h, rng));
          stack.push_back(relu);
        }
      }
    };
    trunk("encoder", labelled_in, encoder_);
    encoder_.push_back(make_dense("encoder.output", c.h, c.r, rng));

    decoder_.push_back(Layer{Layer::Op::kConcatLatent});
    trunk("decoder", d + c.z, decoder_);
    decoder_.push_back(make_dense("decoder.hidden", c.h, c.h, rng));
    decoder_.push_back(relu);
  } else {
    // MP(h) or Linear(2h), ReLU, {Linear(h), ReLU} x 3, Maxout(h, 2)
    auto prefix = [&](const std::string& name, std::size_t in, std::vector<Layer>& stack) {
      std::size_t width = c.h;
      if (c.message_passing) {
        stack.push_back(make_message(name + ".graph", in, c.h, rng));
      } else {
        stack.push_back(make_dense(name + ".wide", in, 2 * c.h, rng));
        stack.push_back(relu);
        width = 2 * c.h;
      }
      for (int i = 0; i < 3; ++i) {
        stack.push_back(make_dense(name + ".hidden" + std::to_string(i), width, c.h, rng));
        stack.push_back(relu);
        width = c.h;
      }
      stack.push_back(make_dense(name + ".maxout", c.h, 2 * c.h, rng));
      stack.push_back(Layer{Layer::Op::kMaxout});
    };
    prefix("encoder", labelled_in, encoder_);
    encoder_.push_back(make_dense("encoder.output", c.h, c.r, rng));
    encoder_.push_back(relu);

    prefix("decoder", d, decoder_);
    decoder_.push_back(Layer{Layer::Op::kConcatLatent});
    std::size_t width = c.h + c.z;
    for (int i = 0; i < 3; ++i) {
      decoder_.push_back(make_dense("decoder.post" + std::to_string(i), width, c.h, rng));
      decoder_.push_back(relu);
      width = c.h;
    }
  }

  const std::size_t agg = c.aggregation == Aggregation::kPerClass ? c.num_classes * c.r : c.r;
  latent_trunk_.push_back(make_dense("latent.input", agg, c.r, rng));
  latent_mu_ = make_dense("latent.mu", c.r, c.z, rng);
  latent_sigma_ = make_dense("latent.sigma", c.r, c.z, rng);
  head_mu_ = make_dense("decoder.mu", c.h, c.num_classes, rng);
  head_sigma_ = make_dense("decoder.sigma", c.h, c.num_classes, rng);
}

NeuralProcess::Bound NeuralProcess::bind(ad::Tape& tape) {
  Bound b;
  b.tape_ = &tape;
  b.vars_.reserve(params_.size());
  for (auto& p : params_) b.vars_.push_back(tape.parameter(p));
  return b;
}

NeuralProcess::Bound NeuralProcess::bind_constant(ad::Tape& tape) const {
  Bound b;
  b.tape_ = &tape;
  b.vars_.reserve(params_.size());
  for (const auto& p : params_) b.vars_.push_back(tape.constant(p.value));
  return b;
}

Tensor NeuralProcess::build_inputs(const graph::Graph& graph, const Subgraph& sub,
                                   std::span<const std::uint32_t> labels) const {
  const Tensor& x = graph.features();
  const std::size_t d = config_.feature_dim;
  if (x.empty() || x.cols() != d || x.rows() != graph.num_nodes())
    throw std::invalid_argument("build_inputs: graph features must be [n x " + std::to_string(d) + "]");
  if (labels.size() > sub.size()) throw std::invalid_argument("build_inputs: more labels than nodes");
  const std::size_t width = d + config_.num_classes;
  Tensor out({sub.size(), width});
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const auto src = x.row(sub.nodes[i]);
    auto dst = out.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
    if (i < labels.size()) {
      if (labels[i] >= config_.num_classes) throw std::out_of_range("build_inputs: label out of range");
      dst[d + labels[i]] = 1.0;
    }
  }
  return out;
}

Var NeuralProcess::run_stack(const Bound& b, const std::vector<Layer>& layers, Var h, const Subgraph& sub,
                             std::optional<Var> z) const {
  for (const auto& layer : layers) {
    switch (layer.op) {
      case Layer::Op::kDense: h = ad::linear(b[layer.weight], b[layer.bias], h); break;
      case Layer::Op::kMessage: h = mp_layer(b[layer.weight], b[layer.message], b[layer.bias], h, sub); break;
      case Layer::Op::kRelu: h = ad::relu(h); break;
      case Layer::Op::kMaxout: h = ad::maxout(h); break;
      case Layer::Op::kConcatLatent:
        if (!z) throw std::logic_error("run_stack: latent sample required");
        h = ad::concat_cols(h, ad::repeat_rows(*z, h.value().rows()));
        break;
    }
  }
  return h;
}

Var NeuralProcess::encode(const Bound& b, const graph::Graph& graph, std::span<const NodeId> ids,
                          std::span<const std::uint32_t> labels) const {
  if (ids.empty()) throw std::invalid_argument("encode: empty context");
  if (labels.size() != ids.size()) throw std::invalid_argument("encode: one label per node required");
  const Subgraph sub = gather_subgraph(graph, ids, config_.hops());
  Var h = run_stack(b, encoder_, b.tape().constant(build_inputs(graph, sub, labels)), sub, std::nullopt);
  if (sub.size() == ids.size()) return h;
  return ad::gather_rows(h, first_rows(ids.size()));
}

Var NeuralProcess::aggregate(Var r_rows, std::span<const std::uint32_t> labels) const {
  if (config_.aggregation == Aggregation::kPerClass) return aggregate_per_class(r_rows, labels, config_.num_classes);
  return aggregate_mean(r_rows);
}

ad::GaussianVar NeuralProcess::latent_head(const Bound& b, Var r) const {
  const Subgraph none;
  Var s = run_stack(b, latent_trunk_, r, none, std::nullopt);
  Var mu = ad::linear(b[latent_mu_.weight], b[latent_mu_.bias], s);
  Var sigma = ad::bounded_scale(ad::linear(b[latent_sigma_.weight], b[latent_sigma_.bias], s));
  return {mu, sigma};
}

ad::GaussianVar NeuralProcess::posterior(const Bound& b, const graph::Graph& graph, std::span<const NodeId> ids,
                                         std::span<const std::uint32_t> labels) const {
  return latent_head(b, aggregate(encode(b, graph, ids, labels), labels));
}

PredictionVar NeuralProcess::decode(const Bound& b, Var z, const graph::Graph& graph,
                                    std::span<const NodeId> target_ids) const {
  if (target_ids.empty()) throw std::invalid_argument("decode: no targets");
  const Tensor& x = graph.features();
  if (x.empty() || x.cols() != config_.feature_dim || x.rows() != graph.num_nodes())
    throw std::invalid_argument("decode: graph features must be [n x " + std::to_string(config_.feature_dim) + "]");
  const Subgraph sub = gather_subgraph(graph, target_ids, config_.hops());
  Var h = run_stack(b, decoder_, b.tape().constant(feature_rows(graph, sub)), sub, z);
  if (sub.size() != target_ids.size()) h = ad::gather_rows(h, first_rows(target_ids.size()));
  Var mean = ad::softmax_lastaxis(ad::linear(b[head_mu_.weight], b[head_mu_.bias], h));
  Var sigma = ad::bounded_scale(ad::linear(b[head_sigma_.weight], b[head_sigma_.bias], h));
  return {mean, sigma};
}

ElboTerms NeuralProcess::elbo(const Bound& b, const Episode& e, const Tensor& noise) const {
  if (!e.labelled_targets()) throw std::invalid_argument("elbo: every target needs a label");
  const graph::Graph& g = *e.graph;
  ad::GaussianVar q_target = posterior(b, g, e.target_ids, e.target_labels);
  ad::GaussianVar q_context = posterior(b, g, e.context_ids, e.context_labels);
  Var z = ad::reparam_sample(q_target, noise);
  PredictionVar pred = decode(b, z, g, e.target_ids);

  ad::Tape& tape = b.tape();
  Var recon = tape.constant(Tensor::scalar(0.0));
  if (e.num_extra() > 0) {
    std::vector<std::uint32_t> extra(e.num_extra());
    std::iota(extra.begin(), extra.end(), static_cast<std::uint32_t>(e.num_context()));
    Tensor onehot({e.num_extra(), e.num_classes});
    for (std::size_t i = 0; i < e.num_extra(); ++i) onehot(i, e.target_labels[e.num_context() + i]) = 1.0;
    recon = ad::gaussian_log_density(onehot, ad::gather_rows(pred.mean, extra), ad::gather_rows(pred.sigma, extra));
  }
  Var kl = ad::kl_diag_gaussians(q_target, q_context);
  return {ad::sub(kl, recon), recon, kl};
}

ElboTerms NeuralProcess::elbo(const Bound& b, const Episode& e, Rng& rng) const {
  Tensor noise({1, config_.z});
  for (auto& v : noise.values()) v = standard_normal(rng);
  return elbo(b, e, noise);
}

Prediction NeuralProcess::predict(const Episode& e, const Tensor* noise) const {
  validate(e);
  ad::Tape tape(false);
  const Bound b = bind_constant(tape);
  ad::GaussianVar q = posterior(b, *e.graph, e.context_ids, e.context_labels);
  Var z = noise ? ad::reparam_sample(q, *noise) : q.mu;
  PredictionVar pred = decode(b, z, *e.graph, e.target_ids);
  return {pred.mean.value(), pred.sigma.value()};
}

ad::DiagGaussian NeuralProcess::context_posterior(const Episode& e) const {
  validate(e);
  ad::Tape tape(false);
  const Bound b = bind_constant(tape);
  return posterior(b, *e.graph, e.context_ids, e.context_labels).value();
}

Prediction ca_forward(const NeuralProcess& model, const Episode& episode) {
  if (model.config().architecture != Architecture::kCellular)
    throw std::invalid_argument("ca_forward: model does not use the cellular architecture");
  return model.predict(episode);
}

}  // namespace mpnp::models
