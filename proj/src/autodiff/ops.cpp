#include "mpnp/autodiff/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mpnp::ad {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMatrix = Eigen::Map<RowMatrix>;
using ConstMapMatrix = Eigen::Map<const RowMatrix>;

ConstMapMatrix as_matrix(const Tensor& t) {
  return {t.data(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols())};
}
MapMatrix as_matrix(Tensor& t) {
  return {t.data(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols())};
}

void require_same_shape(const char* op, const Var& a, const Var& b) {
  if (a.shape() != b.shape())
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                                shape_string(b.shape()));
}

void require_matrix(const char* op, const Var& x) {
  if (x.value().rank() != 2)
    throw std::invalid_argument(std::string(op) + ": expected a matrix, got " + shape_string(x.shape()));
}

void accumulate(Tensor& dst, const Tensor& src) {
  auto d = dst.values();
  auto s = src.values();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

/// Elementwise unary op with derivative expressed via input value and output value.
template <class Forward, class Derivative>
Var unary(Var x, Forward forward, Derivative derivative) {
  Tensor out(x.shape());
  const Tensor& in = x.value();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = forward(in[i]);
  const std::size_t xi = x.index();
  return x.tape().record(std::move(out), {x}, [xi, derivative](Tape& tape, std::size_t self) {
    if (!tape.requires_grad(xi)) return;
    const Tensor& g = tape.grad_of(self);
    const Tensor& in = tape.value_of(xi);
    const Tensor& out = tape.value_of(self);
    Tensor& gx = tape.grad_of(xi);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * derivative(in[i], out[i]);
  });
}

double stable_softplus(double v) { return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v))); }

double sigmoid(double v) {
  if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace

Var linear(Var weight, Var bias, Var x) {
  Var y = linear(weight, x);
  const Tensor& b = bias.value();
  if (b.rank() != 1 || b.size() != weight.shape()[0])
    throw std::invalid_argument("linear: bias shape " + shape_string(b.shape()) + " does not match weight " +
                                shape_string(weight.shape()));
  // Fold the bias into the freshly recorded output node.
  Tensor out = y.value();
  const std::size_t cols = out.cols();
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) += b[c];
  const std::size_t yi = y.index(), bi = bias.index();
  return x.tape().record(std::move(out), {y, bias}, [yi, bi](Tape& tape, std::size_t self) {
    const Tensor& g = tape.grad_of(self);
    if (tape.requires_grad(yi)) accumulate(tape.grad_of(yi), g);
    if (tape.requires_grad(bi)) {
      Tensor& gb = tape.grad_of(bi);
      const std::size_t cols = g.cols();
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < cols; ++c) gb[c] += g(r, c);
    }
  });
}

Var linear(Var weight, Var x) {
  const Tensor& w = weight.value();
  const Tensor& in = x.value();
  if (w.rank() != 2) throw std::invalid_argument("linear: weight must be a matrix");
  if (in.cols() != w.cols())
    throw std::invalid_argument("linear: input " + shape_string(in.shape()) + " incompatible with weight " +
                                shape_string(w.shape()));
  Shape out_shape = in.shape();
  out_shape.back() = w.shape()[0];
  Tensor out(out_shape);
  as_matrix(out).noalias() = as_matrix(in) * as_matrix(w).transpose();
  const std::size_t wi = weight.index(), xi = x.index();
  return x.tape().record(std::move(out), {weight, x}, [wi, xi](Tape& tape, std::size_t self) {
    const Tensor& g = tape.grad_of(self);
    if (tape.requires_grad(xi)) as_matrix(tape.grad_of(xi)).noalias() += as_matrix(g) * as_matrix(tape.value_of(wi));
    if (tape.requires_grad(wi))
      as_matrix(tape.grad_of(wi)).noalias() += as_matrix(g).transpose() * as_matrix(tape.value_of(xi));
  });
}

Var add(Var a, Var b) {
  require_same_shape("add", a, b);
  Tensor out = a.value();
  accumulate(out, b.value());
  const std::size_t ai = a.index(), bi = b.index();
  return a.tape().record(std::move(out), {a, b}, [ai, bi](Tape& tape, std::size_t self) {
    const Tensor& g = tape.grad_of(self);
    if (tape.requires_grad(ai)) accumulate(tape.grad_of(ai), g);
    if (tape.requires_grad(bi)) accumulate(tape.grad_of(bi), g);
  });
}

Var sub(Var a, Var b) {
  require_same_shape("sub", a, b);
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const std::size_t ai = a.index(), bi = b.index();
  return a.tape().record(std::move(out), {a, b}, [ai, bi](Tape& tape, std::size_t self) {
    const Tensor& g = tape.grad_of(self);
    if (tape.requires_grad(ai)) accumulate(tape.grad_of(ai), g);
    if (tape.requires_grad(bi)) {
      Tensor& gb = tape.grad_of(bi);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same_shape("mul", a, b);
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const std::size_t ai = a.index(), bi = b.index();
  return a.tape().record(std::move(out), {a, b}, [ai, bi](Tape& tape, std::size_t self) {
    const Tensor& g = tape.grad_of(self);
    if (tape.requires_grad(ai)) {
      Tensor& ga = tape.grad_of(ai);
      const Tensor& bv = tape.value_of(bi);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (tape.requires_grad(bi)) {
      Tensor& gb = tape.grad_of(bi);
      const Tensor& av = tape.value_of(ai);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var add_scalar(Var a, double c) {
  return unary(a, [c](double v) { return v + c; }, [](double, double) { return 1.0; });
}

Var scale(Var a, double c) {
  return unary(a, [c](double v) { return v * c; }, [c](double, double) { return c; });
}

Var relu(Var x) {
  return unary(x, [](double v) { return v > 0.0 ? v : 0.0; }, [](double in, double) { return in > 0.0 ? 1.0 : 0.0; });
}

Var softplus(Var x) {
  return unary(x, stable_softplus, [](double in, double) { return sigmoid(in); });
}

Var softmax_lastaxis(Var x) {
  const Tensor& in = x.value();
  Tensor out(in.shape());
  const std::size_t cols = in.cols();
  for (std::size_t r = 0; r < in.rows(); ++r) {
    auto src = in.row(r);
    auto dst = out.row(r);
    const double peak = *std::max_element(src.begin(), src.end());
    double total = 0.0;
    for (std::size_t c = 0; c < cols; ++c) total += dst[c] = std::exp(src[c] - peak);
    for (std::size_t c = 0; c < cols; ++c) dst[c] /= total;
  }
  const std::size_t xi = x.index();
  return x.tape().record(std::move(out), {x}, [xi](Tape& tape, std::size_t self) {
    if (!tape.requires_grad(xi)) return;
    const Tensor& g = tape.grad_of(self);
    const Tensor& s = tape.value_of(self);
    Tensor& gx = tape.grad_of(xi);
    const std::size_t cols = s.cols();
    for (std::size_t r = 0; r < s.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < cols; ++c) dot += g(r, c) * s(r, c);
      for (std::size_t c = 0; c < cols; ++c) gx(r, c) += s(r, c) * (g(r, c) - dot);
    }
  });
}

Var maxout(Var x) {
  const Tensor& in = x.value();
  if (in.cols() % 2 != 0)
    throw std::invalid_argument("maxout: last dimension must be even, got " + shape_string(in.shape()));
  const std::size_t half = in.cols() / 2;
  Shape out_shape = in.shape();
  out_shape.back() = half;
  Tensor out(out_shape);
  for (std::size_t r = 0; r < in.rows(); ++r)
    for (std::size_t c = 0; c < half; ++c) out(r, c) = std::max(in(r, c), in(r, c + half));
  const std::size_t xi = x.index();
  return x.tape().record(std::move(out), {x}, [xi, half](Tape& tape, std::size_t self) {
    if (!tape.requires_grad(xi)) return;
    const Tensor& g = tape.grad_of(self);
    const Tensor& in = tape.value_of(xi);
    Tensor& gx = tape.grad_of(xi);
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < half; ++c) {
        if (in(r, c) >= in(r, c + half)) gx(r, c) += g(r, c);
        else gx(r, c + half) += g(r, c);
      }
  });
}

Var segment_sum(Var values, std::span<const std::uint32_t> segment_ids, std::size_t num_segments) {
  require_matrix("segment_sum", values);
  const Tensor& in = values.value();
  if (segment_ids.size() != in.rows())
    throw std::invalid_argument("segment_sum: " + std::to_string(segment_ids.size()) + " ids for " +
                                std::to_string(in.rows()) + " rows");
  if (num_segments == 0) throw std::invalid_argument("segment_sum: num_segments must be positive");
  for (auto id : segment_ids)
    if (id >= num_segments)
      throw std::out_of_range("segment_sum: id " + std::to_string(id) + " >= " + std::to_string(num_segments));
  const std::size_t cols = in.cols();
  Tensor out({num_segments, cols}, 0.0);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    auto src = in.row(r);
    auto dst = out.row(segment_ids[r]);
    for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
  }
  std::vector<std::uint32_t> ids(segment_ids.begin(), segment_ids.end());
  const std::size_t vi = values.index();
  return values.tape().record(std::move(out), {values}, [vi, ids = std::move(ids)](Tape& tape, std::size_t self) {
    if (!tape.requires_grad(vi)) return;
    const Tensor& g = tape.grad_of(self);
    Tensor& gv = tape.grad_of(vi);
    const std::size_t cols = g.cols();
    for (std::size_t r = 0; r < ids.size(); ++r) {
      auto src = g.row(ids[r]);
      auto dst = gv.row(r);
      for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
    }
  });
}

Var gather_rows(Var x, std::span<const std::uint32_t> index) {
  require_matrix("gather_rows", x);
  const Tensor& in = x.value();
  const std::size_t cols = in.cols();
  if (index.empty()) throw std::invalid_argument("gather_rows: empty index");
  Tensor out({index.size(), cols});
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] >= in.rows()) throw std::out_of_range("gather_rows: row index out of range");
    std::copy_n(in.row(index[r]).begin(), cols, out.row(r).begin());
  }
  std::vector<std::uint32_t> idx(index.begin(), index.end());
  const std::size_t xi = x.index();
  return x.tape().record(std::move(out), {x}, [xi, idx = std::move(idx)](Tape& tape, std::size_t self) {
    if (!tape.requires_grad(xi)) return;
    const Tensor& g = tape.grad_of(self);
    Tensor& gx = tape.grad_of(xi);
    const std::size_t cols = g.cols();
    for (std::size_t r = 0; r < idx.size(); ++r) {
      auto src = g.row(r);
      auto dst = gx.row(idx[r]);
      for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
    }
  });
}

Var scale_rows(Var x, std::span<const double> weights) {
  require_matrix("scale_rows", x);
  const Tensor& in = x.value();
  if (weights.size() != in.rows()) throw std::invalid_argument("scale_rows: weight count does not match rows");
  Tensor out = in;
  const std::size_t cols = in.cols();
  for (std::size_t r = 0; r < in.rows(); ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) *= weights[r];
  std::vector<double> w(weights.begin(), weights.end());
  const std::size_t xi = x.index();
  return x.tape().record(std::move(out), {x}, [xi, w = std::move(w)](Tape& tape, std::size_t self) {
    if (!tape.requires_grad(xi)) return;
    const Tensor& g = tape.grad_of(self);
    Tensor& gx = tape.grad_of(xi);
    const std::size_t cols = g.cols();
    for (std::size_t r = 0; r < w.size(); ++r)
      for (std::size_t c = 0; c < cols; ++c) gx(r, c) += g(r, c) * w[r];
  });
}

Var concat_cols(Var a, Var b) {
  require_matrix("concat_cols", a);
  require_matrix("concat_cols", b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rows() != bv.rows()) throw std::invalid_argument("concat_cols: row counts differ");
  const std::size_t ca = av.cols(), cb = bv.cols();
  Tensor out({av.rows(), ca + cb});
  for (std::size_t r = 0; r < av.rows(); ++r) {
    std::copy_n(av.row(r).begin(), ca, out.row(r).begin());
    std::copy_n(bv.row(r).begin(), cb, out.row(r).begin() + static_cast<std::ptrdiff_t>(ca));
  }
  const std::size_t ai = a.index(), bi = b.index();
  return a.tape().record(std::move(out), {a, b}, [ai, bi, ca, cb](Tape& tape, std::size_t self) {
    const Tensor& g = tape.grad_of(self);
    if (tape.requires_grad(ai)) {
      Tensor& ga = tape.grad_of(ai);
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < ca; ++c) ga(r, c) += g(r, c);
    }
    if (tape.requires_grad(bi)) {
      Tensor& gb = tape.grad_of(bi);
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < cb; ++c) gb(r, c) += g(r, ca + c);
    }
  });
}

Var repeat_rows(Var v, std::size_t n) {
  const Tensor& in = v.value();
  if (in.rows() != 1) throw std::invalid_argument("repeat_rows: expected a single row, got " + shape_string(in.shape()));
  if (n == 0) throw std::invalid_argument("repeat_rows: n must be positive");
  const std::size_t d = in.cols();
  Tensor out({n, d});
  for (std::size_t r = 0; r < n; ++r) std::copy_n(in.data(), d, out.row(r).begin());
  const std::size_t vi = v.index();
  return v.tape().record(std::move(out), {v}, [vi](Tape& tape, std::size_t self) {
    if (!tape.requires_grad(vi)) return;
    const Tensor& g = tape.grad_of(self);
    Tensor& gv = tape.grad_of(vi);
    const std::size_t d = g.cols();
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < d; ++c) gv[c] += g(r, c);
  });
}

Var reshape(Var x, Shape shape) {
  if (shape_size(shape) != x.value().size())
    throw std::invalid_argument("reshape: " + shape_string(x.shape()) + " -> " + shape_string(shape));
  Tensor out(std::move(shape), std::vector<double>(x.value().values().begin(), x.value().values().end()));
  const std::size_t xi = x.index();
  return x.tape().record(std::move(out), {x}, [xi](Tape& tape, std::size_t self) {
    if (tape.requires_grad(xi)) {
      Tensor& gx = tape.grad_of(xi);
      const Tensor& g = tape.grad_of(self);
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
  });
}

Var sum(Var x) {
  double total = 0.0;
  for (double v : x.value().values()) total += v;
  const std::size_t xi = x.index();
  return x.tape().record(Tensor::scalar(total), {x}, [xi](Tape& tape, std::size_t self) {
    if (!tape.requires_grad(xi)) return;
    const double g = tape.grad_of(self)[0];
    for (auto& v : tape.grad_of(xi).values()) v += g;
  });
}

Var gaussian_log_density(const Tensor& target, Var mean, Var sigma) {
  require_same_shape("gaussian_log_density", mean, sigma);
  if (target.shape() != mean.shape())
    throw std::invalid_argument("gaussian_log_density: target shape " + shape_string(target.shape()) +
                                " vs " + shape_string(mean.shape()));
  const Tensor& mu = mean.value();
  const Tensor& sd = sigma.value();
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(sd[i] > 0.0)) throw std::invalid_argument("gaussian_log_density: sigma must be positive");
    const double z = (target[i] - mu[i]) / sd[i];
    total += -std::log(sd[i]) - half_log_two_pi - 0.5 * z * z;
  }
  const std::size_t mi = mean.index(), si = sigma.index();
  return mean.tape().record(Tensor::scalar(total), {mean, sigma}, [mi, si, target](Tape& tape, std::size_t self) {
    const double g = tape.grad_of(self)[0];
    const Tensor& mu = tape.value_of(mi);
    const Tensor& sd = tape.value_of(si);
    const bool need_mu = tape.requires_grad(mi), need_sd = tape.requires_grad(si);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double diff = target[i] - mu[i];
      const double inv_var = 1.0 / (sd[i] * sd[i]);
      if (need_mu) tape.grad_of(mi)[i] += g * diff * inv_var;
      if (need_sd) tape.grad_of(si)[i] += g * (-1.0 / sd[i] + diff * diff * inv_var / sd[i]);
    }
  });
}

Var kl_diag_gaussians(Var q_mu, Var q_sigma, Var p_mu, Var p_sigma) {
  require_same_shape("kl_diag_gaussians", q_mu, q_sigma);
  require_same_shape("kl_diag_gaussians", q_mu, p_mu);
  require_same_shape("kl_diag_gaussians", q_mu, p_sigma);
  const Tensor& qm = q_mu.value();
  const Tensor& qs = q_sigma.value();
  const Tensor& pm = p_mu.value();
  const Tensor& ps = p_sigma.value();
  double total = 0.0;
  for (std::size_t i = 0; i < qm.size(); ++i) {
    if (!(qs[i] > 0.0) || !(ps[i] > 0.0)) throw std::invalid_argument("kl_diag_gaussians: sigma must be positive");
    const double d = qm[i] - pm[i];
    total += std::log(ps[i] / qs[i]) + (qs[i] * qs[i] + d * d) / (2.0 * ps[i] * ps[i]) - 0.5;
  }
  const std::size_t a = q_mu.index(), b = q_sigma.index(), c = p_mu.index(), e = p_sigma.index();
  return q_mu.tape().record(Tensor::scalar(total), {q_mu, q_sigma, p_mu, p_sigma},
                            [a, b, c, e](Tape& tape, std::size_t self) {
                              const double g = tape.grad_of(self)[0];
                              const Tensor& qm = tape.value_of(a);
                              const Tensor& qs = tape.value_of(b);
                              const Tensor& pm = tape.value_of(c);
                              const Tensor& ps = tape.value_of(e);
                              for (std::size_t i = 0; i < qm.size(); ++i) {
                                const double d = qm[i] - pm[i];
                                const double inv_pv = 1.0 / (ps[i] * ps[i]);
                                if (tape.requires_grad(a)) tape.grad_of(a)[i] += g * d * inv_pv;
                                if (tape.requires_grad(c)) tape.grad_of(c)[i] -= g * d * inv_pv;
                                if (tape.requires_grad(b)) tape.grad_of(b)[i] += g * (-1.0 / qs[i] + qs[i] * inv_pv);
                                if (tape.requires_grad(e))
                                  tape.grad_of(e)[i] += g * (1.0 / ps[i] - (qs[i] * qs[i] + d * d) * inv_pv / ps[i]);
                              }
                            });
}

Var softmax_cross_entropy(Var logits, std::span<const std::uint32_t> labels) {
  require_matrix("softmax_cross_entropy", logits);
  const Tensor& in = logits.value();
  if (labels.size() != in.rows()) throw std::invalid_argument("softmax_cross_entropy: one label per row required");
  const std::size_t cols = in.cols();
  Tensor probs(in.shape());
  double total = 0.0;
  for (std::size_t r = 0; r < in.rows(); ++r) {
    if (labels[r] >= cols) throw std::out_of_range("softmax_cross_entropy: label out of range");
    auto src = in.row(r);
    const double peak = *std::max_element(src.begin(), src.end());
    double norm = 0.0;
    for (std::size_t c = 0; c < cols; ++c) norm += probs(r, c) = std::exp(src[c] - peak);
    for (std::size_t c = 0; c < cols; ++c) probs(r, c) /= norm;
    total -= src[labels[r]] - peak - std::log(norm);
  }
  std::vector<std::uint32_t> y(labels.begin(), labels.end());
  const std::size_t li = logits.index();
  return logits.tape().record(Tensor::scalar(total), {logits},
                              [li, y = std::move(y), probs = std::move(probs)](Tape& tape, std::size_t self) {
                                if (!tape.requires_grad(li)) return;
                                const double g = tape.grad_of(self)[0];
                                Tensor& gl = tape.grad_of(li);
                                const std::size_t cols = probs.cols();
                                for (std::size_t r = 0; r < y.size(); ++r)
                                  for (std::size_t c = 0; c < cols; ++c)
                                    gl(r, c) += g * (probs(r, c) - (c == y[r] ? 1.0 : 0.0));
                              });
}

}  // namespace mpnp::ad
