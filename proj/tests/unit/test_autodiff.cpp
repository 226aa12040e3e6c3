#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "../support/gradcheck.hpp"
#include "../support/primitive_cases.hpp"
#include "mpnp/autodiff/adam.hpp"
#include "mpnp/autodiff/gaussian.hpp"
#include "mpnp/autodiff/ops.hpp"

using namespace mpnp;
using ad::Tape;
using ad::Tensor;
using ad::Var;
using test_support::away_from_zero;
using test_support::gradcheck;
using test_support::random_tensor;

namespace {

constexpr int kInstances = 100;
constexpr double kTol = 1e-5;

Tensor naive_affine(const Tensor& w, const Tensor& b, const Tensor& x) {
  const std::size_t out = w.shape()[0], in = w.shape()[1];
  Tensor y({x.rows(), out});
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t o = 0; o < out; ++o) {
      double s = b[o];
      for (std::size_t i = 0; i < in; ++i) s += w(o, i) * x(r, i);
      y(r, o) = s;
    }
  return y;
}


}  // namespace

TEST(Tensor, RejectsZeroDimensionsAndCountMismatch) {
  EXPECT_THROW(Tensor({0, 3}), std::invalid_argument);
  EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_EQ(Tensor({2, 3}).size(), 6u);
}

TEST(Linear, IdentityMap) {
  Tape tape;
  Var y = ad::linear(tape.constant(Tensor::matrix({{1, 0}, {0, 1}})), tape.constant(Tensor::vector({0, 0})),
                     tape.constant(Tensor::vector({3, 4})));
  EXPECT_EQ(y.value()[0], 3.0);
  EXPECT_EQ(y.value()[1], 4.0);
}

TEST(Linear, RowSumPlusBias) {
  Tape tape;
  Var y = ad::linear(tape.constant(Tensor::matrix({{1, 1}})), tape.constant(Tensor::vector({1})),
                     tape.constant(Tensor::vector({2, 3})));
  EXPECT_EQ(y.value().item(), 6.0);
}

TEST(Linear, MatchesNaiveTripleLoop) {
  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const Tensor w = random_tensor(rng, {4, 3}), b = random_tensor(rng, {4}), x = random_tensor(rng, {5, 3});
    Tape tape;
    const Tensor y = ad::linear(tape.constant(w), tape.constant(b), tape.constant(x)).value();
    const Tensor ref = naive_affine(w, b, x);
    ASSERT_EQ(y.shape(), ref.shape());
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y[i], ref[i], 1e-14);
  }
}

TEST(Linear, ShapeMismatchThrows) {
  Tape tape;
  EXPECT_THROW(ad::linear(tape.constant(Tensor({4, 3})), tape.constant(Tensor({4})), tape.constant(Tensor({2, 5}))),
               std::invalid_argument);
  EXPECT_THROW(ad::linear(tape.constant(Tensor({4, 3})), tape.constant(Tensor({3})), tape.constant(Tensor({2, 3}))),
               std::invalid_argument);
}

TEST(Activations, ReluSoftplusSoftmaxValues) {
  Tape tape;
  const Tensor r = ad::relu(tape.constant(Tensor::vector({-1, 2}))).value();
  EXPECT_EQ(r[0], 0.0);
  EXPECT_EQ(r[1], 2.0);
  EXPECT_NEAR(ad::softplus(tape.constant(Tensor::scalar(0))).value().item(), std::log(2.0), 1e-15);
  const Tensor s = ad::softmax_lastaxis(tape.constant(Tensor::vector({0, 0, 0}))).value();
  for (double v : s.values()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Activations, SoftmaxRowsSumToOneAndSoftplusIsStable) {
  Rng rng(5);
  Tape tape;
  const Tensor s = ad::softmax_lastaxis(tape.constant(random_tensor(rng, {50, 7}, -300, 300))).value();
  for (std::size_t r = 0; r < s.rows(); ++r) {
    const auto row = s.row(r);
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
  }
  const Tensor sp = ad::softplus(tape.constant(Tensor::vector({-800, 800}))).value();
  EXPECT_GE(sp[0], 0.0);
  EXPECT_EQ(sp[1], 800.0);
}

TEST(Maxout, PoolsHalves) {
  Tape tape;
  const Tensor y = ad::maxout(tape.constant(Tensor::vector({1, 5, 3, 2}))).value();
  EXPECT_EQ(y[0], 3.0);
  EXPECT_EQ(y[1], 5.0);
  EXPECT_THROW(ad::maxout(tape.constant(Tensor::vector({1, 2, 3}))), std::invalid_argument);
}

TEST(Maxout, TieSendsGradientToFirstHalf) {
  Tape tape;
  Var x = tape.variable(Tensor::vector({2, 2}));
  tape.backward(ad::sum(ad::maxout(x)));
  EXPECT_EQ(x.grad()[0], 1.0);
  EXPECT_EQ(x.grad()[1], 0.0);
}

TEST(Maxout, MatchesElementwiseMax) {
  Rng rng(3);
  Tape tape;
  const Tensor x = random_tensor(rng, {6, 8});
  const Tensor y = ad::maxout(tape.constant(x)).value();
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(y(r, c), std::max(x(r, c), x(r, c + 4)));
}

TEST(SegmentSum, SmallCases) {
  Tape tape;
  const std::uint32_t ids[] = {0, 0, 1};
  const Tensor y = ad::segment_sum(tape.constant(Tensor({3, 1}, {1, 2, 3})), ids, 2).value();
  EXPECT_EQ(y[0], 3.0);
  EXPECT_EQ(y[1], 3.0);
  const Tensor z = ad::segment_sum(tape.constant(Tensor({3, 1}, {1, 2, 3})), ids, 3).value();
  EXPECT_EQ(z[2], 0.0);
  const std::uint32_t bad[] = {0, 3, 1};
  EXPECT_THROW(ad::segment_sum(tape.constant(Tensor({3, 1})), bad, 3), std::out_of_range);
}

TEST(SegmentSum, MatchesNaiveLoopAndIsPermutationInvariant) {
  Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 1 + uniform_index(rng, 0, 20), d = 1 + uniform_index(rng, 0, 4), segs = 1 + uniform_index(rng, 0, 5);
    const Tensor x = random_tensor(rng, {n, d});
    std::vector<std::uint32_t> ids(n);
    for (auto& i : ids) i = static_cast<std::uint32_t>(uniform_index(rng, 0, segs - 1));
    Tensor ref({segs, d});
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < d; ++c) ref(ids[r], c) += x(r, c);
    Tape tape;
    const Tensor y = ad::segment_sum(tape.constant(x), ids, segs).value();
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y[i], ref[i], 1e-14);

    auto perm = sample_without_replacement(rng, n, n);
    Tensor xp({n, d});
    std::vector<std::uint32_t> idp(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) xp(r, c) = x(perm[r], c);
      idp[r] = ids[perm[r]];
    }
    const Tensor yp = ad::segment_sum(tape.constant(xp), idp, segs).value();
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(yp[i], y[i], 1e-12);
  }
}

TEST(Backward, LinearFunctionalGradientReplicatesInput) {
  Tape tape;
  ad::Parameter w{"w", Tensor::matrix({{0.5, -1}, {2, 3}}), {}};
  Var wv = tape.parameter(w);
  Var x = tape.constant(Tensor({3, 2}, {1, 2, 3, 4, 5, 6}));
  tape.backward(ad::sum(ad::linear(wv, x)));
  // d/dW_oi sum_r sum_o W_oi x_ri = sum_r x_ri for every output row o.
  EXPECT_EQ(w.grad(0, 0), 9.0);
  EXPECT_EQ(w.grad(0, 1), 12.0);
  EXPECT_EQ(w.grad(1, 0), 9.0);
  EXPECT_EQ(w.grad(1, 1), 12.0);
}

TEST(Backward, DisconnectedParameterGetsZero) {
  ad::ParameterSet params;
  Rng rng(1);
  params.add_uniform("used", {2, 2}, 2, rng);
  params.add_uniform("unused", {3}, 3, rng);
  params.zero_grad();
  Tape tape;
  Var used = tape.parameter(params[0]);
  tape.parameter(params[1]);
  tape.backward(ad::sum(used));
  for (double g : params[1].grad.values()) EXPECT_EQ(g, 0.0);
  for (double g : params[0].grad.values()) EXPECT_EQ(g, 1.0);
}

TEST(Backward, NonScalarLossThrows) {
  Tape tape;
  Var x = tape.variable(Tensor({2, 2}));
  EXPECT_THROW(tape.backward(x), std::invalid_argument);
}

TEST(Backward, NonFiniteForwardValueThrows) {
  Tape tape;
  EXPECT_THROW(ad::scale(tape.variable(Tensor::scalar(1e308)), 1e10), ad::NumericalError);
}

TEST(Gradcheck, EveryPrimitive) {
  Rng rng(2024);
  for (const auto& c : test_support::primitive_cases()) {
    double worst = 0.0;
    for (int k = 0; k < kInstances; ++k) worst = std::max(worst, c.run(rng));
    EXPECT_LE(worst, kTol) << c.name;
  }
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  ad::ParameterSet params;
  params.add("w", Tensor::vector({1.0, -2.0}));
  params.zero_grad();
  ad::AdamState state(params, {});
  ad::adam_step(params, state);
  EXPECT_EQ(params[0].value, Tensor::vector({1.0, -2.0}));
  EXPECT_EQ(state.step_count(), 1u);
}

TEST(Adam, OneStepMatchesHandRecurrence) {
  ad::ParameterSet params;
  params.add("w", Tensor::scalar(0.5));
  params[0].grad = Tensor::scalar(1.0);
  ad::AdamConfig cfg;
  ad::AdamState state(params, cfg);
  ad::adam_step(params, state);
  const double m = (1 - 0.9) * 1.0, v = (1 - 0.999) * 1.0;
  const double mhat = m / (1 - 0.9), vhat = v / (1 - 0.999);
  EXPECT_DOUBLE_EQ(params[0].value.item(), 0.5 - 1e-3 * mhat / (std::sqrt(vhat) + 1e-8));
}

TEST(Adam, TwoStepsDifferFromOneDoubleStep) {
  auto run = [](double lr, int steps, double g) {
    ad::ParameterSet params;
    params.add("w", Tensor::scalar(0.0));
    ad::AdamConfig cfg;
    cfg.learning_rate = lr;
    ad::AdamState state(params, cfg);
    for (int i = 0; i < steps; ++i) {
      params[0].grad = Tensor::scalar(g);
      ad::adam_step(params, state);
      g *= 0.5;
    }
    return params[0].value.item();
  };
  // Reference recurrence for g = 1 then 0.5.
  double m = 0, v = 0, w = 0;
  const double grads[] = {1.0, 0.5};
  for (int t = 1; t <= 2; ++t) {
    m = 0.9 * m + 0.1 * grads[t - 1];
    v = 0.999 * v + 0.001 * grads[t - 1] * grads[t - 1];
    w -= 1e-3 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
  }
  EXPECT_NEAR(run(1e-3, 2, 1.0), w, 1e-16);
  EXPECT_NE(run(1e-3, 2, 1.0), run(2e-3, 1, 1.0));
}

TEST(Adam, ShapeMismatchThrows) {
  ad::ParameterSet params;
  params.add("w", Tensor::vector({1.0, 2.0}));
  ad::AdamState state(params, {});
  params[0].grad = Tensor::vector({1.0, 2.0, 3.0});
  EXPECT_THROW(ad::adam_step(params, state), std::invalid_argument);
}

TEST(Reparam, DegenerateCases) {
  Tape tape;
  Var mu = tape.constant(Tensor({1, 3}, {1, 2, 3}));
  EXPECT_EQ(ad::reparam_sample({mu, tape.constant(Tensor({1, 3}, 0.7))}, Tensor({1, 3}, 0.0)).value(), mu.value());
  EXPECT_EQ(ad::reparam_sample({mu, tape.constant(Tensor({1, 3}, 0.0))}, Tensor({1, 3}, {5, -4, 9})).value(), mu.value());
  EXPECT_THROW(ad::reparam_sample({mu, mu}, Tensor({1, 2})), std::invalid_argument);
}

TEST(Reparam, MonteCarloMomentsWithinThreeStandardErrors) {
  Rng rng(77);
  const double mu = 0.4, sigma = 1.3;
  const int n = 100000;
  Tape tape(false);
  Var m = tape.constant(Tensor::scalar(mu)), s = tape.constant(Tensor::scalar(sigma));
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = ad::reparam_sample({m, s}, Tensor::scalar(standard_normal(rng))).value().item();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  EXPECT_NEAR(mean, mu, 3 * sigma / std::sqrt(n));
  // Standard error of the sample standard deviation is about sigma / sqrt(2n).
  EXPECT_NEAR(std::sqrt(var), sigma, 3 * sigma / std::sqrt(2.0 * n));
}

TEST(KL, ClosedFormCases) {
  const ad::DiagGaussian q{Tensor::vector({0.0}), Tensor::vector({1.0})};
  const ad::DiagGaussian p{Tensor::vector({1.0}), Tensor::vector({1.0})};
  EXPECT_EQ(ad::kl_diag_gaussians(q, q), 0.0);
  EXPECT_DOUBLE_EQ(ad::kl_diag_gaussians(q, p), 0.5);
  const ad::DiagGaussian bad{Tensor::vector({0.0}), Tensor::vector({0.0})};
  EXPECT_THROW(ad::kl_diag_gaussians(q, bad), std::invalid_argument);
}

TEST(KL, MatchesQuadratureAndIsNonNegative) {
  Rng rng(99);
  for (int k = 0; k < 20; ++k) {
    const double qm = 2 * uniform01(rng) - 1, qs = 0.3 + uniform01(rng), pm = 2 * uniform01(rng) - 1,
                 ps = 0.3 + uniform01(rng);
    const double kl =
        ad::kl_diag_gaussians(ad::DiagGaussian{Tensor::vector({qm}), Tensor::vector({qs})},
                              ad::DiagGaussian{Tensor::vector({pm}), Tensor::vector({ps})});
    EXPECT_GE(kl, 0.0);
    auto logpdf = [](double x, double m, double s) {
      return -0.5 * std::log(2 * M_PI * s * s) - (x - m) * (x - m) / (2 * s * s);
    };
    // Simpson's rule over +-12 q-sigmas.
    const int steps = 20000;
    const double lo = qm - 12 * qs, hi = qm + 12 * qs, h = (hi - lo) / steps;
    double integral = 0;
    for (int i = 0; i <= steps; ++i) {
      const double x = lo + i * h;
      const double lq = logpdf(x, qm, qs);
      const double f = std::exp(lq) * (lq - logpdf(x, pm, ps));
      integral += f * (i == 0 || i == steps ? 1 : (i % 2 ? 4 : 2));
    }
    integral *= h / 3;
    EXPECT_NEAR(kl, integral, 1e-4);
  }
}

TEST(Determinism, RepeatedForwardIsBitwiseIdentical) {
  Rng rng(4);
  const Tensor w = random_tensor(rng, {16, 8}), b = random_tensor(rng, {16}), x = random_tensor(rng, {30, 8});
  auto run = [&] {
    Tape tape;
    return ad::softmax_lastaxis(ad::relu(ad::linear(tape.constant(w), tape.constant(b), tape.constant(x)))).value();
  };
  EXPECT_EQ(run(), run());
}
