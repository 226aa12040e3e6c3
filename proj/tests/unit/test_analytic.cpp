#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mpnp/analytic/life_solution.hpp"
#include "mpnp/autodiff/tape.hpp"
#include "mpnp/ca/step.hpp"
#include "mpnp/graph/generators.hpp"

using namespace mpnp;
using namespace mpnp::analytic;
using ad::Tensor;

namespace {

Tensor apply(const OneHotLayer& layer, std::vector<double> xs) {
  ad::Tape tape(false);
  return apply_one_hot(layer, tape.constant(Tensor({xs.size(), 1}, xs))).value();
}

ca::LifeRule random_rule(Rng& rng) {
  return ca::LifeRule::from_code(static_cast<std::uint32_t>(uniform_index(rng, 0, (1u << 18) - 1)));
}

}  // namespace

TEST(OneHotLayer, IntegerInputsGiveBasisVectors) {
  const auto layer = build_one_hot_layer(9);
  EXPECT_EQ(layer.width, 9u);
  // Stated weights: W1 = -1, W2 = 1, b1 = (j - 1), b2 = (-j - 1).
  for (std::size_t j = 0; j < 9; ++j) {
    EXPECT_EQ(layer.maxout_bias[j], static_cast<double>(j) - 1);
    EXPECT_EQ(layer.maxout_bias[9 + j], -static_cast<double>(j) - 1);
  }
  std::vector<double> xs(9);
  for (std::size_t i = 0; i < 9; ++i) xs[i] = static_cast<double>(i);
  const auto out = apply(layer, xs);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) EXPECT_EQ(out(i, j), i == j ? 1.0 : 0.0) << i << "," << j;
}

TEST(OneHotLayer, HatSlopeBetweenIntegers) {
  const auto layer = build_one_hot_layer(9);
  const auto out = apply(layer, {3.5, 2.5, 0.25});
  EXPECT_DOUBLE_EQ(out(0, 3), 0.5);
  EXPECT_DOUBLE_EQ(out(0, 4), 0.5);
  EXPECT_DOUBLE_EQ(out(1, 3), 0.5);
  EXPECT_DOUBLE_EQ(out(2, 0), 0.75);
  EXPECT_DOUBLE_EQ(out(2, 1), 0.25);
  EXPECT_DOUBLE_EQ(out(0, 0), 0.0);
}

TEST(EncodeCondition, IndexConventionAndBijection) {
  auto hot = [](const std::array<double, kConditions>& v) {
    std::size_t idx = kConditions, ones = 0;
    for (std::size_t i = 0; i < kConditions; ++i) {
      EXPECT_TRUE(v[i] == 0.0 || v[i] == 1.0);
      if (v[i] == 1.0) {
        idx = i;
        ++ones;
      }
    }
    EXPECT_EQ(ones, 1u);
    return idx;
  };
  EXPECT_EQ(hot(encode_condition(0, 3)), 3u);
  EXPECT_EQ(hot(encode_condition(1, 0)), 9u);
  std::set<std::size_t> seen;
  for (std::uint32_t s = 0; s < 2; ++s)
    for (std::uint32_t c = 0; c < 9; ++c) seen.insert(hot(encode_condition(s, c)));
  EXPECT_EQ(seen.size(), kConditions);
  EXPECT_THROW(encode_condition(2, 0), std::out_of_range);
  EXPECT_THROW(encode_condition(0, 9), std::out_of_range);
}

TEST(ConditionCodes, MatchDirectCounts) {
  Rng rng(1);
  const auto g = graph::torus_lattice(12, 12);
  ca::State s(g.num_nodes());
  for (auto& v : s) v = uniform01(rng) < 0.4;
  ad::Tape tape(false);
  const auto codes = condition_codes(tape, g, s).value();
  const auto counts = ca::live_neighbour_counts(g, s);
  for (std::size_t v = 0; v < g.num_nodes(); ++v)
    for (std::size_t k = 0; k < kConditions; ++k) EXPECT_EQ(codes(v, k), k == s[v] * 9 + counts[v] ? 1.0 : 0.0);
}

TEST(AnalyticLatent, EmptyRuleAndConway) {
  Rng rng(2);
  const auto dead = ca::gen_life_example(ca::LifeRule::parse("B/S"), rng);
  const auto z = analytic_latent(dead);
  for (std::size_t i = 0; i < kConditions; ++i) {
    EXPECT_EQ(z[i], 0.0);
    EXPECT_EQ(z[kConditions + i], 1.0);
  }
  const auto conway = ca::gen_life_example(ca::LifeRule::parse("B3/S23"), rng);
  const auto zc = analytic_latent(conway);
  for (std::size_t i = 0; i < kConditions; ++i) {
    const bool alive = i == 3 || i == 9 + 2 || i == 9 + 3;
    EXPECT_EQ(zc[i], alive ? 1.0 : 0.0) << i;
    EXPECT_EQ(zc[kConditions + i], alive ? 0.0 : 1.0) << i;
  }
}

TEST(AnalyticLatent, RequiresFullContextForExampleOverload) {
  Rng rng(3);
  auto ex = ca::gen_life_example(ca::LifeRule::parse("B3/S23"), rng);
  const std::vector<graph::NodeId> some{0, 1, 2};
  const std::vector<std::uint32_t> out{ex.state_out[0], ex.state_out[1], ex.state_out[2]};
  const auto partial = analytic_latent(ex.graph, ex.state_in, some, out);
  double ones = 0;
  for (double v : partial) ones += v;
  EXPECT_LE(ones, 3.0);
  const std::vector<std::uint32_t> short_out{1};
  EXPECT_THROW(analytic_latent(ex.graph, ex.state_in, some, short_out), std::invalid_argument);
}

TEST(AnalyticDecode, AndAgainstEitherHalf) {
  graph::Graph pair(2, {{0, 1}});
  const ca::State in{1, 0};  // node 0: state 1, count 0 (index 9); node 1: state 0, count 1 (index 1)
  AnalyticLatent z{};
  z[9] = 1.0;                // alive half
  z[kConditions + 1] = 1.0;  // dead half
  const auto d = analytic_decode_detailed(z, pair, in);
  EXPECT_EQ(d.state, (ca::State{1, 0}));
  EXPECT_EQ(d.unknown, (std::vector<char>{0, 0}));
  AnalyticLatent none{};
  const auto u = analytic_decode_detailed(none, pair, in);
  EXPECT_EQ(u.unknown, (std::vector<char>{1, 1}));
}

TEST(AnalyticDecode, ReproducesLifeStepForRandomRules) {
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const auto rule = random_rule(rng);
    const auto ex = ca::gen_life_example(rule, rng);
    const auto z = analytic_latent(ex);
    for (std::size_t i = 0; i < kConditions; ++i) EXPECT_EQ(z[i] * z[kConditions + i], 0.0);
    // Evolve a fresh state with the latent learned from the first one.
    ca::State fresh(ex.graph.num_nodes());
    for (auto& v : fresh) v = uniform01(rng) < 0.5;
    EXPECT_EQ(analytic_decode(z, ex.graph, fresh), ca::life_step(ex.graph, fresh, rule)) << rule.notation();
    const auto report = verify_example(ex);
    EXPECT_TRUE(report.passed());
    EXPECT_EQ(report.nodes, 900u);
  }
}
