#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "../support/naive_ca.hpp"
#include "mpnp/ca/dataset.hpp"
#include "mpnp/ca/examples.hpp"
#include "mpnp/ca/rules.hpp"
#include "mpnp/ca/step.hpp"
#include "mpnp/graph/generators.hpp"

using namespace mpnp;
using namespace mpnp::ca;
using test_support::naive_density;
using test_support::naive_life;

namespace {

State random_state(Rng& rng, std::size_t n) {
  State s(n);
  for (auto& v : s) v = uniform01(rng) < 0.5;
  return s;
}

}  // namespace

TEST(LifeRuleType, CodesAndNotation) {
  const auto conway = LifeRule::parse("B3/S23");
  EXPECT_EQ(conway.birth, 1u << 3);
  EXPECT_EQ(conway.survive, (1u << 2) | (1u << 3));
  EXPECT_EQ(conway.notation(), "B3/S23");
  EXPECT_EQ(LifeRule::from_code(conway.code()), conway);
  EXPECT_THROW(LifeRule::from_code(kLifeRuleCount), std::out_of_range);
}

TEST(LifeStep, Blinker) {
  const auto g = graph::torus_lattice(5, 5);
  State s(25, 0);
  s[1 * 5 + 2] = s[2 * 5 + 2] = s[3 * 5 + 2] = 1;
  State expect(25, 0);
  expect[2 * 5 + 1] = expect[2 * 5 + 2] = expect[2 * 5 + 3] = 1;
  EXPECT_EQ(life_step(g, s, LifeRule::parse("B3/S23")), expect);
}

TEST(LifeStep, ExtremeRules) {
  Rng rng(1);
  const auto g = graph::torus_lattice(30, 30);
  const auto s = random_state(rng, 900);
  EXPECT_EQ(life_step(g, s, LifeRule{0, 0}), State(900, 0));
  EXPECT_EQ(life_step(g, s, LifeRule{0x1ff, 0x1ff}), State(900, 1));
  State bad = s;
  bad[0] = 2;
  EXPECT_THROW(life_step(g, bad, LifeRule{}), std::invalid_argument);
}

TEST(LifeStep, MatchesNaiveOracle) {
  const auto g = graph::torus_lattice(30, 30);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    Rng rng(k);
    const auto rule = LifeRule::from_code(static_cast<std::uint32_t>(uniform_index(rng, 0, kLifeRuleCount - 1)));
    const auto s = random_state(rng, 900);
    ASSERT_EQ(life_step(g, s, rule), naive_life(30, 30, s, rule.birth, rule.survive)) << "instance " << k;
  }
}

TEST(DensityStep, IntervalForms) {
  EXPECT_EQ(top_hat(0.2, 0.3, 0.6), 0);
  EXPECT_EQ(top_hat(0.3, 0.3, 0.6), 1);
  EXPECT_EQ(top_hat(0.6, 0.3, 0.6), 1);
  EXPECT_EQ(top_hat(0.61, 0.3, 0.6), 0);
  for (double d : {0.0, 0.3, 0.45, 0.6, 1.0}) {
    IntervalRule in{IntervalForm::kInside, 0.3, 0.6}, out{IntervalForm::kOutside, 0.3, 0.6};
    EXPECT_EQ(out(d), 1 - in(d));
  }
}

TEST(DensityStep, FullSurviveIntervalKeepsEveryLiveCell) {
  Rng rng(2);
  const auto g = graph::watts_strogatz(120, 10, 0.1, rng);
  const auto s = random_state(rng, 120);
  DensityRule rule{{IntervalForm::kInside, 2.0, 3.0}, {IntervalForm::kInside, 0.0, 1.0}};
  const auto next = density_step(g, s, rule);
  for (std::size_t i = 0; i < 120; ++i) EXPECT_EQ(next[i], s[i]);
}

TEST(DensityStep, MatchesNaiveOracle) {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    Rng rng(k);
    const auto family = static_cast<Family>(k % 4);
    const auto g = make_family_graph(family, 20 + k % 40, {}, rng);
    const auto rule = sample_density_rule(rng);
    const auto s = random_state(rng, g.num_nodes());
    ASSERT_EQ(density_step(g, s, rule), naive_density(g, s, rule)) << "instance " << k;
  }
}

TEST(DensityStep, IsolatedNodeSeesZeroDensity) {
  graph::Graph g(3, {{0, 1}});
  const State s{1, 1, 0};
  DensityRule rule{{IntervalForm::kInside, 0.0, 0.0}, {IntervalForm::kInside, 0.5, 1.0}};
  EXPECT_EQ(density_step(g, s, rule), (State{1, 1, 1}));
}

TEST(Step, SimultaneousUpdateIsPermutationEquivariant) {
  for (std::uint64_t k = 0; k < 50; ++k) {
    Rng rng(k);
    const auto g = make_family_graph(Family::kBarabasiAlbert, 60, {}, rng);
    const auto rule = sample_density_rule(rng);
    const auto s = random_state(rng, 60);
    std::vector<std::uint32_t> perm(60);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    State ps(60);
    for (std::size_t i = 0; i < 60; ++i) ps[perm[i]] = s[i];
    const auto a = density_step(g, s, rule);
    const auto b = density_step(g.permuted(perm), ps, rule);
    for (std::size_t i = 0; i < 60; ++i) EXPECT_EQ(b[perm[i]], a[i]);
  }
}

TEST(RuleSampling, LifeBernoulliCount) {
  Rng none(1);
  EXPECT_TRUE(sample_life_rules(1e-9, none).empty());
  const double mean = 0.01 * kLifeRuleCount, sd = std::sqrt(kLifeRuleCount * 0.01 * 0.99);
  double total = 0;
  const int seeds = 30;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(s);
    const auto rules = sample_life_rules(0.01, rng);
    EXPECT_NEAR(static_cast<double>(rules.size()), mean, 4 * sd);
    std::set<std::uint32_t> codes;
    for (const auto& r : rules) codes.insert(r.code());
    EXPECT_EQ(codes.size(), rules.size());
    total += static_cast<double>(rules.size());
  }
  EXPECT_NEAR(total / seeds, mean, 3 * sd / std::sqrt(seeds));
}

TEST(RuleSampling, DensityRulesOrdered) {
  Rng rng(3);
  int r1 = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto r = sample_density_rule(rng);
    for (const auto& part : {r.birth, r.survive}) {
      EXPECT_LE(0.0, part.k1);
      EXPECT_LT(part.k1, part.k2);
      EXPECT_LE(part.k2, 1.0);
      r1 += part.form == IntervalForm::kOutside;
    }
  }
  EXPECT_NEAR(r1 / 4000.0, 0.5, 0.05);
}

TEST(Coverage, CensusAndRejection) {
  const auto g = graph::torus_lattice(30, 30);
  EXPECT_FALSE(covers_all_conditions(g, State(900, 0)));
  Rng rng(4);
  const auto s = random_state(rng, 900);
  const auto census = condition_census(g, s);
  std::array<std::size_t, 18> expect{};
  const auto counts = live_neighbour_counts(g, s);
  for (std::size_t i = 0; i < 900; ++i) ++expect[s[i] * 9 + counts[i]];
  EXPECT_EQ(census, expect);
  bool all = true;
  for (auto c : expect) all = all && c > 0;
  EXPECT_EQ(covers_all_conditions(g, s), all);
}

TEST(Examples, LifeExampleIsCoveredAndStepped) {
  Rng rng(5);
  const auto rule = LifeRule::parse("B36/S23");
  const auto ex = gen_life_example(rule, rng);
  EXPECT_TRUE(covers_all_conditions(ex.graph, ex.state_in));
  EXPECT_EQ(ex.state_out, naive_life(30, 30, ex.state_in, rule.birth, rule.survive));
  EXPECT_EQ(*ex.graph.labels(), ex.state_out);
}

TEST(Examples, DensityExamplesMatchOracle) {
  double total_nodes = 0;
  const int count = 200;
  for (int k = 0; k < count; ++k) {
    Rng rng(k);
    const auto ex = gen_density_example(static_cast<Family>(k % 4), rng);
    EXPECT_GE(ex.graph.num_nodes(), 100u);
    EXPECT_LE(ex.graph.num_nodes(), 200u);
    EXPECT_EQ(ex.state_out, naive_density(ex.graph, ex.state_in, std::get<DensityRule>(ex.rule)));
    total_nodes += static_cast<double>(ex.graph.num_nodes());
  }
  // Uniform on [100, 200]: mean 150, sd about 29.
  EXPECT_NEAR(total_nodes / count, 150.0, 3 * 29.2 / std::sqrt(count));
}

TEST(Split, SizesAndDisjointness) {
  std::vector<int> rules(10);
  std::iota(rules.begin(), rules.end(), 0);
  const auto s = split_disjoint(rules, {0.8, 0.1, 0.1}, 7);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.val.size(), 1u);
  EXPECT_EQ(s.test.size(), 1u);
  std::set<int> all(s.train.begin(), s.train.end());
  all.insert(s.val.begin(), s.val.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 10u);
  const auto again = split_disjoint(rules, {0.8, 0.1, 0.1}, 7);
  EXPECT_EQ(again.train, s.train);
  EXPECT_THROW(split_disjoint(std::vector<int>{}, {0.8, 0.1, 0.1}, 7), std::invalid_argument);
  EXPECT_THROW(split_disjoint(rules, {0.8, 0.3, 0.1}, 7), std::invalid_argument);
}

TEST(Dataset, DensityManifestAndDeterminism) {
  const auto a = generate_density_dataset(Family::kWattsStrogatz, 50, {0.8, 0.1, 0.1}, 11);
  const auto b = generate_density_dataset(Family::kWattsStrogatz, 50, {0.8, 0.1, 0.1}, 11);
  EXPECT_EQ(a.train.size(), 40u);
  EXPECT_EQ(a.val.size(), 5u);
  EXPECT_EQ(a.test.size(), 5u);
  std::set<std::string> ids;
  std::size_t total = 0;
  for (const char* split : {"train", "val", "test"})
    for (const auto& id : a.manifest["splits"][split]["rule_ids"]) {
      ids.insert(id.get<std::string>());
      ++total;
    }
  EXPECT_EQ(ids.size(), total);
  EXPECT_EQ(a.manifest["seed"].get<std::uint64_t>(), 11u);

  std::ostringstream sa, sb;
  write_split(sa, {{"split", "train"}}, a.train);
  write_split(sb, {{"split", "train"}}, b.train);
  EXPECT_EQ(sa.str(), sb.str());

  std::istringstream in(sa.str());
  const auto back = read_split(in);
  ASSERT_EQ(back.examples.size(), a.train.size());
  for (std::size_t i = 0; i < back.examples.size(); ++i) {
    EXPECT_EQ(back.examples[i].state_out, a.train[i].state_out);
    EXPECT_EQ(back.examples[i].rule_id, a.train[i].rule_id);
    EXPECT_EQ(step(back.examples[i].graph, back.examples[i].state_in, back.examples[i].rule), back.examples[i].state_out);
  }
}

TEST(Dataset, LifeDatasetTruncated) {
  const auto d = generate_life_dataset(0.01, {0.8, 0.1, 0.1}, 3, 10);
  EXPECT_EQ(d.train.size() + d.val.size() + d.test.size(), 10u);
  for (const auto* split : {&d.train, &d.val, &d.test})
    for (const auto& ex : *split) {
      const auto& rule = std::get<LifeRule>(ex.rule);
      EXPECT_EQ(ex.state_out, naive_life(30, 30, ex.state_in, rule.birth, rule.survive));
    }
}
