#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "mpnp/baselines/mode.hpp"
#include "mpnp/graph/generators.hpp"
#include "mpnp/harness/active.hpp"
#include "mpnp/harness/cli.hpp"
#include "mpnp/harness/config.hpp"
#include "mpnp/harness/datasets.hpp"
#include "mpnp/harness/evaluate.hpp"
#include "mpnp/harness/metrics.hpp"
#include "mpnp/harness/train.hpp"
#include "mpnp/models/checkpoint.hpp"

using namespace mpnp;
using namespace mpnp::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mpnp_test_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig small_ws(std::size_t count = 40) {
  RunConfig c;
  c.task = TaskKind::kDensityWS;
  c.count = count;
  c.seed = 77;
  return c;
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

TEST(Metrics, AccuracyAndMiou) {
  const std::vector<std::uint32_t> t{0, 1, 1, 0};
  EXPECT_EQ(compute_accuracy(t, t), 1.0);
  EXPECT_EQ(compute_miou(t, t, 2), 1.0);
  const std::vector<std::uint32_t> all0{0, 0, 0, 0};
  EXPECT_DOUBLE_EQ(compute_miou(all0, t, 2), 0.25);
  // Only part 2 present: IoU = accuracy on it.
  const std::vector<std::uint32_t> twos{2, 2, 2, 2}, half{2, 2, 2, 2};
  EXPECT_EQ(compute_miou(twos, half, 3), compute_accuracy(twos, half));
  EXPECT_THROW(compute_accuracy(t, std::vector<std::uint32_t>{0}), std::invalid_argument);
}

TEST(Metrics, FMeasureAndMcc) {
  const std::vector<std::uint32_t> t{0, 1, 1, 0, 1};
  const auto perfect = compute_f_mcc(t, t);
  EXPECT_EQ(perfect.f_measure, 1.0);
  EXPECT_EQ(perfect.mcc, 1.0);
  EXPECT_EQ(f_mcc_from_confusion({1, 1, 1, 1}).mcc, 0.0);
  const auto s = f_mcc_from_confusion({2, 1, 1, 6});
  EXPECT_NEAR(s.f_measure, 2.0 / 3, 1e-15);
  // (2*6 - 1*1) / sqrt(3 * 3 * 7 * 7) = 11/21
  EXPECT_NEAR(s.mcc, 11.0 / 21, 1e-15);
  EXPECT_EQ(f_mcc_from_confusion({0, 0, 0, 5}).mcc, 0.0);

  const std::vector<std::uint32_t> pred{1, 1, 0, 0, 0, 0, 1, 0, 0, 1};
  const std::vector<std::uint32_t> truth{1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  const auto c = binary_confusion(pred, truth);
  EXPECT_EQ(c.tp, 2u);
  EXPECT_EQ(c.fp, 2u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.tn, 5u);
}

TEST(Metrics, RecordsAndMeanStd) {
  const std::vector<std::uint32_t> t{0, 1, 2};
  const auto m = compute_metrics(t, t, 3);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_TRUE(std::isnan(m.f_measure));
  EXPECT_TRUE(std::isnan(m.mcc));
  const std::vector<double> v{1, 2, 3, 4};
  const auto ms = mean_std(v);
  EXPECT_DOUBLE_EQ(ms.mean, 2.5);
  EXPECT_DOUBLE_EQ(ms.std, std::sqrt(1.25));
  std::vector<MetricsRecord> recs{{1, 1, 0.5, 0.2}, {0.5, 0.25, 0.5, 0.4}};
  const auto mean = mean_of(recs);
  EXPECT_DOUBLE_EQ(mean.accuracy, 0.75);
  EXPECT_DOUBLE_EQ(mean.mcc, 0.3);
}

TEST(Config, ValidationAndJson) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(task_name(parse_task("density-ba")), "density-ba");
  EXPECT_THROW(parse_task("chess"), ConfigError);
  auto bad = c;
  bad.lr = -1;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.context = {0.6, 0.4};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.split = {0.5, 0.1, 0.1};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.rates = {0.0};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.model = "transformer";
  EXPECT_THROW(bad.validate(), ConfigError);
  const auto j = to_json(c);
  EXPECT_EQ(j["task"], "density-ws");
  EXPECT_EQ(j["count"], 2700);
  EXPECT_EQ(j["seed"], 0);
}

TEST(Datasets, DefaultSplitCountsAndRegeneration) {
  RunConfig c = small_ws(2700);
  const auto data = generate_ca_dataset(c);
  EXPECT_EQ(data.train.size(), 2160u);
  EXPECT_EQ(data.val.size(), 270u);
  EXPECT_EQ(data.test.size(), 270u);

  auto small = small_ws(30);
  const auto a = scratch_dir("regen_a"), b = scratch_dir("regen_b");
  small.data_dir = a;
  gen_dataset(small);
  small.data_dir = b;
  gen_dataset(small);
  for (const char* f : {"train.jsonl", "val.jsonl", "test.jsonl", "manifest.json"}) {
    EXPECT_FALSE(slurp(a / f).empty()) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto loaded = load_dataset(a);
  EXPECT_EQ(loaded.train.size() + loaded.val.size() + loaded.test.size(), 30u);
  EXPECT_EQ(loaded.feature_dim, 2u);
  EXPECT_EQ(loaded.num_classes, 2u);
  EXPECT_EQ(loaded.manifest["config"]["seed"], 77);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Evaluate, ModeBaselinesMatchBruteForce) {
  const auto data = to_dataset(generate_ca_dataset(small_ws(30)));
  EvalOptions opt;
  opt.rates = {0.1, 0.5};
  opt.repeats = 3;
  opt.seed = 5;
  const auto result = evaluate(baseline_predictor("mode-state"), data.test, opt);
  const auto graphs = std::span<const graph::Graph>(data.test);
  for (std::size_t ri = 0; ri < opt.rates.size(); ++ri)
    for (std::size_t rep = 0; rep < opt.repeats; ++rep) {
      double acc = 0;
      for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        Rng rng(episode_seed(opt.seed, ri, rep, gi));
        const auto e = models::rate_episode(graphs[gi], opt.rates[ri], rng, 2);
        // Brute-force conditional majority on the context.
        std::size_t cnt[2][2] = {};
        for (std::size_t i = 0; i < e.num_context(); ++i)
          ++cnt[baselines::node_state(graphs[gi], e.context_ids[i])][e.context_labels[i]];
        const std::size_t ones = cnt[0][1] + cnt[1][1], zeros = cnt[0][0] + cnt[1][0];
        const std::uint32_t global = ones > zeros;
        std::size_t hits = 0, scored = 0;
        for (std::size_t i = e.num_context(); i < e.num_targets(); ++i) {
          const auto id = e.target_ids[i];
          const auto st = baselines::node_state(graphs[gi], id);
          const std::uint32_t guess = cnt[st][0] + cnt[st][1] == 0 ? global : cnt[st][1] > cnt[st][0];
          hits += guess == (*graphs[gi].labels())[id];
          ++scored;
        }
        acc += static_cast<double>(hits) / scored;
      }
      const auto& row = result.rows[ri * opt.repeats + rep];
      EXPECT_EQ(row.rate, opt.rates[ri]);
      EXPECT_EQ(row.repeat, rep);
      EXPECT_NEAR(row.metrics.accuracy, acc / graphs.size(), 1e-12);
    }
}

TEST(Evaluate, DeterministicBaselineHasZeroStdAtFullContext) {
  const auto data = to_dataset(generate_ca_dataset(small_ws(30)));
  EvalOptions opt;
  opt.rates = {1.0};
  opt.repeats = 4;
  for (const char* name : {"mode-global", "mode-population", "mode-state", "labelprop"}) {
    const auto r = evaluate(baseline_predictor(name), data.test, opt);
    EXPECT_EQ(r.at_rate(1.0).accuracy.std, 0.0) << name;
  }
  EXPECT_THROW(baseline_predictor("oracle"), std::invalid_argument);
}

TEST(Evaluate, ThreadCountDoesNotChangeResults) {
  const auto data = to_dataset(generate_ca_dataset(small_ws(60)));
  models::ModelConfig cfg;
  cfg.h = cfg.r = cfg.z = 8;
  models::NeuralProcess m(cfg, 3);
  EvalOptions opt;
  opt.rates = {0.3};
  opt.repeats = 2;
  opt.threads = 1;
  const auto a = evaluate(np_predictor(m), data.train, opt);
  opt.threads = 3;
  const auto b = evaluate(np_predictor(m), data.train, opt);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].metrics.accuracy, b.rows[i].metrics.accuracy);
}

TEST(Evaluate, ScoredPositions) {
  const auto g = graph::watts_strogatz(10, 2, 0.0, *std::make_unique<Rng>(1));
  auto lg = g;
  lg.set_labels(std::vector<std::uint32_t>(10, 0));
  lg.set_features(graph::one_hot_features(std::vector<std::uint32_t>(10, 0), 2));
  Rng rng(2);
  const auto part = models::rate_episode(lg, 0.3, rng, 2);
  EXPECT_EQ(scored_positions(part).size(), 7u);
  EXPECT_EQ(scored_positions(part).front(), 3u);
  const auto full = models::rate_episode(lg, 1.0, rng, 2);
  EXPECT_EQ(scored_positions(full).size(), 10u);
}

TEST(Active, EdgeCases) {
  const auto data = to_dataset(generate_ca_dataset(small_ws(30)));
  const auto& g = data.test.front();
  const auto n = g.num_nodes();
  // Uncertainty = node id: the greedy pick is always the largest unlabelled id.
  const Predictor fake = [](const models::Episode& e) {
    PredictOutput out;
    out.labels = baselines::mode_predict(e, baselines::ModeVariant::kState);
    for (auto id : e.target_ids) out.uncertainty.push_back(static_cast<double>(id));
    return out;
  };
  const std::vector<graph::NodeId> init{0, 1};
  const auto zero = active_sampling(fake, g, init, 0, PickRule::kUncertainty, 2);
  EXPECT_EQ(zero.accuracy.size(), 1u);
  const auto three = active_sampling(fake, g, init, 3, PickRule::kUncertainty, 2);
  EXPECT_EQ(three.picked, (std::vector<graph::NodeId>{static_cast<graph::NodeId>(n - 1),
                                                      static_cast<graph::NodeId>(n - 2),
                                                      static_cast<graph::NodeId>(n - 3)}));
  EXPECT_DOUBLE_EQ(three.auc(), std::accumulate(three.accuracy.begin(), three.accuracy.end(), 0.0) / 4);
  // Labelling every node leaves reconstruction only.
  const auto all = active_sampling(fake, g, init, n - 2, PickRule::kUncertainty, 2);
  EXPECT_EQ(all.accuracy.size(), n - 1);
  EXPECT_THROW(active_sampling(fake, g, init, n - 1, PickRule::kUncertainty, 2), std::invalid_argument);
  const Predictor silent = [](const models::Episode& e) {
    return PredictOutput{baselines::mode_predict(e, baselines::ModeVariant::kGlobal), {}};
  };
  EXPECT_THROW(active_sampling(silent, g, init, 1, PickRule::kUncertainty, 2), std::invalid_argument);
  Rng rng(3);
  EXPECT_EQ(active_sampling(silent, g, init, 2, PickRule::kRandom, 2, &rng).picked.size(), 2u);
}

TEST(Active, PairedComparisonSharesInitialContext) {
  const auto data = to_dataset(generate_ca_dataset(small_ws(30)));
  models::ModelConfig cfg;
  cfg.h = cfg.r = cfg.z = 8;
  models::NeuralProcess m(cfg, 1);
  ActiveOptions opt;
  opt.episodes = 4;
  opt.steps = 3;
  opt.seed = 9;
  const auto cmp = compare_active(np_predictor(m), data.test, opt);
  ASSERT_EQ(cmp.uncertainty.size(), 4u);
  ASSERT_EQ(cmp.random.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(cmp.uncertainty[k].accuracy.front(), cmp.random[k].accuracy.front());
    EXPECT_EQ(cmp.uncertainty[k].accuracy.size(), 4u);
  }
  EXPECT_DOUBLE_EQ(cmp.win_rate(), cmp.wins() / 4.0);
}

TEST(Train, ZeroLearningRateLeavesParameters) {
  const auto data = to_dataset(generate_ca_dataset(small_ws(30)));
  models::ModelConfig cfg;
  cfg.h = cfg.r = cfg.z = 8;
  models::NeuralProcess m(cfg, 1), ref(cfg, 1);
  TrainOptions opt;
  opt.epochs = 2;
  opt.learning_rate = 0.0;
  const auto logs = train_model(m, data.train, opt);
  EXPECT_EQ(logs.size(), 2u);
  for (std::size_t i = 0; i < m.parameters().size(); ++i)
    for (std::size_t k = 0; k < m.parameters()[i].value.size(); ++k)
      ASSERT_EQ(m.parameters()[i].value[k], ref.parameters()[i].value[k]);
  EXPECT_THROW(train_model(m, {}, opt), std::invalid_argument);
}

TEST(Train, SameSeedGivesIdenticalCheckpoints) {
  const auto data = to_dataset(generate_ca_dataset(small_ws(30)));
  models::ModelConfig cfg;
  cfg.h = cfg.r = cfg.z = 8;
  std::string bytes[2];
  for (auto& b : bytes) {
    models::NeuralProcess m(cfg, 4);
    TrainOptions opt;
    opt.epochs = 2;
    opt.learning_rate = 1e-3;
    opt.seed = 11;
    train_model(m, data.train, opt);
    std::ostringstream out;
    models::save_checkpoint(out, m);
    b = out.str();
  }
  EXPECT_EQ(bytes[0], bytes[1]);
}

TEST(Train, LossDecreasesOnDensityWs) {
  const auto data = to_dataset(generate_ca_dataset(small_ws(100)));
  models::ModelConfig cfg;
  cfg.h = cfg.r = 16;
  cfg.z = 16;
  models::NeuralProcess m(cfg, 2);
  TrainOptions opt;
  opt.epochs = 10;
  opt.learning_rate = 1e-3;
  opt.seed = 1;
  const auto logs = train_model(m, data.train, opt);
  // Smoothed: mean of the last three epochs below the mean of the first three.
  const double head = (logs[0].loss + logs[1].loss + logs[2].loss) / 3;
  const double tail = (logs[7].loss + logs[8].loss + logs[9].loss) / 3;
  EXPECT_LT(tail, head);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"gen", "--task", "chess", "--out", "/tmp/x", "--seed", "1"}), kExitConfig);
  EXPECT_EQ(cli({"gen", "--task", "density-ws", "--out", "/tmp/x"}), kExitConfig);  // seed is mandatory
  EXPECT_EQ(cli({"frobnicate"}), kExitConfig);
  EXPECT_EQ(cli({"eval", "--data", "/nonexistent/dir", "--checkpoint", "/nonexistent/ckpt"}), kExitFailure);
  std::string help;
  EXPECT_EQ(cli({"--help"}, &help), kExitOk);
  EXPECT_NE(help.find("verify-analytic"), std::string::npos);
}

TEST(Cli, EvalMatchesDirectInvocation) {
  const auto dir = scratch_dir("cli");
  ASSERT_EQ(cli({"gen", "--task", "density-ws", "--count", "30", "--seed", "5", "--out", (dir / "data").string()}),
            kExitOk);
  ASSERT_EQ(cli({"train", "--data", (dir / "data").string(), "--model", "mpnp", "--h", "8", "--r", "8", "--z", "8",
                 "--epochs", "2", "--lr", "1e-3", "--seed", "3", "--out", (dir / "m.ckpt").string()}),
            kExitOk);
  ASSERT_EQ(cli({"eval", "--data", (dir / "data").string(), "--checkpoint", (dir / "m.ckpt").string(), "--rates",
                 "0.1,1.0", "--repeats", "2", "--seed", "4", "--out", (dir / "r.csv").string()}),
            kExitOk);

  const auto data = load_dataset(dir / "data");
  const auto loaded = models::load_checkpoint(dir / "m.ckpt");
  EvalOptions opt;
  opt.rates = {0.1, 1.0};
  opt.repeats = 2;
  opt.seed = 4;
  const auto direct = evaluate(np_predictor(*loaded.model), data.test, opt);
  std::ostringstream csv;
  write_results_csv(csv, direct, "mpnp", "density-ws", 4);
  EXPECT_EQ(slurp(dir / "r.csv"), csv.str());
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), kResultsHeader);

  ASSERT_EQ(cli({"verify-analytic", "--max-rules", "3", "--seed", "1", "--out", (dir / "v.csv").string()}), kExitOk);
  EXPECT_NE(slurp(dir / "v.csv").find("rule,nodes,errors,unknown,passed"), std::string::npos);
  fs::remove_all(dir);
}
