#include "mpnp/harness/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "mpnp/analytic/life_solution.hpp"
#include "mpnp/baselines/gnn.hpp"
#include "mpnp/baselines/mode.hpp"
#include "mpnp/harness/active.hpp"
#include "mpnp/harness/config.hpp"
#include "mpnp/harness/datasets.hpp"
#include "mpnp/harness/evaluate.hpp"
#include "mpnp/harness/train.hpp"
#include "mpnp/models/checkpoint.hpp"

namespace mpnp::harness {
namespace fs = std::filesystem;

namespace {

models::FractionRange to_range(const std::vector<double>& v, const char* what) {
  if (v.size() != 2) throw ConfigError(std::string(what) + " expects two values lo,hi");
  return {v[0], v[1]};
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

bool is_ca_task(const nlohmann::ordered_json& manifest) {
  if (!manifest.contains("task")) return false;
  const auto t = manifest["task"].get<std::string>();
  return t == "life" || t.rfind("density", 0) == 0;
}

std::string manifest_task(const Dataset& d) {
  if (d.manifest.contains("config") && d.manifest["config"].contains("task"))
    return d.manifest["config"]["task"].get<std::string>();
  return "file-dataset";
}

std::vector<graph::Graph>& pick_split(Dataset& d, const std::string& split) {
  if (split == "train") return d.train;
  if (split == "val") return d.val;
  if (split == "test") return d.test;
  throw ConfigError("unknown split '" + split + "'");
}

void truncate(std::vector<graph::Graph>& graphs, std::size_t limit) {
  if (limit > 0 && graphs.size() > limit) graphs.resize(limit);
}

/// Raw option values shared by several subcommands; folded into a RunConfig.
struct Options {
  RunConfig run;
  std::string task = "density-ws";
  std::string labelling = "fixed";
  std::string architecture = "auto";
  std::string split_name = "test";
  std::vector<double> context{0.3, 0.5};
  std::vector<double> target{0.3, 0.5};
  std::vector<double> split{0.8, 0.1, 0.1};
  std::optional<std::uint64_t> seed;
  fs::path summary, uncertainty, log;
  std::size_t episodes = 50, steps = 20;
  double initial_rate = 0.1;
  std::size_t gnn_layers = 3;

  RunConfig finish() {
    run.task = parse_task(task);
    if (labelling == "fixed") run.labelling = models::Labelling::kFixed;
    else if (labelling == "arbitrary") run.labelling = models::Labelling::kArbitrary;
    else throw ConfigError("labelling must be 'fixed' or 'arbitrary'");
    run.context = to_range(context, "--context");
    run.target = to_range(target, "--target");
    if (split.size() != 3) throw ConfigError("--split expects three fractions");
    run.split = {split[0], split[1], split[2]};
    if (seed) run.seed = *seed;
    run.validate();
    return run;
  }
};

models::ModelConfig model_config(const RunConfig& run, const Dataset& data, const std::string& architecture) {
  models::ModelConfig base;
  if (architecture == "cellular") base.architecture = models::Architecture::kCellular;
  else if (architecture == "standard") base.architecture = models::Architecture::kStandard;
  else if (architecture == "auto")
    base.architecture = is_ca_task(data.manifest) ? models::Architecture::kCellular : models::Architecture::kStandard;
  else throw ConfigError("architecture must be auto, standard or cellular");
  base.feature_dim = data.feature_dim;
  base.num_classes = data.num_classes;
  base.h = run.h;
  base.r = run.r;
  base.z = run.z;
  base.T = run.T;
  try {
    auto cfg = models::config_for_kind(run.model, base);
    cfg.validate();
    return cfg;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Dataset require_data(const RunConfig& run) {
  if (run.data_dir.empty()) throw ConfigError("--data is required");
  return load_dataset(run.data_dir);
}

EvalOptions eval_options(const RunConfig& run, std::size_t num_classes) {
  EvalOptions opt;
  opt.rates = run.rates;
  opt.repeats = run.repeats;
  opt.seed = run.seed;
  opt.threads = run.threads;
  opt.num_classes = num_classes;
  return opt;
}

/// Runs evaluation and writes the CSV, the JSON summary and (optionally) the
/// per-prediction uncertainty table.
void emit_evaluation(const Predictor& predictor, const std::vector<graph::Graph>& graphs, const RunConfig& run,
                     const Options& o, std::size_t num_classes, const std::string& task, std::ostream& out) {
  auto opt = eval_options(run, num_classes);
  std::optional<std::ofstream> unc;
  if (!o.uncertainty.empty()) {
    unc.emplace(open_out(o.uncertainty));
    *unc << "model,rate,repeat,graph,node,in_context,truth,predicted,uncertainty,seed\n" << std::setprecision(10);
    opt.on_prediction = [&](const PredictionRow& p) {
      *unc << run.model << ',' << p.rate << ',' << p.repeat << ',' << p.graph << ',' << p.node << ','
           << int(p.in_context) << ',' << p.truth << ',' << p.predicted << ',' << p.uncertainty << ',' << run.seed
           << '\n';
    };
  }
  const auto result = evaluate(predictor, graphs, opt);
  if (run.output.empty()) {
    write_results_csv(out, result, run.model, task, run.seed);
  } else {
    auto f = open_out(run.output);
    write_results_csv(f, result, run.model, task, run.seed);
  }
  auto summary = summary_json(result);
  summary["model"] = run.model;
  summary["task"] = task;
  summary["seed"] = run.seed;
  summary["graphs"] = graphs.size();
  summary["config"] = to_json(run);
  if (!o.summary.empty()) {
    auto f = open_out(o.summary);
    f << summary.dump(2) << '\n';
  }
  for (const auto& s : result.summary)
    spdlog::info("{} rate {:.2f}: accuracy {:.4f} +- {:.4f}", run.model, s.rate, s.accuracy.mean, s.accuracy.std);
}

Predictor analytic_predictor() {
  return [](const models::Episode& e) {
    const auto& g = *e.graph;
    std::vector<std::uint32_t> state_in(g.num_nodes());
    for (std::size_t i = 0; i < g.num_nodes(); ++i) state_in[i] = baselines::node_state(g, i);
    const auto latent = analytic::analytic_latent(g, state_in, e.context_ids, e.context_labels);
    const auto decoded = analytic::analytic_decode(latent, g, state_in);
    PredictOutput out;
    for (auto id : e.target_ids) out.labels.push_back(decoded[id]);
    return out;
  };
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--threads", o.run.threads, "Worker threads for evaluation (0 = all cores)");
}

void add_data(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.run.data_dir, "Dataset directory (train/val/test.jsonl)")->required();
}

void add_model(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.run.model, "np | mpnp | np-c | mpnp-c");
  cmd->add_option("--architecture", o.architecture, "auto | standard | cellular");
  cmd->add_option("--h", o.run.h);
  cmd->add_option("--r", o.run.r);
  cmd->add_option("--z", o.run.z);
  cmd->add_option("--T", o.run.T, "Message-passing rounds");
}

void add_eval(CLI::App* cmd, Options& o) {
  cmd->add_option("--split", o.split_name, "train | val | test");
  cmd->add_option("--rates", o.run.rates, "Context sampling rates")->delimiter(',');
  cmd->add_option("--repeats", o.run.repeats, "Context draws per rate");
  cmd->add_option("--eval-limit", o.run.eval_limit, "Evaluate only the first N graphs");
  cmd->add_option("--out", o.run.output, "Results CSV (stdout if omitted)");
  cmd->add_option("--summary", o.summary, "JSON summary path");
  cmd->add_option("--uncertainty", o.uncertainty, "Per-prediction CSV path");
}

int cmd_gen(Options& o) {
  auto run = o.finish();
  gen_dataset(run);
  return kExitOk;
}

int cmd_train(Options& o) {
  auto run = o.finish();
  if (run.checkpoint.empty()) throw ConfigError("--out is required");
  auto data = require_data(run);
  truncate(data.train, run.train_limit);
  if (data.train.empty()) throw std::invalid_argument("train: the training split is empty");
  const auto cfg = model_config(run, data, o.architecture);
  models::NeuralProcess model(cfg, derive_seed(run.seed, 0x3a11));

  std::optional<std::ofstream> log;
  if (!o.log.empty()) {
    log.emplace(open_out(o.log));
    *log << "epoch,loss,recon,kl,seconds,seed\n" << std::setprecision(10);
  }
  TrainOptions opt{run.epochs, run.lr, run.context, run.target, run.labelling, derive_seed(run.seed, 0x7a19)};
  train_model(model, data.train, opt, [&](const EpochLog& e) {
    spdlog::info("epoch {} loss {:.4f} recon {:.4f} kl {:.4f} ({:.1f}s)", e.epoch, e.loss, e.recon, e.kl, e.seconds);
    if (log) *log << e.epoch << ',' << e.loss << ',' << e.recon << ',' << e.kl << ',' << e.seconds << ',' << run.seed
                  << '\n' << std::flush;
  });
  nlohmann::ordered_json extra = {{"run", to_json(run)}, {"train_graphs", data.train.size()}};
  models::save_checkpoint(run.checkpoint, model, extra);
  spdlog::info("saved {}", run.checkpoint.string());
  return kExitOk;
}

int cmd_eval(Options& o, std::ostream& out) {
  auto run = o.finish();
  if (run.checkpoint.empty()) throw ConfigError("--checkpoint is required");
  auto data = require_data(run);
  auto loaded = models::load_checkpoint(run.checkpoint);
  run.model = loaded.model->config().kind();
  auto& graphs = pick_split(data, o.split_name);
  truncate(graphs, run.eval_limit);
  emit_evaluation(np_predictor(*loaded.model), graphs, run, o, loaded.model->config().num_classes, manifest_task(data),
                  out);
  return kExitOk;
}

int cmd_baseline(Options& o, std::ostream& out) {
  auto run = o.finish();
  auto data = require_data(run);
  auto& graphs = pick_split(data, o.split_name);
  truncate(graphs, run.eval_limit);
  const std::string task = manifest_task(data);
  if (run.model == "gnn") {
    baselines::GnnConfig gc{data.feature_dim, data.num_classes, run.h, o.gnn_layers};
    baselines::Gnn gnn(gc, derive_seed(run.seed, 0x6e11));
    truncate(data.train, run.train_limit);
    std::vector<const graph::Graph*> ptrs;
    for (const auto& g : data.train) ptrs.push_back(&g);
    baselines::train_gnn(gnn, ptrs, {run.epochs, run.lr}, derive_seed(run.seed, 0x7a19),
                         [](std::size_t e, double loss) { spdlog::info("gnn epoch {} loss {:.4f}", e, loss); });
    Predictor p = [&gnn](const models::Episode& e) {
      const auto all = gnn.predict(*e.graph);
      PredictOutput po;
      for (auto id : e.target_ids) po.labels.push_back(all[id]);
      return po;
    };
    emit_evaluation(p, graphs, run, o, data.num_classes, task, out);
  } else if (run.model == "analytic") {
    emit_evaluation(analytic_predictor(), graphs, run, o, data.num_classes, task, out);
  } else {
    Predictor p;
    try {
      p = baseline_predictor(run.model);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    emit_evaluation(p, graphs, run, o, data.num_classes, task, out);
  }
  return kExitOk;
}

int cmd_active(Options& o, std::ostream& out) {
  auto run = o.finish();
  if (run.checkpoint.empty()) throw ConfigError("--checkpoint is required");
  auto data = require_data(run);
  auto loaded = models::load_checkpoint(run.checkpoint);
  auto& graphs = pick_split(data, o.split_name);
  ActiveOptions opt{o.episodes, o.steps, o.initial_rate, run.seed, loaded.model->config().num_classes};
  const auto cmp = compare_active(np_predictor(*loaded.model), graphs, opt);

  std::optional<std::ofstream> file;
  if (!run.output.empty()) file.emplace(open_out(run.output));
  std::ostream& csv = file ? *file : out;
  csv << "episode,rule,step,accuracy,seed\n" << std::setprecision(10);
  for (std::size_t k = 0; k < cmp.uncertainty.size(); ++k) {
    for (std::size_t s = 0; s < cmp.uncertainty[k].accuracy.size(); ++s)
      csv << k << ",uncertainty," << s << ',' << cmp.uncertainty[k].accuracy[s] << ',' << run.seed << '\n';
    for (std::size_t s = 0; s < cmp.random[k].accuracy.size(); ++s)
      csv << k << ",random," << s << ',' << cmp.random[k].accuracy[s] << ',' << run.seed << '\n';
  }
  spdlog::info("uncertainty beats random on {}/{} episodes", cmp.wins(), cmp.uncertainty.size());
  return kExitOk;
}

int cmd_verify(Options& o, std::ostream& out) {
  auto run = o.finish();
  std::vector<ca::CAExample> examples;
  if (!run.data_dir.empty()) {
    for (const char* s : {"train", "val", "test"}) {
      const auto path = run.data_dir / (std::string(s) + ".jsonl");
      if (!fs::exists(path)) continue;
      auto part = read_ca_examples(path);
      examples.insert(examples.end(), part.begin(), part.end());
    }
  } else {
    run.task = TaskKind::kLife;
    auto data = generate_ca_dataset(run);
    for (auto* split : {&data.train, &data.val, &data.test}) examples.insert(examples.end(), split->begin(), split->end());
  }
  if (examples.empty()) throw std::invalid_argument("verify-analytic: no examples");
  std::optional<std::ofstream> file;
  if (!run.output.empty()) file.emplace(open_out(run.output));
  std::ostream& csv = file ? *file : out;
  std::size_t failed = 0;
  csv << "rule,nodes,errors,unknown,passed\n";
  for (const auto& ex : examples) {
    if (ex.rule.index() != 0) throw ConfigError("verify-analytic needs Life-like examples");
    const auto report = analytic::verify_example(ex);
    csv << report.rule << ',' << report.nodes << ',' << report.errors << ',' << report.unknown << ','
        << (report.passed() ? 1 : 0) << '\n';
    failed += !report.passed();
  }
  spdlog::info("analytic construction: {}/{} rules exact", examples.size() - failed, examples.size());
  return failed == 0 ? kExitOk : kExitThreshold;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Message passing neural processes on graphs"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate a CA dataset");
  gen->add_option("--task", o.task, "life | density-ws | density-ba | density-voronoi | density-sphvoronoi");
  gen->add_option("--out", o.run.data_dir, "Output directory")->required();
  gen->add_option("--count", o.run.count, "Graphs for density tasks");
  gen->add_option("--life-p", o.run.life_p, "Bernoulli rate for sampling Life-like rules");
  gen->add_option("--max-rules", o.run.max_rules, "Keep only the first N Life-like rules");
  gen->add_option("--split", o.split, "train,val,test fractions")->delimiter(',');
  gen->add_option("--seed", o.seed, "Master seed")->required();

  auto* train = app.add_subcommand("train", "Train an NP / MPNP");
  add_data(train, o);
  add_model(train, o);
  train->add_option("--epochs", o.run.epochs);
  train->add_option("--lr", o.run.lr);
  train->add_option("--context", o.context, "Context fraction range lo,hi")->delimiter(',');
  train->add_option("--target", o.target, "Extra target fraction range lo,hi")->delimiter(',');
  train->add_option("--labelling", o.labelling, "fixed | arbitrary");
  train->add_option("--train-limit", o.run.train_limit, "Use only the first N training graphs");
  train->add_option("--out", o.run.checkpoint, "Checkpoint path")->required();
  train->add_option("--log", o.log, "Per-epoch CSV log");
  train->add_option("--seed", o.seed, "Master seed")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  add_data(eval, o);
  add_common(eval, o);
  add_eval(eval, o);
  eval->add_option("--checkpoint", o.run.checkpoint)->required();

  auto* base = app.add_subcommand("baseline", "Evaluate a baseline");
  add_data(base, o);
  add_common(base, o);
  add_eval(base, o);
  base->add_option("--model", o.run.model, "mode-global | mode-population | mode-state | labelprop | gnn | analytic")
      ->required();
  base->add_option("--epochs", o.run.epochs, "GNN training epochs");
  base->add_option("--lr", o.run.lr, "GNN learning rate");
  base->add_option("--h", o.run.h, "GNN width");
  base->add_option("--layers", o.gnn_layers, "GNN layers");
  base->add_option("--train-limit", o.run.train_limit);

  auto* active = app.add_subcommand("active", "Uncertainty-driven versus random label acquisition");
  add_data(active, o);
  add_common(active, o);
  active->add_option("--checkpoint", o.run.checkpoint)->required();
  active->add_option("--split", o.split_name);
  active->add_option("--episodes", o.episodes);
  active->add_option("--steps", o.steps);
  active->add_option("--initial-rate", o.initial_rate);
  active->add_option("--out", o.run.output, "Curve CSV (stdout if omitted)");

  auto* verify = app.add_subcommand("verify-analytic", "Check the fixed-weight Life-like solution");
  verify->add_option("--data", o.run.data_dir, "Life dataset directory (generated when omitted)");
  verify->add_option("--life-p", o.run.life_p);
  verify->add_option("--max-rules", o.run.max_rules);
  verify->add_option("--out", o.run.output, "Per-rule CSV (stdout when omitted)");
  add_common(verify, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kExitConfig;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*train) return cmd_train(o);
    if (*eval) return cmd_eval(o, out);
    if (*base) return cmd_baseline(o, out);
    if (*active) return cmd_active(o, out);
    if (*verify) return cmd_verify(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ad::NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace mpnp::harness
