#include "mpnp/harness/datasets.hpp"

#include <algorithm>
#include <fstream>
#include <spdlog/spdlog.h>

#include "mpnp/graph/io.hpp"

namespace mpnp::harness {
namespace fs = std::filesystem;

namespace {

constexpr const char* kSplitNames[] = {"train", "val", "test"};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

template <class F>
void for_each_record(const fs::path& path, F&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json record;
    try {
      record = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (record.contains("header")) continue;
    fn(record);
  }
}

void fill_shape(Dataset& d) {
  auto scan = [&](const std::vector<graph::Graph>& graphs) {
    for (const auto& g : graphs) {
      if (g.features().rank() == 2) d.feature_dim = std::max(d.feature_dim, g.features().cols());
      if (g.labels())
        for (auto y : *g.labels()) d.num_classes = std::max<std::size_t>(d.num_classes, y + 1);
    }
  };
  if (d.manifest.contains("feature_dim")) d.feature_dim = d.manifest["feature_dim"].get<std::size_t>();
  if (d.manifest.contains("num_classes")) d.num_classes = d.manifest["num_classes"].get<std::size_t>();
  if (d.feature_dim == 0 || d.num_classes == 0) {
    scan(d.train);
    scan(d.val);
    scan(d.test);
  }
}

}  // namespace

ca::CADataset generate_ca_dataset(const RunConfig& config) {
  config.validate();
  if (config.task == TaskKind::kLife)
    return ca::generate_life_dataset(config.life_p, config.split, config.seed, config.max_rules);
  if (is_density(config.task))
    return ca::generate_density_dataset(density_family(config.task), config.count, config.split, config.seed);
  throw ConfigError("cannot generate a dataset for task '" + task_name(config.task) + "'");
}

void write_ca_dataset(const ca::CADataset& data, const RunConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  nlohmann::ordered_json manifest = data.manifest;
  manifest["feature_dim"] = 2;
  manifest["num_classes"] = 2;
  auto run = to_json(config);
  // Paths would make regenerated files differ by location.
  for (const char* key : {"data_dir", "checkpoint", "output"}) run.erase(key);
  manifest["config"] = std::move(run);
  const std::vector<ca::CAExample>* splits[] = {&data.train, &data.val, &data.test};
  for (int s = 0; s < 3; ++s) {
    nlohmann::ordered_json header = {{"split", kSplitNames[s]}, {"task", task_name(config.task)}, {"seed", config.seed}};
    auto out = open_out(dir / (std::string(kSplitNames[s]) + ".jsonl"));
    ca::write_split(out, header, *splits[s]);
  }
  auto out = open_out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
}

nlohmann::ordered_json gen_dataset(const RunConfig& config) {
  if (config.data_dir.empty()) throw ConfigError("gen: an output directory is required");
  auto data = generate_ca_dataset(config);
  write_ca_dataset(data, config, config.data_dir);
  spdlog::info("wrote {} / {} / {} examples to {}", data.train.size(), data.val.size(), data.test.size(),
               config.data_dir.string());
  std::ifstream in(config.data_dir / "manifest.json");
  return nlohmann::ordered_json::parse(in);
}

std::vector<graph::Graph> read_graphs(const fs::path& path) {
  std::vector<graph::Graph> out;
  for_each_record(path, [&](const nlohmann::ordered_json& r) { out.push_back(graph::graph_from_json(r)); });
  return out;
}

std::vector<ca::CAExample> read_ca_examples(const fs::path& path) {
  std::vector<ca::CAExample> out;
  for_each_record(path, [&](const nlohmann::ordered_json& r) { out.push_back(ca::example_from_json(r)); });
  return out;
}

Dataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::invalid_argument("dataset directory not found: " + dir.string());
  Dataset d;
  if (fs::exists(dir / "manifest.json")) {
    std::ifstream in(dir / "manifest.json");
    d.manifest = nlohmann::ordered_json::parse(in);
  }
  std::vector<graph::Graph>* splits[] = {&d.train, &d.val, &d.test};
  bool any = false;
  for (int s = 0; s < 3; ++s) {
    const auto path = dir / (std::string(kSplitNames[s]) + ".jsonl");
    if (!fs::exists(path)) continue;
    *splits[s] = read_graphs(path);
    any = true;
  }
  if (!any) throw std::invalid_argument("no split files (train/val/test.jsonl) in " + dir.string());
  fill_shape(d);
  return d;
}

Dataset to_dataset(const ca::CADataset& data) {
  Dataset d;
  auto take = [](const std::vector<ca::CAExample>& in, std::vector<graph::Graph>& out) {
    out.reserve(in.size());
    for (const auto& e : in) out.push_back(e.graph);
  };
  take(data.train, d.train);
  take(data.val, d.val);
  take(data.test, d.test);
  d.manifest = data.manifest;
  d.feature_dim = 2;
  d.num_classes = 2;
  return d;
}

}  // namespace mpnp::harness
