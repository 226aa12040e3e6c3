#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpnp/ca/dataset.hpp"
#include "mpnp/graph/graph.hpp"
#include "mpnp/harness/config.hpp"

namespace mpnp::harness {

/// Labelled graphs for one task; every graph carries features and labels.
struct Dataset {
  std::vector<graph::Graph> train;
  std::vector<graph::Graph> val;
  std::vector<graph::Graph> test;
  nlohmann::ordered_json manifest = nlohmann::ordered_json::object();
  std::size_t feature_dim = 0;
  std::size_t num_classes = 0;
};

/// Generates a CA dataset for `config.task` (life or density-*) in memory.
ca::CADataset generate_ca_dataset(const RunConfig& config);

/// Writes train.jsonl, val.jsonl, test.jsonl and manifest.json into `dir`.
/// The manifest embeds the run configuration and seed.
void write_ca_dataset(const ca::CADataset& dataset, const RunConfig& config, const std::filesystem::path& dir);

/// gen subcommand: generate + write. Returns the manifest.
nlohmann::ordered_json gen_dataset(const RunConfig& config);

/// Reads one split file. Accepts an optional {"header": ...} first line;
/// every other line is a graph record (CA records carry extra keys).
std::vector<graph::Graph> read_graphs(const std::filesystem::path& path);
std::vector<ca::CAExample> read_ca_examples(const std::filesystem::path& path);

/// Loads whatever split files exist in `dir` plus manifest.json if present.
/// Feature width and class count come from the manifest or, failing that,
/// from the data (max label + 1).
Dataset load_dataset(const std::filesystem::path& dir);

/// Converts CA examples into graph-only form.
Dataset to_dataset(const ca::CADataset& data);

}  // namespace mpnp::harness
