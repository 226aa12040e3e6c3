#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>

#include "json.hpp"
#include "mpnp/models/neural_process.hpp"

namespace mpnp::models {

nlohmann::ordered_json config_to_json(const ModelConfig& config);
ModelConfig config_from_json(const nlohmann::ordered_json& j);

/// Layout: "MPNPCKPT" magic, u32 format version, u64 manifest length, the JSON
/// manifest (config, seed, extra fields, tensor names and shapes), then every
/// tensor as little-endian doubles in manifest order.
void save_checkpoint(std::ostream& out, const NeuralProcess& model, const nlohmann::ordered_json& extra = {});
void save_checkpoint(const std::filesystem::path& path, const NeuralProcess& model,
                     const nlohmann::ordered_json& extra = {});

struct LoadedModel {
  std::unique_ptr<NeuralProcess> model;
  nlohmann::ordered_json manifest;
};
LoadedModel load_checkpoint(std::istream& in);
LoadedModel load_checkpoint(const std::filesystem::path& path);

}  // namespace mpnp::models
