#include "mpnp/models/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace mpnp::models {
namespace {

using json = nlohmann::ordered_json;

constexpr char kMagic[8] = {'M', 'P', 'N', 'P', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("checkpoint: truncated file");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

std::string architecture_name(Architecture a) { return a == Architecture::kCellular ? "cellular" : "standard"; }

}  // namespace

json config_to_json(const ModelConfig& c) {
  json j = json::object();
  j["kind"] = c.kind();
  j["architecture"] = architecture_name(c.architecture);
  j["feature_dim"] = c.feature_dim;
  j["num_classes"] = c.num_classes;
  j["h"] = c.h;
  j["r"] = c.r;
  j["z"] = c.z;
  j["T"] = c.T;
  return j;
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  const auto arch = j.at("architecture").get<std::string>();
  if (arch == "cellular") c.architecture = Architecture::kCellular;
  else if (arch == "standard") c.architecture = Architecture::kStandard;
  else throw std::invalid_argument("checkpoint: unknown architecture '" + arch + "'");
  c.feature_dim = j.at("feature_dim").get<std::size_t>();
  c.num_classes = j.at("num_classes").get<std::size_t>();
  c.h = j.at("h").get<std::size_t>();
  c.r = j.at("r").get<std::size_t>();
  c.z = j.at("z").get<std::size_t>();
  c.T = j.at("T").get<std::size_t>();
  return config_for_kind(j.at("kind").get<std::string>(), c);
}

void save_checkpoint(std::ostream& out, const NeuralProcess& model, const json& extra) {
  json manifest = json::object();
  manifest["config"] = config_to_json(model.config());
  manifest["seed"] = model.seed();
  if (!extra.is_null()) manifest["extra"] = extra;
  json tensors = json::array();
  for (const auto& p : model.parameters()) tensors.push_back({{"name", p.name}, {"shape", p.value.shape()}});
  manifest["tensors"] = std::move(tensors);
  const std::string text = manifest.dump();

  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& p : model.parameters())
    for (double v : p.value.values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

void save_checkpoint(const std::filesystem::path& path, const NeuralProcess& model, const json& extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string() + " for writing");
  save_checkpoint(out, model, extra);
}

LoadedModel load_checkpoint(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  if (get_le<std::uint32_t>(in) != kVersion) throw std::runtime_error("checkpoint: unsupported version");
  const auto length = get_le<std::uint64_t>(in);
  if (length > (1ULL << 30)) throw std::runtime_error("checkpoint: manifest too large");
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) throw std::runtime_error("checkpoint: truncated");

  LoadedModel loaded;
  loaded.manifest = json::parse(text);
  const auto config = config_from_json(loaded.manifest.at("config"));
  loaded.model = std::make_unique<NeuralProcess>(config, loaded.manifest.at("seed").get<std::uint64_t>());
  auto& params = loaded.model->parameters();
  const auto& tensors = loaded.manifest.at("tensors");
  if (tensors.size() != params.size()) throw std::runtime_error("checkpoint: tensor count does not match config");
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    if (tensors[i].at("name").get<std::string>() != p.name ||
        tensors[i].at("shape").get<ad::Shape>() != p.value.shape())
      throw std::runtime_error("checkpoint: tensor '" + p.name + "' does not match config");
    for (auto& v : p.value.values()) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
  }
  return loaded;
}

LoadedModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  return load_checkpoint(in);
}

}  // namespace mpnp::models
