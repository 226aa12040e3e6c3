#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpnp/ca/examples.hpp"
#include "mpnp/models/episode.hpp"

namespace mpnp::harness {

/// Raised for invalid run configurations (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TaskKind { kLife, kDensityWS, kDensityBA, kDensityVoronoi, kDensitySphVoronoi, kFileDataset };

TaskKind parse_task(const std::string& name);
std::string task_name(TaskKind task);
bool is_density(TaskKind task);
ca::Family density_family(TaskKind task);

/// Everything that determines a run; serialised into every output.
struct RunConfig {
  TaskKind task = TaskKind::kDensityWS;
  std::string model = "mpnp";  // np | mpnp | np-c | mpnp-c | gnn | labelprop | mode-global | mode-population | mode-state | analytic

  std::size_t h = 64;
  std::size_t r = 64;
  std::size_t z = 128;
  std::size_t T = 1;
  double lr = 1e-4;
  std::size_t epochs = 200;

  models::FractionRange context{0.3, 0.5};
  models::FractionRange target{0.3, 0.5};
  models::Labelling labelling = models::Labelling::kFixed;
  ca::Fractions split{0.8, 0.1, 0.1};

  std::uint64_t seed = 0;
  std::size_t count = 2700;        // density datasets
  double life_p = 0.01;            // Life-like rule sampling
  std::size_t max_rules = 0;       // Life-like truncation, 0 = all
  std::size_t train_limit = 0;     // use only the first N training graphs, 0 = all
  std::size_t eval_limit = 0;      // evaluate only the first N graphs, 0 = all
  std::vector<double> rates{0.1, 0.3, 0.5, 1.0};
  std::size_t repeats = 5;
  std::size_t threads = 0;         // 0 = hardware concurrency

  std::filesystem::path data_dir;
  std::filesystem::path checkpoint;
  std::filesystem::path output;

  void validate() const;
};

nlohmann::ordered_json to_json(const RunConfig& config);

}  // namespace mpnp::harness
