#include "mpnp/harness/config.hpp"

#include <cmath>
#include <set>

namespace mpnp::harness {

TaskKind parse_task(const std::string& name) {
  if (name == "life") return TaskKind::kLife;
  if (name == "density-ws") return TaskKind::kDensityWS;
  if (name == "density-ba") return TaskKind::kDensityBA;
  if (name == "density-voronoi") return TaskKind::kDensityVoronoi;
  if (name == "density-sphvoronoi") return TaskKind::kDensitySphVoronoi;
  if (name == "file-dataset") return TaskKind::kFileDataset;
  throw ConfigError("unknown task '" + name + "'");
}

std::string task_name(TaskKind task) {
  switch (task) {
    case TaskKind::kLife: return "life";
    case TaskKind::kDensityWS: return "density-ws";
    case TaskKind::kDensityBA: return "density-ba";
    case TaskKind::kDensityVoronoi: return "density-voronoi";
    case TaskKind::kDensitySphVoronoi: return "density-sphvoronoi";
    case TaskKind::kFileDataset: return "file-dataset";
  }
  return "";
}

bool is_density(TaskKind task) {
  return task == TaskKind::kDensityWS || task == TaskKind::kDensityBA || task == TaskKind::kDensityVoronoi ||
         task == TaskKind::kDensitySphVoronoi;
}

ca::Family density_family(TaskKind task) {
  switch (task) {
    case TaskKind::kDensityWS: return ca::Family::kWattsStrogatz;
    case TaskKind::kDensityBA: return ca::Family::kBarabasiAlbert;
    case TaskKind::kDensityVoronoi: return ca::Family::kVoronoi;
    case TaskKind::kDensitySphVoronoi: return ca::Family::kSphericalVoronoi;
    default: throw ConfigError("task '" + task_name(task) + "' is not a density task");
  }
}

void RunConfig::validate() const {
  auto range_ok = [](models::FractionRange r) { return r.lo > 0.0 && r.lo <= r.hi && r.hi <= 1.0; };
  if (!range_ok(context)) throw ConfigError("context range must satisfy 0 < lo <= hi <= 1");
  if (!range_ok(target)) throw ConfigError("target range must satisfy 0 < lo <= hi <= 1");
  for (double rate : rates)
    if (!(rate > 0.0 && rate <= 1.0)) throw ConfigError("sampling rates must lie in (0, 1]");
  const double total = split[0] + split[1] + split[2];
  if (std::abs(total - 1.0) > 1e-9 || split[0] < 0 || split[1] < 0 || split[2] < 0)
    throw ConfigError("split fractions must be non-negative and sum to 1");
  static const std::set<std::string> kModels{"np",  "mpnp",      "np-c",        "mpnp-c",          "gnn",
                                            "labelprop", "mode-global", "mode-population", "mode-state", "analytic"};
  if (!kModels.contains(model)) throw ConfigError("unknown model '" + model + "'");
  if (h == 0 || r == 0 || z == 0) throw ConfigError("h, r and z must be positive");
  if (T < 1 || T > 2) throw ConfigError("T must be 1 or 2");
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be a finite non-negative number");
  if (repeats == 0) throw ConfigError("repeats must be positive");
  if (!(life_p > 0.0 && life_p < 1.0)) throw ConfigError("life_p must lie in (0, 1)");
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["task"] = task_name(c.task);
  j["model"] = c.model;
  j["h"] = c.h;
  j["r"] = c.r;
  j["z"] = c.z;
  j["T"] = c.T;
  j["lr"] = c.lr;
  j["epochs"] = c.epochs;
  j["context"] = {c.context.lo, c.context.hi};
  j["target"] = {c.target.lo, c.target.hi};
  j["labelling"] = c.labelling == models::Labelling::kArbitrary ? "arbitrary" : "fixed";
  j["split"] = {c.split[0], c.split[1], c.split[2]};
  j["seed"] = c.seed;
  j["count"] = c.count;
  j["life_p"] = c.life_p;
  j["max_rules"] = c.max_rules;
  j["train_limit"] = c.train_limit;
  j["eval_limit"] = c.eval_limit;
  j["rates"] = c.rates;
  j["repeats"] = c.repeats;
  j["data_dir"] = c.data_dir.string();
  j["checkpoint"] = c.checkpoint.string();
  j["output"] = c.output.string();
  return j;
}

}  // namespace mpnp::harness
