#include "mpnp/ca/dataset.hpp"

#include <iostream>
#include <istream>
#include <ostream>

#include "mpnp/graph/io.hpp"

namespace mpnp::ca {
namespace {

using json = nlohmann::ordered_json;

json interval_to_json(const IntervalRule& r) {
  json out = json::object();
  out["form"] = r.form == IntervalForm::kInside ? "R0" : "R1";
  out["k1"] = r.k1;
  out["k2"] = r.k2;
  return out;
}

IntervalRule interval_from_json(const json& j) {
  const auto form = j.at("form").get<std::string>();
  if (form != "R0" && form != "R1") throw std::invalid_argument("interval rule form must be R0 or R1");
  IntervalRule r{form == "R0" ? IntervalForm::kInside : IntervalForm::kOutside, j.at("k1").get<double>(),
                 j.at("k2").get<double>()};
  if (!(0.0 <= r.k1 && r.k1 <= r.k2 && r.k2 <= 1.0)) throw std::invalid_argument("interval rule needs 0<=k1<=k2<=1");
  return r;
}

std::vector<std::string> rule_ids(const std::vector<CAExample>& examples) {
  std::vector<std::string> ids;
  ids.reserve(examples.size());
  for (const auto& e : examples) ids.push_back(e.rule_id);
  return ids;
}

double mean_nodes(const CADataset& d) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto* split : {&d.train, &d.val, &d.test})
    for (const auto& e : *split) {
      total += static_cast<double>(e.graph.num_nodes());
      ++count;
    }
  return count ? total / static_cast<double>(count) : 0.0;
}

void fill_manifest(CADataset& d, const std::string& task, std::uint64_t seed, Fractions fractions) {
  json m = json::object();
  m["task"] = task;
  m["seed"] = seed;
  m["fractions"] = json::array({fractions[0], fractions[1], fractions[2]});
  m["count"] = d.train.size() + d.val.size() + d.test.size();
  m["mean_nodes"] = mean_nodes(d);
  json splits = json::object();
  splits["train"] = {{"count", d.train.size()}, {"rule_ids", rule_ids(d.train)}};
  splits["val"] = {{"count", d.val.size()}, {"rule_ids", rule_ids(d.val)}};
  splits["test"] = {{"count", d.test.size()}, {"rule_ids", rule_ids(d.test)}};
  m["splits"] = std::move(splits);
  d.manifest = std::move(m);
}

}  // namespace

json rule_to_json(const Rule& rule, const std::string& rule_id) {
  json out = json::object();
  if (const auto* life = std::get_if<LifeRule>(&rule)) {
    out["kind"] = "life";
    out["id"] = rule_id;
    out["notation"] = life->notation();
  } else {
    const auto& d = std::get<DensityRule>(rule);
    out["kind"] = "density";
    out["id"] = rule_id;
    out["birth"] = interval_to_json(d.birth);
    out["survive"] = interval_to_json(d.survive);
  }
  return out;
}

Rule rule_from_json(const json& record) {
  const auto kind = record.at("kind").get<std::string>();
  if (kind == "life") return LifeRule::parse(record.at("notation").get<std::string>());
  if (kind == "density")
    return DensityRule{interval_from_json(record.at("birth")), interval_from_json(record.at("survive"))};
  throw std::invalid_argument("unknown rule kind '" + kind + "'");
}

json example_to_json(const CAExample& example) {
  json record = graph::to_json(example.graph);
  record["state_in"] = example.state_in;
  record["state_out"] = example.state_out;
  record["rule"] = rule_to_json(example.rule, example.rule_id);
  return record;
}

CAExample example_from_json(const json& record) {
  CAExample e;
  e.graph = graph::graph_from_json(record);
  e.state_in = record.at("state_in").get<State>();
  e.state_out = record.at("state_out").get<State>();
  e.rule = rule_from_json(record.at("rule"));
  e.rule_id = record.at("rule").value("id", "");
  if (e.state_in.size() != e.graph.num_nodes() || e.state_out.size() != e.graph.num_nodes())
    throw std::invalid_argument("example record: state length differs from node count");
  return e;
}

CADataset generate_density_dataset(Family family, std::size_t count, Fractions fractions, std::uint64_t seed,
                                   const DensityTaskConfig& config) {
  if (count == 0) throw std::invalid_argument("generate_density_dataset: count must be positive");
  std::vector<std::size_t> rule_index(count);
  std::iota(rule_index.begin(), rule_index.end(), std::size_t{0});
  const auto split = split_disjoint(rule_index, fractions, derive_seed(seed, 0x5711ULL));

  auto build = [&](const std::vector<std::size_t>& indices) {
    std::vector<CAExample> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
      Rng rng(derive_seed(seed, i + 1));
      CAExample e = gen_density_example(family, rng, config);
      e.rule_id = family_name(family) + "-" + std::to_string(i);
      out.push_back(std::move(e));
    }
    return out;
  };
  CADataset d{build(split.train), build(split.val), build(split.test), {}};
  fill_manifest(d, "density-" + family_name(family), seed, fractions);
  return d;
}

CADataset generate_life_dataset(double p, Fractions fractions, std::uint64_t seed, std::size_t max_rules) {
  Rng rule_rng(derive_seed(seed, 0x11feULL));
  std::vector<LifeRule> rules = sample_life_rules(p, rule_rng);
  if (max_rules > 0 && rules.size() > max_rules) rules.resize(max_rules);
  const auto split = split_disjoint(rules, fractions, derive_seed(seed, 0x5711ULL));

  std::size_t skipped = 0;
  auto build = [&](const std::vector<LifeRule>& subset) {
    std::vector<CAExample> out;
    out.reserve(subset.size());
    for (const auto& rule : subset) {
      Rng rng(derive_seed(seed, rule.code() + 1));
      try {
        out.push_back(gen_life_example(rule, rng));
      } catch (const CoverageError& err) {
        std::cerr << "warning: " << err.what() << ", skipping\n";
        ++skipped;
      }
    }
    return out;
  };
  CADataset d{build(split.train), build(split.val), build(split.test), {}};
  fill_manifest(d, "life", seed, fractions);
  d.manifest["bernoulli_p"] = p;
  d.manifest["skipped_rules"] = skipped;
  return d;
}

void write_split(std::ostream& out, const json& header, const std::vector<CAExample>& examples) {
  out << json{{"header", header}}.dump() << '\n';
  for (const auto& e : examples) out << example_to_json(e).dump() << '\n';
}

SplitFile read_split(std::istream& in) {
  SplitFile file;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json record = json::parse(line);
    if (first && record.contains("header")) {
      file.header = record["header"];
      first = false;
      continue;
    }
    first = false;
    file.examples.push_back(example_from_json(record));
  }
  return file;
}

}  // namespace mpnp::ca
