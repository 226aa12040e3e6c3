#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpnp/ca/examples.hpp"

namespace mpnp::ca {

nlohmann::ordered_json rule_to_json(const Rule& rule, const std::string& rule_id);
Rule rule_from_json(const nlohmann::ordered_json& record);

/// Graph record extended with "state_in", "state_out" and "rule".
nlohmann::ordered_json example_to_json(const CAExample& example);
CAExample example_from_json(const nlohmann::ordered_json& record);

struct CADataset {
  std::vector<CAExample> train;
  std::vector<CAExample> val;
  std::vector<CAExample> test;
  nlohmann::ordered_json manifest;  // family, seed, counts, rule ids per split, mean node count
};

/// `count` density-rule examples on one graph family; every example has its own
/// rule, and rules are split disjointly before examples are generated.
CADataset generate_density_dataset(Family family, std::size_t count, Fractions fractions, std::uint64_t seed,
                                   const DensityTaskConfig& config = {});

/// Bernoulli(p) sample of Life-like rules, one coverage-checked torus example per rule.
/// `max_rules` > 0 truncates the sampled rule list (for quick runs).
CADataset generate_life_dataset(double p, Fractions fractions, std::uint64_t seed, std::size_t max_rules = 0);

/// Newline-delimited records preceded by one header line {"header": {...}}.
void write_split(std::ostream& out, const nlohmann::ordered_json& header, const std::vector<CAExample>& examples);

struct SplitFile {
  nlohmann::ordered_json header;
  std::vector<CAExample> examples;
};
SplitFile read_split(std::istream& in);

}  // namespace mpnp::ca
