#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mpnp/common/random.hpp"

namespace mpnp::ca {

inline constexpr std::size_t kMaxLifeNeighbours = 8;
inline constexpr std::uint32_t kLifeRuleCount = 1u << 18;

/// Birth/survive neighbour-count sets as 9-bit masks (bit k = count k).
struct LifeRule {
  std::uint16_t birth = 0;
  std::uint16_t survive = 0;

  bool born(std::size_t count) const { return (birth >> count) & 1u; }
  bool survives(std::size_t count) const { return (survive >> count) & 1u; }

  /// Canonical 18-bit code: birth in the low 9 bits, survive in the high 9.
  std::uint32_t code() const { return static_cast<std::uint32_t>(birth) | (static_cast<std::uint32_t>(survive) << 9); }
  static LifeRule from_code(std::uint32_t code);
  /// e.g. "B3/S23".
  std::string notation() const;
  static LifeRule parse(const std::string& notation);

  friend auto operator<=>(const LifeRule&, const LifeRule&) = default;
};

enum class IntervalForm { kInside, kOutside };  // R0 (top hat) and R1 = 1 - R0

/// 1 for k1 <= d <= k2, else 0.
int top_hat(double density, double k1, double k2);

struct IntervalRule {
  IntervalForm form = IntervalForm::kInside;
  double k1 = 0.0;
  double k2 = 1.0;

  int operator()(double density) const;
};

struct DensityRule {
  IntervalRule birth;
  IntervalRule survive;
};

using Rule = std::variant<LifeRule, DensityRule>;

/// Each of the 2^18 rules kept independently with probability p, in code order.
std::vector<LifeRule> sample_life_rules(double p, Rng& rng);

/// k1 < k2 as order statistics of two uniforms; form uniform over {R0, R1}.
DensityRule sample_density_rule(Rng& rng);

}  // namespace mpnp::ca
