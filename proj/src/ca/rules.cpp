#include "mpnp/ca/rules.hpp"

#include <stdexcept>

namespace mpnp::ca {

LifeRule LifeRule::from_code(std::uint32_t code) {
  if (code >= kLifeRuleCount) throw std::out_of_range("life rule code out of range");
  return {static_cast<std::uint16_t>(code & 0x1ffu), static_cast<std::uint16_t>(code >> 9)};
}

std::string LifeRule::notation() const {
  std::string out = "B";
  for (std::size_t k = 0; k <= kMaxLifeNeighbours; ++k)
    if (born(k)) out += static_cast<char>('0' + k);
  out += "/S";
  for (std::size_t k = 0; k <= kMaxLifeNeighbours; ++k)
    if (survives(k)) out += static_cast<char>('0' + k);
  return out;
}

LifeRule LifeRule::parse(const std::string& notation) {
  const auto slash = notation.find('/');
  if (notation.empty() || notation[0] != 'B' || slash == std::string::npos || slash + 1 >= notation.size() ||
      notation[slash + 1] != 'S')
    throw std::invalid_argument("life rule must look like B3/S23, got '" + notation + "'");
  auto mask = [&](std::size_t from, std::size_t to) {
    std::uint16_t m = 0;
    for (std::size_t i = from; i < to; ++i) {
      const char c = notation[i];
      if (c < '0' || c > '8') throw std::invalid_argument("bad neighbour count in rule '" + notation + "'");
      m |= static_cast<std::uint16_t>(1u << (c - '0'));
    }
    return m;
  };
  return {mask(1, slash), mask(slash + 2, notation.size())};
}

int top_hat(double density, double k1, double k2) { return (k1 <= density && density <= k2) ? 1 : 0; }

int IntervalRule::operator()(double density) const {
  const int inside = top_hat(density, k1, k2);
  return form == IntervalForm::kInside ? inside : 1 - inside;
}

std::vector<LifeRule> sample_life_rules(double p, Rng& rng) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("sample_life_rules: p must lie in (0, 1)");
  std::bernoulli_distribution keep(p);
  std::vector<LifeRule> rules;
  for (std::uint32_t code = 0; code < kLifeRuleCount; ++code)
    if (keep(rng)) rules.push_back(LifeRule::from_code(code));
  return rules;
}

namespace {
IntervalRule sample_interval(Rng& rng) {
  double a = uniform01(rng), b = uniform01(rng);
  if (a > b) std::swap(a, b);
  const auto form = std::bernoulli_distribution(0.5)(rng) ? IntervalForm::kOutside : IntervalForm::kInside;
  return {form, a, b};
}
}  // namespace

DensityRule sample_density_rule(Rng& rng) {
  IntervalRule birth = sample_interval(rng);
  IntervalRule survive = sample_interval(rng);
  return {birth, survive};
}

}  // namespace mpnp::ca
