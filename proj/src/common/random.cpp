#include "mpnp/common/random.hpp"

#include <numeric>
#include <stdexcept>

namespace mpnp {

std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t count) {
  if (count > n) throw std::invalid_argument("sample_without_replacement: count exceeds population");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` slots hold the sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = uniform_index(rng, i, n - 1);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace mpnp
