#include "difuser/sampling.hpp"

#include <stdexcept>

namespace difuser {

RandomVector gen_random_vector(uint32_t r, uint64_t seed) {
  if (r == 0) throw std::invalid_argument("gen_random_vector: R must be >= 1");
  RandomVector x;
  x.seed = seed;
  x.values.resize(r);
  for (uint32_t i = 0; i < r; ++i) x.values[i] = random_value_at(seed, i);
  return x;
}

}  // namespace difuser
