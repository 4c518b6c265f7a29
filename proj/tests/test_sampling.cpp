#include <cstdint>
#include <stdexcept>

#include "difuser/graph.hpp"
#include "difuser/sampling.hpp"
#include "doctest.h"

using namespace difuser;

TEST_SUITE("sampling") {

TEST_CASE("gen_random_vector basics") {
  CHECK_THROWS_AS(gen_random_vector(0, 1), std::invalid_argument);

  RandomVector x = gen_random_vector(1024, 7);
  CHECK(x.size() == 1024);
  CHECK(x.seed == 7);
  CHECK_FALSE(x.sorted);
  for (uint32_t r = 0; r < x.size(); ++r) {
    CHECK(x.values[r] < kFixedOne);
    CHECK(x.values[r] == random_value_at(7, r));
  }

  RandomVector y = gen_random_vector(1024, 7);
  CHECK(x.values == y.values);
  RandomVector z = gen_random_vector(1024, 8);
  CHECK(x.values != z.values);
}

TEST_CASE("xor fold is a bijection: exact sampling probability") {
  // Restricted to a 2^16 sub-domain the fold is still a permutation, so
  // the number of values passing (x ^ h) < W is exactly W.
  const uint32_t domain = 1u << 16;
  for (uint32_t h : {0u, 1u, 0x5a5au, 0xffffu}) {
    for (uint32_t w : {0u, 1u, 100u, 32768u, 65536u}) {
      uint32_t hits = 0;
      for (uint32_t x = 0; x < domain; ++x) hits += is_sampled(x, h, w);
      CHECK(hits == w);
    }
  }
}

TEST_CASE("sample_probability is the folded value") {
  CHECK(sample_probability(0, 0) == 0);
  CHECK(sample_probability(0b1010, 0b0110) == 0b1100);
  CHECK(sample_probability(123456, 123456) == 0);
}

TEST_CASE("degenerate weights") {
  RandomVector x = gen_random_vector(256, 3);
  for (uint32_t r = 0; r < x.size(); ++r) {
    CHECK_FALSE(is_sampled(x.values[r], 0x12345u, to_fixed_point(0.0)));
    CHECK(is_sampled(x.values[r], 0x12345u, to_fixed_point(1.0)));
  }
}

TEST_CASE("empirical rate matches the weight") {
  // Deterministic by frozen seed; 20000 simulations, w = 0.3.
  const uint32_t n = 20000;
  const uint32_t w = to_fixed_point(0.3);
  const uint32_t h = edge_hash(11, 22);
  uint32_t hits = 0;
  for (uint32_t r = 0; r < n; ++r)
    hits += is_sampled(random_value_at(17, r), h, w);
  double rate = double(hits) / n;
  CHECK(rate > 0.285);
  CHECK(rate < 0.315);
}

TEST_CASE("pair-level overload agrees with the parts") {
  RandomVector x = gen_random_vector(64, 5);
  const uint32_t w = to_fixed_point(0.42);
  for (uint32_t r = 0; r < 64; ++r)
    CHECK(is_sampled(x, r, 3, 5, w) ==
          is_sampled(x.values[r], edge_hash(3, 5), w));
}

}  // TEST_SUITE
