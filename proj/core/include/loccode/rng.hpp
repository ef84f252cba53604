#pragma once

#include <cstdint>
#include <random>

namespace loccode {

std::uint64_t splitmix64(std::uint64_t x);

// Seed for a parallel task: a pure function of (master, stream), so sweep
// results do not depend on which thread runs which task.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// mt19937_64 plus rejection sampling for bounded draws. The standard pins
// down mt19937_64 output exactly; std::uniform_int_distribution does not,
// so it is avoided everywhere determinism is promised.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound), bound >= 1.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace loccode
