#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lrfree/errors.hpp"

namespace lrfree {

// Every random draw in a run comes from a stream owned by that run. Streams
// are derived from one master seed with a splittable counter scheme, so the
// env stream, each base agent's stream and the meta-learner's stream are
// independent: adding a draw to one never shifts another.

enum class StreamKind : std::uint64_t {
  kEnv = 1,
  kBaseAgent = 2,
  kMetaLearner = 3,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, StreamKind kind,
                                 std::uint64_t index = 0) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(kind) << 56) ^ (index + 1);
  return splitmix64(splitmix64(master) ^ splitmix64(key));
}

inline std::mt19937_64 make_stream(std::uint64_t master, StreamKind kind,
                                   std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(master, kind, index));
}

// Uniform double in [0, 1) with 53 random bits. Hand-rolled so traces do not
// depend on the standard library's distribution internals.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) throw ContractError("uniform_index: n must be positive");
  return static_cast<std::size_t>(rng() % n);
}

// Draws an index from an unnormalized nonnegative weight vector.
inline std::size_t sample_discrete(std::mt19937_64& rng,
                                   std::span<const double> weights) {
  if (weights.empty()) throw ContractError("sample_discrete: empty weights");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw ContractError("sample_discrete: zero total weight");
  const double u = uniform_unit(rng) * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) return i;
  }
  return weights.size() - 1;
}

}  // namespace lrfree
