#pragma once

#include <cstdint>
#include <random>

namespace bcop {

using Rng = std::mt19937_64;

/// A reproducible random stream: the same (seed, stream) pair always yields
/// the same engine state. Streams are derived by hashing, so draw i of a batch
/// can be generated independently of every other draw.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  Rng engine() const;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Uniform on the open interval (0,1).
double uniform_open(Rng& rng);

}  // namespace bcop
