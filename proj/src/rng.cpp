#include "bcop/rng.hpp"

namespace bcop {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng RngState::engine() const {
  return Rng(splitmix64(splitmix64(seed) + stream));
}

double uniform_open(Rng& rng) {
  // 53 random bits, offset by half an ulp so 0 is unreachable.
  for (;;) {
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    if (u > 0.0 && u < 1.0) return u;
  }
}

}  // namespace bcop
