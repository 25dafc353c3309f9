#include "midex/rng.hpp"

namespace midex {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

std::size_t Rng::categorical(std::span<const double> probs) {
  const double u = uniform();
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cum += probs[i];
    last_positive = i;
    if (u < cum) return i;
  }
  // Only reachable when rounding leaves the total a hair below u.
  return last_positive;
}

}  // namespace midex
