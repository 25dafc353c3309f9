#pragma once

#include <cstdint>
#include <span>

namespace midex {

// Purpose tag mixed into every derived substream so that the learner, the
// environment and the reduction never share random draws within a round.
enum class StreamRole : std::uint64_t {
  Select = 1,       // learner: x_t, y_t and the split coin
  Environment = 2,  // winner index draw from the choice model
  PairPick = 3,     // reduction: (i_t, j_t)
  Duel = 4,         // reduction: Bernoulli outcome
  Adversary = 5,    // seeded adversaries: matrix entries
  Baseline = 6,     // uniform / fixed-arm players
  Replication = 7,  // master seed -> replication seed
};

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream derivation rule:
//   derive_seed(seed, index, role) = mix64(mix64(mix64(seed) ^ index) ^ role)
// Every per-round substream and every replication seed is obtained this way,
// so a trace can be reproduced from the master seed alone.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                                    StreamRole role) {
  return mix64(mix64(mix64(seed) ^ index) ^ static_cast<std::uint64_t>(role));
}

// SplitMix64 generator. Small, seedable, and bit-exact on every platform;
// all conversions to doubles and integers are defined here rather than via
// <random> distributions, whose outputs are implementation-specific.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index, StreamRole role) {
    return Rng(derive_seed(seed, index, role));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), unbiased (rejection on the short tail).
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Inverse-CDF draw over `probs` in index order. Entries must be
  // non-negative; they are not renormalised.
  std::size_t categorical(std::span<const double> probs);

 private:
  std::uint64_t state_;
};

}  // namespace midex
