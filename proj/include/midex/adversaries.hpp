#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "midex/prefcore.hpp"

namespace midex {

// Oblivious preference-sequence generators. Each spec is a pure function of
// (spec, t): nothing here can observe a learner.

struct ConstantSpec {
  PreferenceMatrix matrix;
  // Set when the matrix came from borda_gap_matrix(K, gap); lets a K sweep
  // rebuild the instance at other sizes.
  std::optional<double> gap;

  friend bool operator==(const ConstantSpec&, const ConstantSpec&) = default;
};

// P_t = matrices[k] where k = number of switch times s with s < t.
struct AbruptSwitchSpec {
  std::vector<long long> switch_times;  // strictly increasing, >= 1
  std::vector<PreferenceMatrix> matrices;  // switch_times.size() + 1 of them

  friend bool operator==(const AbruptSwitchSpec&, const AbruptSwitchSpec&) = default;
};

// Upper triangle drifts together: P_t(i,j) = base(i,j) + amplitude sin(2 pi t / period).
struct SinusoidalDriftSpec {
  PreferenceMatrix base;
  double amplitude;
  double period;

  friend bool operator==(const SinusoidalDriftSpec&, const SinusoidalDriftSpec&) = default;
};

// Upper-triangle entries i.i.d. uniform on [epsilon, 1 - epsilon], redrawn
// every `hold` rounds from substream (seed, block, Adversary).
struct SeededRandomSpec {
  int K;
  std::uint64_t seed;
  double epsilon = 0.05;
  long long hold = 1;

  friend bool operator==(const SeededRandomSpec&, const SeededRandomSpec&) = default;
};

// P(i, i+1 mod K) = 1/2 + margin, every other pair 1/2. No arm beats all
// others, and every Borda score equals 1/2.
struct CyclicNoCondorcetSpec {
  int K;
  double margin;

  friend bool operator==(const CyclicNoCondorcetSpec&, const CyclicNoCondorcetSpec&) = default;
};

using AdversarySpec = std::variant<ConstantSpec, AbruptSwitchSpec, SinusoidalDriftSpec,
                                   SeededRandomSpec, CyclicNoCondorcetSpec>;

// Config-file names: constant, abrupt_switch, sinusoidal_drift, seeded_random,
// cyclic_no_condorcet.
std::string kind_name(const AdversarySpec& spec);

int arm_count(const AdversarySpec& spec);

// Throws BadSpec when parameters are out of range.
void check_spec(const AdversarySpec& spec);

PreferenceMatrix preference_at(const AdversarySpec& spec, long long t);

// Lazy view over P_1..P_T. Throws BadSpec up front.
PreferenceSequence build_sequence(const AdversarySpec& spec, long long T);

// Arm 1 beats every other arm with probability 1/2 + gap (K-1)/K and all
// other pairs are even, so b(1) - b(j) = gap for every j != 1.
PreferenceMatrix borda_gap_matrix(int K, double gap);

// Same kind of instance at a different number of arms. Works for
// seeded_random, cyclic_no_condorcet and gap-built constant specs; throws
// BadSpec for explicit matrices.
AdversarySpec resize_adversary(const AdversarySpec& spec, int K);

}  // namespace midex
