#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "midex/adversaries.hpp"
#include "midex/choicemodel.hpp"
#include "midex/learner.hpp"
#include "midex/ledger.hpp"
#include "midex/rng.hpp"
#include "midex/schedule.hpp"

namespace midex {

// Plays a multi-dueling learner on a dueling-bandit instance: pick two
// distinct positions of the learner's multiset, duel those arms, and report
// the winning position back to the learner.

struct ReductionTrace {
  long long t = 0;
  ArmMultiset A{{0, 0}};
  std::size_t i = 0;  // positions in A, distinct
  std::size_t j = 1;
  Arm first = 0;      // A(i)
  Arm second = 0;     // A(j)
  bool w = false;     // true iff A(i) won the duel
  std::size_t index = 0;
};

// Uniform over the m(m-1) ordered pairs of distinct positions. Throws BadM.
std::pair<std::size_t, std::size_t> propose_pair(int m, Rng& rng);

// i when w, else j.
inline std::size_t feedback_to_index(std::size_t i, std::size_t j, bool w) { return w ? i : j; }

// One reduced round. Randomness: pair from (seed, t, PairPick), duel from
// (seed, t, Duel), learner from (seed, t, Select).
ReductionTrace reduced_round(Learner& learner, long long t, int m, const PreferenceMatrix& P,
                             std::uint64_t seed);

struct ReducedLedgers {
  RegretLedger dueling;  // b(i*) - (b(A(i)) + b(A(j))) / 2
  RegretLedger multi;    // b(i*) - (1/m) sum_k b(A(k))
};

// Full T-round reduced run with both ledgers logged in one pass.
ReducedLedgers run_reduced(Learner& learner, const AdversarySpec& spec, long long T,
                           const MSchedule& schedule,
                           std::uint64_t seed);

}  // namespace midex
