#include "midex/learner.hpp"

#include <string>
#include <vector>

#include "midex/errors.hpp"

namespace midex {

UniformLearner::UniformLearner(int K) : K_(K) {
  if (K < 2) throw ValidationError("K", "needs K >= 2");
}

ArmMultiset UniformLearner::select(long long, int m, Rng& rng) {
  std::vector<Arm> items(static_cast<std::size_t>(m));
  for (Arm& a : items) a = static_cast<Arm>(rng.below(static_cast<std::uint64_t>(K_)));
  return ArmMultiset(std::move(items));
}

FixedArmLearner::FixedArmLearner(int K, Arm arm) : arm_(arm) {
  if (arm < 0 || arm >= K) {
    throw ArmOutOfRange("fixed arm " + std::to_string(arm + 1) + " is outside [1," +
                        std::to_string(K) + "]");
  }
}

ArmMultiset FixedArmLearner::select(long long, int m, Rng&) {
  return ArmMultiset(std::vector<Arm>(static_cast<std::size_t>(m), arm_));
}

}  // namespace midex
