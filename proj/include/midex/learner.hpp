#pragma once

#include <cstddef>

#include "midex/choicemodel.hpp"
#include "midex/rng.hpp"

namespace midex {

// A multi-dueling learner: picks an m-multiset each round, then receives the
// index of the winning entry.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual ArmMultiset select(long long t, int m, Rng& rng) = 0;
  virtual void observe(std::size_t winner_index) = 0;
};

// Plays m arms drawn i.i.d. uniformly from [K]. Ignores feedback.
class UniformLearner : public Learner {
 public:
  explicit UniformLearner(int K);
  ArmMultiset select(long long t, int m, Rng& rng) override;
  void observe(std::size_t) override {}

 private:
  int K_;
};

// Plays m copies of one arm forever.
class FixedArmLearner : public Learner {
 public:
  FixedArmLearner(int K, Arm arm);
  ArmMultiset select(long long t, int m, Rng& rng) override;
  void observe(std::size_t) override {}

 private:
  Arm arm_;
};

}  // namespace midex
