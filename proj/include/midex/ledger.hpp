#pragma once

#include <span>
#include <vector>

#include "midex/prefcore.hpp"

namespace midex {

// Per-round Borda regret accounting against a fixed hindsight arm.
//   regret_t         = b_t(i*) - (1/|A_t|) sum_{a in A_t} b_t(a)
//   shifted_regret_t = s_t(i*) - (1/|A_t|) sum_{a in A_t} s_t(a)
// The played multiset may be the learner's m arms or a dueling pair.
class RegretLedger {
 public:
  RegretLedger() = default;
  explicit RegretLedger(long long reserve_rounds);

  void record(std::span<const double> borda, std::span<const double> shifted, Arm best,
              std::span<const Arm> played);

  long long rounds() const { return static_cast<long long>(cum_regret_.size()); }
  double final_regret() const { return cum_regret_.empty() ? 0.0 : cum_regret_.back(); }
  double final_shifted_regret() const {
    return cum_shifted_.empty() ? 0.0 : cum_shifted_.back();
  }

  // All indexed by round - 1.
  const std::vector<double>& bench_score() const { return bench_; }
  const std::vector<double>& played_avg_score() const { return played_; }
  const std::vector<double>& cum_regret() const { return cum_regret_; }
  const std::vector<double>& cum_shifted_regret() const { return cum_shifted_; }

 private:
  std::vector<double> bench_;
  std::vector<double> played_;
  std::vector<double> cum_regret_;
  std::vector<double> cum_shifted_;
};

}  // namespace midex
