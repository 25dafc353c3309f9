#include "midex/ledger.hpp"

namespace midex {

RegretLedger::RegretLedger(long long reserve_rounds) {
  const auto n = static_cast<std::size_t>(reserve_rounds > 0 ? reserve_rounds : 0);
  bench_.reserve(n);
  played_.reserve(n);
  cum_regret_.reserve(n);
  cum_shifted_.reserve(n);
}

void RegretLedger::record(std::span<const double> borda, std::span<const double> shifted,
                          Arm best, std::span<const Arm> played) {
  double b_sum = 0.0;
  double s_sum = 0.0;
  for (Arm a : played) {
    b_sum += borda[a];
    s_sum += shifted[a];
  }
  const double n = static_cast<double>(played.size());
  const double b_avg = b_sum / n;
  const double s_avg = s_sum / n;
  const double prev_r = cum_regret_.empty() ? 0.0 : cum_regret_.back();
  const double prev_s = cum_shifted_.empty() ? 0.0 : cum_shifted_.back();
  bench_.push_back(borda[best]);
  played_.push_back(b_avg);
  cum_regret_.push_back(prev_r + (borda[best] - b_avg));
  cum_shifted_.push_back(prev_s + (shifted[best] - s_avg));
}

}  // namespace midex
