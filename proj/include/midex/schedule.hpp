#pragma once

#include <cstddef>
#include <vector>

namespace midex {

// Number of arms to play at each round. Either a single m, or a list that is
// applied cyclically (m_t = values[(t - 1) % size]); a list of length T is
// the plain per-round schedule.
class MSchedule {
 public:
  explicit MSchedule(int m);
  explicit MSchedule(std::vector<int> values);

  int at(long long t) const {
    return values_[static_cast<std::size_t>((t - 1) % static_cast<long long>(values_.size()))];
  }
  int max() const;
  int min() const;
  bool is_constant() const { return values_.size() == 1; }
  const std::vector<int>& values() const { return values_; }

  friend bool operator==(const MSchedule&, const MSchedule&) = default;

 private:
  std::vector<int> values_;
};

}  // namespace midex
