#pragma once

#include <cstddef>
#include <vector>

#include "midex/prefcore.hpp"
#include "midex/rng.hpp"

namespace midex {

// The m-element multiset played in one round. Order is significant: item i
// is A(i). Duplicates allowed.
class ArmMultiset {
 public:
  // Throws BadM when fewer than two items are given.
  explicit ArmMultiset(std::vector<Arm> items);

  int m() const { return static_cast<int>(items_.size()); }
  Arm operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Arm>& items() const { return items_; }

  friend bool operator==(const ArmMultiset&, const ArmMultiset&) = default;

 private:
  std::vector<Arm> items_;
};

// Probability of each multiset index being reported as the winner under the
// pairwise-subset choice model:
//   W(i | A, P) = sum_{j != i} 2 P(A(i), A(j)) / (m (m - 1))
// Throws ArmOutOfRange when an item is not an arm of P.
std::vector<double> winner_distribution(const ArmMultiset& A, const PreferenceMatrix& P);

// Inverse-CDF draw over winner_distribution in index order.
std::size_t sample_winner(const ArmMultiset& A, const PreferenceMatrix& P, Rng& rng);

// Single Bernoulli duel: true ("1") with probability P(i, j).
bool duel(Arm i, Arm j, const PreferenceMatrix& P, Rng& rng);

}  // namespace midex
