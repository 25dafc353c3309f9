#include "midex/choicemodel.hpp"

#include <string>

#include "midex/errors.hpp"

namespace midex {
namespace {

void check_arm(Arm a, const PreferenceMatrix& P) {
  if (a < 0 || a >= P.K()) {
    throw ArmOutOfRange("arm " + std::to_string(a + 1) + " is outside [1," +
                        std::to_string(P.K()) + "]");
  }
}

}  // namespace

ArmMultiset::ArmMultiset(std::vector<Arm> items) : items_(std::move(items)) {
  if (items_.size() < 2) {
    throw BadM("a multiset needs m >= 2 items, got " + std::to_string(items_.size()));
  }
}

std::vector<double> winner_distribution(const ArmMultiset& A, const PreferenceMatrix& P) {
  const int m = A.m();
  for (Arm a : A.items()) check_arm(a, P);
  const double norm = static_cast<double>(m) * (m - 1);
  std::vector<double> probs(m);
  for (int i = 0; i < m; ++i) {
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j != i) sum += P(A[i], A[j]);
    }
    probs[i] = 2.0 * sum / norm;
  }
  return probs;
}

std::size_t sample_winner(const ArmMultiset& A, const PreferenceMatrix& P, Rng& rng) {
  const std::vector<double> probs = winner_distribution(A, P);
  return rng.categorical(probs);
}

bool duel(Arm i, Arm j, const PreferenceMatrix& P, Rng& rng) {
  check_arm(i, P);
  check_arm(j, P);
  return rng.bernoulli(P(i, j));
}

}  // namespace midex
