#pragma once

#include <string>
#include <vector>

namespace midex {

enum class VerifyLevel { Exhaustive, Sampled };

struct PropertyCheck {
  std::string property;  // e.g. "g mean", "reduction"
  std::string check;     // what was measured
  bool passed = false;
  double deviation = 0.0;  // worst |measured - expected|, or worst bound excess
  double tolerance = 0.0;  // absolute tolerance, or the z-score limit for sampled checks
  long long cases = 0;
  std::string detail;
};

struct PropertyReport {
  VerifyLevel level = VerifyLevel::Exhaustive;
  std::vector<PropertyCheck> checks;

  bool all_passed() const;
};

// Battery of checks for the estimator's analytic properties.
//
// Exhaustive: every source of randomness (x, y, the split coin, the winner
// index, the reduction's pair and duel) is enumerated with its exact
// probability for small instances (K <= 5, m <= 5, plus the pair identity up
// to m = 8), tolerance 1e-12.
//
// Sampled: Monte-Carlo at larger sizes, each check passes when the sample
// mean lies within 3 standard errors of the analytic value.
PropertyReport verify_properties(VerifyLevel level, unsigned long long seed = 20240601ULL);

// Exact expectations used by the exhaustive battery; exposed for tests.

// E[g] over the split coin and winner index for a given pair.
double expected_g(int m, double p_xy);

// E[shat(i)] for every arm with q and P fixed.
std::vector<double> expected_shat(const std::vector<double>& q,
                                  const std::vector<std::vector<double>>& P, int m,
                                  double gamma);

// E[sum_i q(i) shat(i)^2] with q and P fixed.
double expected_weighted_shat_sq(const std::vector<double>& q,
                                 const std::vector<std::vector<double>>& P, int m, double gamma);

// marginals[j][i] = Pr(A(j) = i) with q fixed.
std::vector<std::vector<double>> position_marginals(const std::vector<double>& q, int m);

}  // namespace midex
