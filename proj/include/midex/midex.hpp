#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "midex/choicemodel.hpp"
#include "midex/learner.hpp"
#include "midex/prefcore.hpp"
#include "midex/rng.hpp"
#include "midex/schedule.hpp"

namespace midex {

// m' = sqrt(3/2) + sqrt(2/3) (3m+1)^2 / (4 (m+1)^2). Throws BadM for m < 2.
double m_prime(int m);
// Max of m_prime over the schedule (m' is increasing in m, so m_prime(max)).
double m_prime(const MSchedule& schedule);

struct MidexParams {
  int K;
  long long T;
  MSchedule m_schedule;
  double eta;
  double gamma;
  double m_prime;
};

// Smallest exploration mix for which eta * shat stays at most 1:
// sqrt(3 eta K / 2).
double min_gamma(double eta, int K);

// eta = (2 log K / (T sqrt(K) m'))^(2/3), gamma = sqrt(3 eta K / 2).
// Throws InfeasibleParams when that gamma exceeds 1 (horizon too short for
// the schedule), BadM / ValidationError on malformed input.
MidexParams default_params(int K, long long T, const MSchedule& schedule);

// Explicit (eta, gamma). Enforces eta > 0, gamma in (0, 1],
// gamma >= min_gamma(eta, K) and 2 <= m_t <= K.
MidexParams make_params(int K, long long T, const MSchedule& schedule, double eta,
                        double gamma);

struct MidexState {
  long long round = 1;
  std::vector<double> cum_scores;  // sum of shat_tau over tau < round
  std::vector<double> q;           // mixed sampling distribution q_t
  std::vector<double> q_tilde;     // softmax(eta * cum_scores)

  static MidexState initial(int K);
};

struct RoundTrace {
  long long t = 0;
  Arm x = 0;
  Arm y = 0;
  bool x_major = true;  // x received ceil(m/2) copies
  ArmMultiset A{{0, 0}};
  double q_x = 0.0;     // q_t(x_t)
  double q_y = 0.0;     // q_t(y_t)
  // Filled in by step().
  std::size_t winner_index = 0;
  Arm o = 0;
  double g = 0.0;
  double shat_value = 0.0;  // shat_t(x_t); shat_t is zero at every other arm
};

// x copies first, then y copies. x gets ceil(m/2) copies when x_major.
ArmMultiset build_multiset(Arm x, Arm y, int m, bool x_major);

// Draws x_t, y_t i.i.d. from q_t, then a fair coin for the split.
RoundTrace select(const MidexState& state, const MidexParams& params, Rng& rng);

// Feedback transform. Evaluated as one integer ratio, so the result is the
// correctly rounded value of the exact rational:
//   m even: (4(m-1) w - (m-2)) / (2m)
//   m odd:  (4m w - (m-1)) / (2(m+1))
double g_transform(int m, bool o_equals_x);

struct SparseScore {
  Arm arm;
  double value;

  std::vector<double> to_dense(int K) const;
};

// shat(x_t) = g / (K q(x_t) q(y_t)); zero elsewhere. Throws FloorViolation
// if any q(i) < gamma / K.
SparseScore estimate_scores(const RoundTrace& trace, std::span<const double> q, double gamma);

// Adds shat to the cumulative scores and recomputes q_tilde and q with a
// max-shifted softmax. Advances the round counter.
void update(MidexState& state, const SparseScore& shat, const MidexParams& params);

// Records the winner index and resolves o_t and g. o_t = x_t iff
// A(winner_index) = x_t, so o_t = x_t whenever x_t = y_t. Throws
// IndexOutOfRange.
RoundTrace resolve_feedback(RoundTrace partial, std::size_t winner_index);

// Completes a round from the environment's winner index: resolves o_t,
// computes g and shat, updates the state. Throws IndexOutOfRange.
RoundTrace step(MidexState& state, const MidexParams& params, std::size_t winner_index,
                RoundTrace partial);

// Learner adapter used by the harness and the reduction.
class MidexLearner : public Learner {
 public:
  explicit MidexLearner(MidexParams params);

  ArmMultiset select(long long t, int m, Rng& rng) override;
  void observe(std::size_t winner_index) override;

  const MidexParams& params() const { return params_; }
  const MidexState& state() const { return state_; }
  const RoundTrace& last_trace() const { return trace_; }

 private:
  MidexParams params_;
  MidexState state_;
  RoundTrace trace_;
};

}  // namespace midex
