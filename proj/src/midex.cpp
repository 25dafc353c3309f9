#include "midex/midex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "midex/errors.hpp"

namespace midex {
namespace {

void check_schedule(const MSchedule& schedule, int K) {
  if (schedule.min() < 2) {
    throw BadM("every m_t must be at least 2, got " + std::to_string(schedule.min()));
  }
  if (schedule.max() > K) {
    throw BadM("m_t = " + std::to_string(schedule.max()) + " exceeds K = " + std::to_string(K));
  }
}

void softmax_mix(MidexState& state, double eta, double gamma) {
  const std::size_t K = state.cum_scores.size();
  double top = eta * state.cum_scores[0];
  for (std::size_t i = 1; i < K; ++i) top = std::max(top, eta * state.cum_scores[i]);
  double norm = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    state.q_tilde[i] = std::exp(eta * state.cum_scores[i] - top);
    norm += state.q_tilde[i];
  }
  const double floor = gamma / static_cast<double>(K);
  for (std::size_t i = 0; i < K; ++i) {
    state.q_tilde[i] /= norm;
    state.q[i] = (1.0 - gamma) * state.q_tilde[i] + floor;
  }
}

}  // namespace

MSchedule::MSchedule(int m) : values_{m} {}

MSchedule::MSchedule(std::vector<int> values) : values_(std::move(values)) {
  if (values_.empty()) throw BadM("empty m schedule");
}

int MSchedule::max() const { return *std::max_element(values_.begin(), values_.end()); }
int MSchedule::min() const { return *std::min_element(values_.begin(), values_.end()); }

double m_prime(int m) {
  if (m < 2) throw BadM("m' needs m >= 2, got " + std::to_string(m));
  const double num = static_cast<double>(3 * static_cast<long long>(m) + 1);
  const double den = static_cast<double>(m + 1);
  return std::sqrt(1.5) + std::sqrt(2.0 / 3.0) * (num * num) / (4.0 * den * den);
}

double m_prime(const MSchedule& schedule) {
  double best = 0.0;
  for (int m : schedule.values()) best = std::max(best, m_prime(m));
  return best;
}

double min_gamma(double eta, int K) { return std::sqrt(3.0 * eta * K / 2.0); }

MidexParams default_params(int K, long long T, const MSchedule& schedule) {
  if (K < 2) throw ValidationError("K", "needs K >= 2");
  if (T < 1) throw ValidationError("T", "needs T >= 1");
  check_schedule(schedule, K);
  const double mp = m_prime(schedule);
  const double eta =
      std::pow(2.0 * std::log(static_cast<double>(K)) /
                   (static_cast<double>(T) * std::sqrt(static_cast<double>(K)) * mp),
               2.0 / 3.0);
  const double gamma = min_gamma(eta, K);
  if (gamma > 1.0) {
    throw InfeasibleParams("gamma = " + std::to_string(gamma) + " > 1 at K = " +
                           std::to_string(K) + ", T = " + std::to_string(T) +
                           "; the horizon is too short for this schedule");
  }
  return MidexParams{K, T, schedule, eta, gamma, mp};
}

MidexParams make_params(int K, long long T, const MSchedule& schedule, double eta,
                        double gamma) {
  if (K < 2) throw ValidationError("K", "needs K >= 2");
  if (T < 1) throw ValidationError("T", "needs T >= 1");
  check_schedule(schedule, K);
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta", "must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma", "must lie in (0, 1]");
  if (gamma < min_gamma(eta, K)) {
    throw InfeasibleParams("gamma = " + std::to_string(gamma) + " is below sqrt(3 eta K / 2) = " +
                           std::to_string(min_gamma(eta, K)));
  }
  return MidexParams{K, T, schedule, eta, gamma, m_prime(schedule)};
}

MidexState MidexState::initial(int K) {
  MidexState s;
  s.round = 1;
  s.cum_scores.assign(K, 0.0);
  s.q.assign(K, 1.0 / K);
  s.q_tilde.assign(K, 1.0 / K);
  return s;
}

ArmMultiset build_multiset(Arm x, Arm y, int m, bool x_major) {
  if (m < 2) throw BadM("m must be at least 2, got " + std::to_string(m));
  const int x_copies = x_major ? (m + 1) / 2 : m / 2;
  std::vector<Arm> items(static_cast<std::size_t>(m), y);
  std::fill(items.begin(), items.begin() + x_copies, x);
  return ArmMultiset(std::move(items));
}

RoundTrace select(const MidexState& state, const MidexParams& params, Rng& rng) {
  const int m = params.m_schedule.at(state.round);
  RoundTrace tr;
  tr.t = state.round;
  tr.x = static_cast<Arm>(rng.categorical(state.q));
  tr.y = static_cast<Arm>(rng.categorical(state.q));
  tr.x_major = rng.bernoulli(0.5);
  tr.A = build_multiset(tr.x, tr.y, m, tr.x_major);
  tr.q_x = state.q[tr.x];
  tr.q_y = state.q[tr.y];
  return tr;
}

double g_transform(int m, bool o_equals_x) {
  if (m < 2) throw BadM("g needs m >= 2, got " + std::to_string(m));
  const std::int64_t mm = m;
  const std::int64_t w = o_equals_x ? 1 : 0;
  if (mm % 2 == 0) {
    return static_cast<double>(4 * (mm - 1) * w - (mm - 2)) / static_cast<double>(2 * mm);
  }
  return static_cast<double>(4 * mm * w - (mm - 1)) / static_cast<double>(2 * (mm + 1));
}

std::vector<double> SparseScore::to_dense(int K) const {
  std::vector<double> out(static_cast<std::size_t>(K), 0.0);
  out[static_cast<std::size_t>(arm)] = value;
  return out;
}

SparseScore estimate_scores(const RoundTrace& trace, std::span<const double> q, double gamma) {
  const double floor = gamma / static_cast<double>(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] < floor) {
      throw FloorViolation("q(" + std::to_string(i + 1) + ") = " + std::to_string(q[i]) +
                           " is below gamma/K = " + std::to_string(floor));
    }
  }
  const double K = static_cast<double>(q.size());
  return SparseScore{trace.x, trace.g / (K * q[trace.x] * q[trace.y])};
}

void update(MidexState& state, const SparseScore& shat, const MidexParams& params) {
  state.cum_scores[shat.arm] += shat.value;
  softmax_mix(state, params.eta, params.gamma);
  ++state.round;
}

RoundTrace resolve_feedback(RoundTrace partial, std::size_t winner_index) {
  const int m = partial.A.m();
  if (winner_index >= static_cast<std::size_t>(m)) {
    throw IndexOutOfRange("winner index " + std::to_string(winner_index + 1) +
                          " is outside [1," + std::to_string(m) + "]");
  }
  partial.winner_index = winner_index;
  partial.o = partial.A[winner_index] == partial.x ? partial.x : partial.y;
  partial.g = g_transform(m, partial.o == partial.x);
  return partial;
}

RoundTrace step(MidexState& state, const MidexParams& params, std::size_t winner_index,
                RoundTrace partial) {
  partial = resolve_feedback(std::move(partial), winner_index);
  const SparseScore shat = estimate_scores(partial, state.q, params.gamma);
  partial.shat_value = shat.value;
  update(state, shat, params);
  return partial;
}

MidexLearner::MidexLearner(MidexParams params)
    : params_(std::move(params)), state_(MidexState::initial(params_.K)) {}

ArmMultiset MidexLearner::select(long long t, int m, Rng& rng) {
  if (t != state_.round) {
    throw IndexOutOfRange("learner is at round " + std::to_string(state_.round) +
                          ", asked to play round " + std::to_string(t));
  }
  if (m != params_.m_schedule.at(t)) {
    throw BadM("round " + std::to_string(t) + " asks for m = " + std::to_string(m) +
               " but the schedule says " + std::to_string(params_.m_schedule.at(t)));
  }
  trace_ = midex::select(state_, params_, rng);
  return trace_.A;
}

void MidexLearner::observe(std::size_t winner_index) {
  trace_ = step(state_, params_, winner_index, std::move(trace_));
}

}  // namespace midex
