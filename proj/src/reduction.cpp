#include "midex/reduction.hpp"

#include <array>
#include <string>

#include "midex/errors.hpp"

namespace midex {

std::pair<std::size_t, std::size_t> propose_pair(int m, Rng& rng) {
  if (m < 2) throw BadM("pair sampling needs m >= 2, got " + std::to_string(m));
  const auto mm = static_cast<std::uint64_t>(m);
  const std::size_t i = rng.below(mm);
  std::size_t j = rng.below(mm - 1);
  if (j >= i) ++j;
  return {i, j};
}

ReductionTrace reduced_round(Learner& learner, long long t, int m, const PreferenceMatrix& P,
                             std::uint64_t seed) {
  const auto round = static_cast<std::uint64_t>(t);
  Rng select_rng = Rng::stream(seed, round, StreamRole::Select);
  Rng pair_rng = Rng::stream(seed, round, StreamRole::PairPick);
  Rng duel_rng = Rng::stream(seed, round, StreamRole::Duel);

  ReductionTrace tr;
  tr.t = t;
  tr.A = learner.select(t, m, select_rng);
  std::tie(tr.i, tr.j) = propose_pair(tr.A.m(), pair_rng);
  tr.first = tr.A[tr.i];
  tr.second = tr.A[tr.j];
  tr.w = duel(tr.first, tr.second, P, duel_rng);
  tr.index = feedback_to_index(tr.i, tr.j, tr.w);
  learner.observe(tr.index);
  return tr;
}

ReducedLedgers run_reduced(Learner& learner, const AdversarySpec& spec, long long T,
                           const MSchedule& schedule,
                           std::uint64_t seed) {
  const PreferenceSequence seq = build_sequence(spec, T);
  const BenchmarkResult bench = benchmark(seq);
  ReducedLedgers out{RegretLedger(T), RegretLedger(T)};
  for (long long t = 1; t <= T; ++t) {
    const PreferenceMatrix P = seq.at(t);
    const ScoreVector b = borda_scores(P);
    const ScoreVector s = shifted_borda_scores(P);
    const ReductionTrace tr = reduced_round(learner, t, schedule.at(t), P, seed);
    const std::array<Arm, 2> pair{tr.first, tr.second};
    out.dueling.record(b.values, s.values, bench.best_arm, pair);
    out.multi.record(b.values, s.values, bench.best_arm, tr.A.items());
  }
  return out;
}

}  // namespace midex
