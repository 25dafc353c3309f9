#include "midex/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "midex/errors.hpp"

namespace midex {
namespace {

std::unique_ptr<Learner> make_learner(const RunConfig& config, Algorithm algo) {
  switch (algo) {
    case Algorithm::Midex:
      return std::make_unique<MidexLearner>(resolve_params(config));
    case Algorithm::Uniform:
      return std::make_unique<UniformLearner>(config.K);
    case Algorithm::FixedArm:
      return std::make_unique<FixedArmLearner>(config.K, config.fixed_arm);
    case Algorithm::Reduced:
      break;
  }
  throw ValidationError("reduced_inner", "the reduction cannot wrap itself");
}

std::vector<long long> snapshot_rounds(long long T, long long cadence) {
  std::vector<long long> rows;
  for (long long t = cadence; t <= T; t += cadence) rows.push_back(t);
  if (rows.empty() || rows.back() != T) rows.push_back(T);
  return rows;
}

double g_bound(int m) { return (3.0 * m + 1.0) / (2.0 * m + 2.0); }

// Per-replication reduction kept by run_replications.
struct ReplicationSummary {
  std::vector<double> regret, shifted, bench, played;  // at snapshot rounds
  double final_regret = 0.0;
  double final_shifted = 0.0;
  double final_multi = 0.0;
  std::optional<RunDiagnostics> diagnostics;
};

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Midex: return "midex";
    case Algorithm::Uniform: return "uniform";
    case Algorithm::FixedArm: return "fixed_arm";
    case Algorithm::Reduced: return "reduced";
  }
  return "unknown";
}

void validate_config(const RunConfig& c) {
  if (c.K < 2) throw ValidationError("K", "must be >= 2");
  if (c.T < 1) throw ValidationError("T", "must be >= 1");
  if (c.m_schedule.min() < 2) throw ValidationError("m", "every m must be >= 2");
  if (c.m_schedule.max() > c.K) throw ValidationError("m", "m must not exceed K");
  if (arm_count(c.adversary) != c.K) {
    throw ValidationError("adversary", "adversary has " + std::to_string(arm_count(c.adversary)) +
                                           " arms but K = " + std::to_string(c.K));
  }
  try {
    check_spec(c.adversary);
  } catch (const BadSpec& e) {
    throw ValidationError("adversary", e.what());
  }
  if (c.algo == Algorithm::FixedArm && (c.fixed_arm < 0 || c.fixed_arm >= c.K)) {
    throw ValidationError("fixed_arm", "must lie in [1, K]");
  }
  if (c.reduced_inner == Algorithm::Reduced) {
    throw ValidationError("reduced_inner", "the reduction cannot wrap itself");
  }
  if (c.replications < 1) throw ValidationError("replications", "must be >= 1");
  if (c.threads < 1) throw ValidationError("threads", "must be >= 1");
  if (c.snapshot_every < 0) throw ValidationError("snapshot_every", "must be >= 0");
  if (c.eta && !(*c.eta > 0.0)) throw ValidationError("eta", "must be > 0");
  if (c.gamma && !(*c.gamma > 0.0 && *c.gamma <= 1.0)) {
    throw ValidationError("gamma", "must lie in (0, 1]");
  }
  for (int k : c.sweep_K) {
    if (k < 2 || k < c.m_schedule.max()) throw ValidationError("sweep.K", "every K must be >= max(2, m)");
  }
  for (long long t : c.sweep_T) {
    if (t < 1) throw ValidationError("sweep.T", "every T must be >= 1");
  }
}

long long snapshot_cadence(const RunConfig& c) {
  if (c.snapshot_every > 0) return c.snapshot_every;
  return std::max<long long>(1, c.T / 1000);
}

MidexParams resolve_params(const RunConfig& c) {
  if (!c.eta && !c.gamma) return default_params(c.K, c.T, c.m_schedule);
  const double eta = c.eta ? *c.eta : default_params(c.K, c.T, c.m_schedule).eta;
  const double gamma = c.gamma.value_or(min_gamma(eta, c.K));
  return make_params(c.K, c.T, c.m_schedule, eta, gamma);
}

std::uint64_t replication_seed(std::uint64_t master, int r) {
  return derive_seed(master, static_cast<std::uint64_t>(r), StreamRole::Replication);
}

double regret_bound(int K, long long T, double mp) {
  const double kl = K * std::log(static_cast<double>(K));
  return 3.78 * std::pow(mp, 2.0 / 3.0) * std::cbrt(kl) *
         std::pow(static_cast<double>(T), 2.0 / 3.0);
}

double simplified_bound(int K, long long T) {
  const double kl = K * std::log(static_cast<double>(K));
  return 8.13 * std::cbrt(kl) * std::pow(static_cast<double>(T), 2.0 / 3.0);
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

EpisodeResult run_episode(const RunConfig& config, std::uint64_t seed, bool keep_trace) {
  validate_config(config);
  const PreferenceSequence seq = build_sequence(config.adversary, config.T);
  EpisodeResult out{benchmark(seq), RegretLedger(config.T), std::nullopt, std::nullopt, {}, {}};
  const Arm best = out.benchmark.best_arm;

  const bool reduced = config.algo == Algorithm::Reduced;
  std::unique_ptr<Learner> learner =
      make_learner(config, reduced ? config.reduced_inner : config.algo);
  auto* midex = dynamic_cast<MidexLearner*>(learner.get());
  if (reduced) out.multi.emplace(config.T);

  RunDiagnostics diag;
  double eta = 0.0, floor = 0.0;
  if (midex) {
    eta = midex->params().eta;
    floor = midex->params().gamma / config.K;
    diag.min_q_over_floor = std::numeric_limits<double>::infinity();
  }
  const long long cadence = snapshot_cadence(config);

  for (long long t = 1; t <= config.T; ++t) {
    const PreferenceMatrix P = seq.at(t);
    const ScoreVector b = borda_scores(P);
    const ScoreVector s = shifted_borda_scores(P);
    const int m = config.m_schedule.at(t);

    if (midex) {
      const auto& q = midex->state().q;
      diag.min_q_over_floor =
          std::min(diag.min_q_over_floor, *std::min_element(q.begin(), q.end()) / floor);
      if (keep_trace && (t % cadence == 0 || t == config.T)) out.q_snapshots.push_back(q);
    }

    if (reduced) {
      const ReductionTrace tr = reduced_round(*learner, t, m, P, seed);
      const std::array<Arm, 2> pair{tr.first, tr.second};
      out.ledger.record(b.values, s.values, best, pair);
      out.multi->record(b.values, s.values, best, tr.A.items());
    } else {
      Rng select_rng = Rng::stream(seed, static_cast<std::uint64_t>(t), StreamRole::Select);
      Rng env_rng = Rng::stream(seed, static_cast<std::uint64_t>(t), StreamRole::Environment);
      const ArmMultiset A = learner->select(t, m, select_rng);
      learner->observe(sample_winner(A, P, env_rng));
      out.ledger.record(b.values, s.values, best, A.items());
    }

    if (midex) {
      const RoundTrace& tr = midex->last_trace();
      const double e = eta * tr.shat_value;
      diag.max_abs_g = std::max(diag.max_abs_g, std::abs(tr.g));
      diag.max_abs_g_bound = std::max(diag.max_abs_g_bound, g_bound(m));
      diag.min_eta_shat = std::min(diag.min_eta_shat, e);
      diag.max_eta_shat = std::max(diag.max_eta_shat, e);
      diag.sum_q_shat_sq += tr.q_x * tr.shat_value * tr.shat_value;
      diag.sum_q_shat_sq_bound +=
          g_bound(m) * g_bound(m) * config.K / midex->params().gamma;
      ++diag.rounds;
      if (keep_trace) out.trace.push_back(tr);
    }
  }
  if (midex) out.diagnostics = diag;
  return out;
}

AggregateResult run_replications(const RunConfig& config) {
  validate_config(config);
  const long long cadence = snapshot_cadence(config);
  const std::vector<long long> rows = snapshot_rounds(config.T, cadence);
  const int n = config.replications;

  AggregateResult agg;
  agg.snapshot_rounds = rows;
  for (int r = 0; r < n; ++r) agg.seeds.push_back(replication_seed(config.seed, r));

  const bool uses_midex = config.algo == Algorithm::Midex ||
                          (config.algo == Algorithm::Reduced &&
                           config.reduced_inner == Algorithm::Midex);
  if (uses_midex) agg.params = resolve_params(config);

  std::vector<ReplicationSummary> reps(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= n) return;
      try {
        EpisodeResult ep = run_episode(config, agg.seeds[r], r == 0 && config.write_trace);
        ReplicationSummary& rs = reps[r];
        for (long long t : rows) {
          const auto i = static_cast<std::size_t>(t - 1);
          rs.regret.push_back(ep.ledger.cum_regret()[i]);
          rs.shifted.push_back(ep.ledger.cum_shifted_regret()[i]);
          rs.bench.push_back(ep.ledger.bench_score()[i]);
          rs.played.push_back(ep.ledger.played_avg_score()[i]);
        }
        rs.final_regret = ep.ledger.final_regret();
        rs.final_shifted = ep.ledger.final_shifted_regret();
        if (ep.multi) rs.final_multi = ep.multi->final_regret();
        rs.diagnostics = ep.diagnostics;
        if (r == 0 && config.write_trace) {
          agg.trace = std::move(ep.trace);
          agg.q_snapshots = std::move(ep.q_snapshots);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };

  const int workers = std::min(config.threads, n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Deterministic reduction in replication order.
  const std::size_t nrows = rows.size();
  agg.mean_regret.assign(nrows, 0.0);
  agg.std_regret.assign(nrows, 0.0);
  agg.mean_shifted_regret.assign(nrows, 0.0);
  agg.mean_bench_score.assign(nrows, 0.0);
  agg.mean_played_score.assign(nrows, 0.0);
  std::vector<double> column(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < nrows; ++k) {
    for (int r = 0; r < n; ++r) column[r] = reps[r].regret[k];
    std::tie(agg.mean_regret[k], agg.std_regret[k]) = mean_std(column);
    for (int r = 0; r < n; ++r) column[r] = reps[r].shifted[k];
    agg.mean_shifted_regret[k] = mean_std(column).first;
    for (int r = 0; r < n; ++r) column[r] = reps[r].bench[k];
    agg.mean_bench_score[k] = mean_std(column).first;
    for (int r = 0; r < n; ++r) column[r] = reps[r].played[k];
    agg.mean_played_score[k] = mean_std(column).first;
  }
  for (const auto& rs : reps) {
    agg.final_regret.push_back(rs.final_regret);
    agg.final_shifted_regret.push_back(rs.final_shifted);
    if (config.algo == Algorithm::Reduced) agg.final_multi_regret.push_back(rs.final_multi);
    if (rs.diagnostics) agg.diagnostics.push_back(*rs.diagnostics);
  }
  std::tie(agg.mean_final, agg.std_final) = mean_std(agg.final_regret);

  agg.bound = regret_bound(config.K, config.T, m_prime(config.m_schedule));
  agg.bound_simplified = simplified_bound(config.K, config.T);
  agg.ratio_to_bound = agg.mean_final / agg.bound_simplified;
  return agg;
}

}  // namespace midex
