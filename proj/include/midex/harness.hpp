#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "midex/adversaries.hpp"
#include "midex/ledger.hpp"
#include "midex/midex.hpp"
#include "midex/reduction.hpp"
#include "midex/schedule.hpp"

namespace midex {

enum class Algorithm { Midex, Uniform, FixedArm, Reduced };

std::string algorithm_name(Algorithm a);

struct RunConfig {
  int K = 0;
  long long T = 0;
  MSchedule m_schedule{2};
  AdversarySpec adversary = CyclicNoCondorcetSpec{3, 0.0};
  Algorithm algo = Algorithm::Midex;
  Arm fixed_arm = 0;  // only used by FixedArm
  std::uint64_t seed = 0;
  int replications = 1;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::string output_dir;
  long long snapshot_every = 0;  // 0 selects max(1, T / 1000)
  int threads = 1;
  bool write_trace = false;      // per-round learner trace of replication 0
  // Learner wrapped by the reduction when algo == Reduced or under `reduce`.
  Algorithm reduced_inner = Algorithm::Midex;
  // Grid for `sweep`; empty means "use K / T".
  std::vector<int> sweep_K;
  std::vector<long long> sweep_T;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Cross-field checks. Throws ValidationError naming the offending field.
void validate_config(const RunConfig& config);

long long snapshot_cadence(const RunConfig& config);

// eta / gamma from the config overrides, else default_params.
MidexParams resolve_params(const RunConfig& config);

// Seed of replication r: derive_seed(master, r, Replication).
std::uint64_t replication_seed(std::uint64_t master, int r);

// Running maxima / sums that certify the per-round analytic bounds.
struct RunDiagnostics {
  long long rounds = 0;
  double max_abs_g = 0.0;
  double max_abs_g_bound = 0.0;     // max over rounds of (3m+1)/(2m+2)
  double min_eta_shat = 0.0;        // over every arm, every round
  double max_eta_shat = 0.0;
  double sum_q_shat_sq = 0.0;       // sum_t sum_i q_t(i) shat_t(i)^2
  double sum_q_shat_sq_bound = 0.0; // sum_t (3m_t+1)^2 / (4(m_t+1)^2) K / gamma
  double min_q_over_floor = 0.0;    // min_t min_i q_t(i) / (gamma / K)
};

struct EpisodeResult {
  BenchmarkResult benchmark;
  RegretLedger ledger;                 // dueling ledger in reduced mode
  std::optional<RegretLedger> multi;   // reduced mode: the wrapped learner's ledger
  std::optional<RunDiagnostics> diagnostics;  // MiDEX learners only
  std::vector<RoundTrace> trace;       // filled when keep_trace
  std::vector<std::vector<double>> q_snapshots;  // q_t at snapshot rounds, when keep_trace
};

EpisodeResult run_episode(const RunConfig& config, std::uint64_t seed, bool keep_trace = false);

struct AggregateResult {
  std::vector<long long> snapshot_rounds;
  std::vector<double> mean_regret;
  std::vector<double> std_regret;
  std::vector<double> mean_shifted_regret;
  std::vector<double> mean_bench_score;
  std::vector<double> mean_played_score;

  std::vector<std::uint64_t> seeds;
  std::vector<double> final_regret;
  std::vector<double> final_shifted_regret;
  std::vector<double> final_multi_regret;  // reduced mode only
  double mean_final = 0.0;
  double std_final = 0.0;

  std::optional<MidexParams> params;
  double bound = 0.0;             // 3.78 (m')^(2/3) (K log K)^(1/3) T^(2/3)
  double bound_simplified = 0.0;  // 8.13 (K log K)^(1/3) T^(2/3)
  double ratio_to_bound = 0.0;    // mean_final / bound_simplified
  std::vector<RunDiagnostics> diagnostics;

  std::vector<RoundTrace> trace;  // replication 0, when write_trace
  std::vector<std::vector<double>> q_snapshots;
};

// Independent replications, optionally on config.threads workers. The
// aggregate is identical for any worker count.
AggregateResult run_replications(const RunConfig& config);

double regret_bound(int K, long long T, double m_prime_value);
double simplified_bound(int K, long long T);

// Sample mean and Bessel-corrected standard deviation (0 for n = 1).
std::pair<double, double> mean_std(const std::vector<double>& xs);

}  // namespace midex
