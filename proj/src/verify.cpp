#include "midex/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "midex/adversaries.hpp"
#include "midex/choicemodel.hpp"
#include "midex/harness.hpp"
#include "midex/midex.hpp"
#include "midex/prefcore.hpp"
#include "midex/rng.hpp"

namespace midex {
namespace {

constexpr double kExactTol = 1e-12;
constexpr double kSigmas = 3.0;

// One fully specified outcome of a MiDEX round before the estimator runs.
template <typename Visit>
void enumerate_rounds(const std::vector<double>& q, const PreferenceMatrix& P, int m,
                      Visit&& visit) {
  const int K = static_cast<int>(q.size());
  for (Arm x = 0; x < K; ++x) {
    for (Arm y = 0; y < K; ++y) {
      for (bool x_major : {true, false}) {
        RoundTrace tr;
        tr.x = x;
        tr.y = y;
        tr.x_major = x_major;
        tr.A = build_multiset(x, y, m, x_major);
        tr.q_x = q[x];
        tr.q_y = q[y];
        const std::vector<double> W = winner_distribution(tr.A, P);
        const double w_pair = q[x] * q[y] * 0.5;
        for (std::size_t idx = 0; idx < W.size(); ++idx) {
          if (W[idx] == 0.0) continue;
          visit(resolve_feedback(tr, idx), w_pair * W[idx]);
        }
      }
    }
  }
}

PreferenceMatrix random_matrix(int K, Rng& rng, double lo = 0.0, double hi = 1.0) {
  std::vector<double> e(static_cast<std::size_t>(K) * K, 0.5);
  for (int i = 0; i < K; ++i) {
    for (int j = i + 1; j < K; ++j) {
      const double p = rng.uniform(lo, hi);
      e[static_cast<std::size_t>(i) * K + j] = p;
      e[static_cast<std::size_t>(j) * K + i] = 1.0 - p;
    }
  }
  return validate(K, std::move(e));
}

std::vector<std::vector<double>> rows_of(const PreferenceMatrix& P) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < P.K(); ++i) rows.emplace_back(P.row(i).begin(), P.row(i).end());
  return rows;
}

// q = (1 - gamma) * (random simplex point) + gamma / K, same form as the learner.
std::vector<double> random_floored_q(int K, double gamma, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(K));
  double sum = 0.0;
  for (double& v : w) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (double& v : w) v = (1.0 - gamma) * (v / sum) + gamma / K;
  return w;
}

double g_bound(int m) { return (3.0 * m + 1.0) / (2.0 * m + 2.0); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Running mean / variance (Welford).
struct Moments {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double std_error() const {
    return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  }
};

// |mean - target| / SE, with a zero-variance sample passing only on an exact hit.
double z_score(const Moments& mo, double target) {
  const double se = mo.std_error();
  const double diff = std::abs(mo.mean - target);
  if (se == 0.0) return diff <= kExactTol ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

PropertyCheck exact_check(std::string property, std::string check, double deviation, long long cases,
                       std::string detail = {}) {
  return PropertyCheck{std::move(property), std::move(check), deviation <= kExactTol, deviation,
                    kExactTol, cases, std::move(detail)};
}

PropertyCheck bound_check(std::string property, std::string check, double excess, long long cases,
                       std::string detail = {}) {
  return PropertyCheck{std::move(property), std::move(check), excess <= 0.0, excess, 0.0, cases,
                    std::move(detail)};
}

PropertyCheck sampled_check(std::string property, std::string check, double worst_z, long long cases,
                         std::string detail = {}) {
  return PropertyCheck{std::move(property), std::move(check), worst_z <= kSigmas, worst_z, kSigmas,
                    cases, std::move(detail)};
}

// ---------------------------------------------------------------------------
// Exhaustive battery

void exhaustive_g_mean(PropertyReport& rep) {
  double worst = 0.0, worst_same = 0.0;
  long long cases = 0, cases_same = 0;
  int worst_m = 2;
  for (int m : {2, 3, 4, 5, 8, 9}) {
    for (double p : {0.0, 0.25, 0.5, 0.7, 1.0}) {
      worst = std::max(worst, std::abs(expected_g(m, p) - p));
      ++cases;
    }
    // x = y: every entry is the same arm, so o = x on every index.
    const PreferenceMatrix P = validate(2, {0.5, 0.5, 0.5, 0.5});
    const std::vector<double> q{1.0, 0.0};
    double eg = 0.0;
    enumerate_rounds(q, P, m, [&](const RoundTrace& tr, double w) { eg += w * tr.g; });
    if (std::abs(eg - 0.5) > worst_same) {
      worst_same = std::abs(eg - 0.5);
      worst_m = m;
    }
    ++cases_same;
  }
  rep.checks.push_back(
      exact_check("g mean", "E[g] = P(x,y), x != y, m in {2,3,4,5,8,9}", worst, cases));
  rep.checks.push_back(exact_check("g mean", "E[g] = P(x,x) = 1/2 when x = y", worst_same,
                                   cases_same,
                                   "worst m=" + std::to_string(worst_m) + ": E[g] = g(m, win)"));
}

void exhaustive_estimates(PropertyReport& rep, Rng& rng) {
  double worst2 = 0.0, worst5 = 0.0, worst6 = -std::numeric_limits<double>::infinity();
  double worst_offset = 0.0;  // distance of the bias from (g(m, win) - 1/2) / K
  long long cases = 0;
  for (int inst = 0; inst < 60; ++inst) {
    const int K = 2 + static_cast<int>(rng.below(4));
    const int m = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(5, K) - 1)));
    const double gamma = rng.uniform(0.05, 1.0);
    const std::vector<double> q = random_floored_q(K, gamma, rng);
    const PreferenceMatrix P = random_matrix(K, rng);
    const auto rows = rows_of(P);
    const std::vector<double> s = shifted_borda_scores(P).values;

    const std::vector<double> es = expected_shat(q, rows, m, gamma);
    double qs = 0.0, eq = 0.0;
    for (int i = 0; i < K; ++i) {
      worst2 = std::max(worst2, std::abs(es[i] - s[i]));
      worst_offset = std::max(
          worst_offset, std::abs(es[i] - s[i] - (g_transform(m, true) - 0.5) / K));
      qs += q[i] * s[i];
      eq += q[i] * es[i];
    }
    worst5 = std::max(worst5, std::abs(eq - qs));
    const double sq = expected_weighted_shat_sq(q, rows, m, gamma);
    const double bound = g_bound(m) * g_bound(m) * K / gamma;
    worst6 = std::max(worst6, sq - bound);
    ++cases;
  }
  rep.checks.push_back(exact_check("estimate mean", "E[shat(i)] = s(i), K<=5, m<=5", worst2, cases,
                                   "E[shat(i)] - s(i) differs from (g(m,win) - 1/2)/K by at most " +
                                       fmt(worst_offset)));
  rep.checks.push_back(exact_check("weighted estimate mean", "E[q^T shat] = sum_i q(i) s(i)", worst5, cases));
  rep.checks.push_back(bound_check("second moment",
                                   "E[sum_i q shat^2] <= (3m+1)^2/(4(m+1)^2) K/gamma",
                                   std::max(0.0, worst6), cases,
                                   "largest E - bound = " + fmt(worst6)));
}

void exhaustive_g_magnitude(PropertyReport& rep) {
  double formula_dev = 0.0, excess = 0.0, abs_excess = 0.0;
  long long cases = 0;
  for (int m = 2; m <= 64; ++m) {
    const double win = g_transform(m, true);
    const double lose = g_transform(m, false);
    const double closed = (m % 2 == 1) ? (3.0 * m + 1.0) / (2.0 * m + 2.0)
                                       : (3.0 * m - 2.0) / (2.0 * m);
    formula_dev = std::max(formula_dev, std::abs(win - closed));
    excess = std::max(excess, std::max(win, lose) - g_bound(m));
    abs_excess = std::max(abs_excess, std::max(std::abs(win), std::abs(lose)) - g_bound(m));
    ++cases;
  }
  rep.checks.push_back(exact_check("g magnitude", "max g matches the odd/even closed forms, m=2..64",
                                   formula_dev, cases));
  rep.checks.push_back(bound_check("g magnitude", "g <= (3m+1)/(2m+2), m=2..64", std::max(0.0, excess),
                                   cases, "largest g - bound = " + fmt(excess)));
  rep.checks.push_back(bound_check("g magnitude", "|g| <= (3m+1)/(2m+2), m=2..64",
                                   std::max(0.0, abs_excess), cases,
                                   "largest |g| - bound = " + fmt(abs_excess)));
}

void exhaustive_step_range(PropertyReport& rep) {
  double upper_excess = 0.0, lower_excess = 0.0;
  long long cases = 0;
  std::string failing;
  for (int K = 2; K <= 5; ++K) {
    for (int m = 2; m <= std::min(5, K); ++m) {
      const MidexParams p = default_params(K, 10000, MSchedule(m));
      const double qmin = p.gamma / K;
      const double qmax = 1.0 - (K - 1) * qmin;
      for (double qx : {qmin, qmax}) {
        for (double qy : {qmin, qmax}) {
          for (bool win : {true, false}) {
            const double v = p.eta * g_transform(m, win) / (K * qx * qy);
            upper_excess = std::max(upper_excess, v - 1.0);
            if (v < 0.0 && -v > lower_excess) {
              lower_excess = -v;
              failing = "K=" + std::to_string(K) + " m=" + std::to_string(m) +
                        " losing round gives eta*shat = " + fmt(v);
            }
            ++cases;
          }
        }
      }
    }
  }
  rep.checks.push_back(bound_check("step range", "eta*shat <= 1 under default params, q at the floor",
                                   upper_excess, cases));
  rep.checks.push_back(bound_check("step range", "eta*shat >= 0 under default params", lower_excess,
                                   cases, failing.empty() ? "" : "worst: " + failing));
}

void exhaustive_marginals(PropertyReport& rep, Rng& rng) {
  double worst = 0.0;
  long long cases = 0;
  auto run = [&](const std::vector<double>& q, int m) {
    const auto marg = position_marginals(q, m);
    for (const auto& row : marg)
      for (std::size_t i = 0; i < q.size(); ++i) worst = std::max(worst, std::abs(row[i] - q[i]));
    ++cases;
  };
  run({0.2, 0.3, 0.5}, 4);
  for (int K = 2; K <= 5; ++K) {
    for (int m = 2; m <= 6; ++m) {
      for (int rep_i = 0; rep_i < 5; ++rep_i) run(random_floored_q(K, 0.1, rng), m);
    }
  }
  rep.checks.push_back(exact_check("position marginal", "Pr(A(j) = i) = q(i), K<=5, m<=6", worst, cases));
}

void exhaustive_pair_average(PropertyReport& rep, Rng& rng) {
  double worst = 0.0;
  long long cases = 0;
  for (int c = 0; c < 10000; ++c) {
    const int m = 2 + static_cast<int>(rng.below(7));
    const int K = 2 + static_cast<int>(rng.below(9));
    std::vector<double> b(static_cast<std::size_t>(K));
    for (double& v : b) v = rng.uniform();
    std::vector<Arm> items(static_cast<std::size_t>(m));
    for (Arm& a : items) a = static_cast<Arm>(rng.below(static_cast<std::uint64_t>(K)));
    double pair_sum = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) pair_sum += 0.5 * (b[items[i]] + b[items[j]]);
    const double pair_avg = pair_sum / (static_cast<double>(m) * (m - 1));
    double multi = 0.0;
    for (Arm a : items) multi += b[a];
    multi /= m;
    worst = std::max(worst, std::abs(pair_avg - multi));
    ++cases;
  }
  rep.checks.push_back(exact_check(
      "reduction", "ordered-pair average of (b(A(i))+b(A(j)))/2 = (1/m) sum b(A(i)), m<=8", worst,
      cases));
}

// ---------------------------------------------------------------------------
// Sampled battery

void sampled_g_mean(PropertyReport& rep, std::uint64_t seed) {
  double worst = 0.0;
  long long cases = 0;
  for (int m : {16, 33}) {
    for (double p : {0.2, 0.7}) {
      const PreferenceMatrix P = validate(2, {0.5, p, 1.0 - p, 0.5});
      Moments mo;
      for (std::uint64_t r = 0; r < 200000; ++r) {
        Rng rng = Rng::stream(seed + static_cast<std::uint64_t>(m), r, StreamRole::Select);
        RoundTrace tr;
        tr.x = 0;
        tr.y = 1;
        tr.x_major = rng.bernoulli(0.5);
        tr.A = build_multiset(0, 1, m, tr.x_major);
        mo.add(resolve_feedback(tr, sample_winner(tr.A, P, rng)).g);
      }
      worst = std::max(worst, z_score(mo, p));
      ++cases;
    }
  }
  rep.checks.push_back(sampled_check("g mean", "mean g within 3 SE of P(x,y), m in {16,33}",
                                     worst, cases, "worst |z| = " + fmt(worst)));
}

void sampled_estimates(PropertyReport& rep, std::uint64_t seed) {
  Rng setup(seed);
  const int K = 8, m = 6;
  const double gamma = 0.3;
  const std::vector<double> q = random_floored_q(K, gamma, setup);
  const PreferenceMatrix P = random_matrix(K, setup);
  const std::vector<double> s = shifted_borda_scores(P).values;
  MidexState state = MidexState::initial(K);
  state.q = q;
  const MidexParams params{K, 1, MSchedule(m), 1e-3, gamma, m_prime(m)};

  std::vector<Moments> per_arm(K);
  Moments weighted;
  for (std::uint64_t r = 0; r < 1000000; ++r) {
    Rng sel = Rng::stream(seed, r, StreamRole::Select);
    Rng env = Rng::stream(seed, r, StreamRole::Environment);
    RoundTrace tr = select(state, params, sel);
    tr = resolve_feedback(std::move(tr), sample_winner(tr.A, P, env));
    const SparseScore sh = estimate_scores(tr, q, gamma);
    for (int i = 0; i < K; ++i) per_arm[i].add(i == sh.arm ? sh.value : 0.0);
    weighted.add(q[sh.arm] * sh.value);
  }
  double worst = 0.0, qs = 0.0;
  for (int i = 0; i < K; ++i) {
    worst = std::max(worst, z_score(per_arm[i], s[i]));
    qs += q[i] * s[i];
  }
  rep.checks.push_back(sampled_check("estimate mean", "mean shat(i) within 3 SE of s(i), K=8, m=6",
                                     worst, 1000000, "worst |z| = " + fmt(worst)));
  const double z5 = z_score(weighted, qs);
  rep.checks.push_back(sampled_check("weighted estimate mean", "mean q^T shat within 3 SE of q^T s, K=8, m=6",
                                     z5, 1000000, "|z| = " + fmt(z5)));
}

// Full MiDEX runs under default parameters: per-round g, eta*shat and the
// running average of sum_i q shat^2.
void sampled_run_bounds(PropertyReport& rep, std::uint64_t seed) {
  double g_excess = -1.0, upper_excess = -1.0, lower_worst = 0.0, l6_excess = -1.0;
  std::string lower_detail;
  long long rounds = 0;
  for (int m : {2, 3, 4, 5}) {
    RunConfig cfg;
    cfg.K = 10;
    cfg.T = 10000;
    cfg.m_schedule = MSchedule(m);
    cfg.adversary = SeededRandomSpec{10, seed};
    cfg.algo = Algorithm::Midex;
    const EpisodeResult ep = run_episode(cfg, replication_seed(seed, m));
    const RunDiagnostics& d = *ep.diagnostics;
    g_excess = std::max(g_excess, d.max_abs_g - d.max_abs_g_bound);
    upper_excess = std::max(upper_excess, d.max_eta_shat - 1.0);
    if (d.min_eta_shat < lower_worst) {
      lower_worst = d.min_eta_shat;
      lower_detail = "m=" + std::to_string(m) + " min eta*shat = " + fmt(d.min_eta_shat);
    }
    l6_excess = std::max(l6_excess, (d.sum_q_shat_sq - d.sum_q_shat_sq_bound) / d.rounds);
    rounds += d.rounds;
  }
  rep.checks.push_back(bound_check("g magnitude", "|g| <= (3m+1)/(2m+2) on every round, K=10, T=1e4",
                                   std::max(0.0, g_excess), rounds));
  rep.checks.push_back(bound_check("step range", "eta*shat <= 1 on every round, K=10, T=1e4",
                                   std::max(0.0, upper_excess), rounds));
  rep.checks.push_back(bound_check("step range", "eta*shat >= 0 on every round, K=10, T=1e4",
                                   -lower_worst, rounds, lower_detail));
  rep.checks.push_back(bound_check("second moment", "run-average sum_i q shat^2 <= bound, K=10, T=1e4",
                                   std::max(0.0, l6_excess), rounds));
}

void sampled_marginals(PropertyReport& rep, std::uint64_t seed) {
  Rng setup(seed ^ 0x7);
  const int K = 6, m = 5;
  const std::vector<double> q = random_floored_q(K, 0.2, setup);
  MidexState state = MidexState::initial(K);
  state.q = q;
  const MidexParams params{K, 1, MSchedule(m), 1e-3, 0.2, m_prime(m)};
  const long long N = 1000000;
  std::vector<std::vector<long long>> counts(m, std::vector<long long>(K, 0));
  for (long long r = 0; r < N; ++r) {
    Rng sel = Rng::stream(seed, static_cast<std::uint64_t>(r), StreamRole::Select);
    const RoundTrace tr = select(state, params, sel);
    for (int j = 0; j < m; ++j) ++counts[j][tr.A[j]];
  }
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < K; ++i) {
      const double freq = static_cast<double>(counts[j][i]) / N;
      const double se = std::sqrt(q[i] * (1.0 - q[i]) / N);
      worst = std::max(worst, std::abs(freq - q[i]) / se);
    }
  }
  rep.checks.push_back(sampled_check("position marginal", "position frequencies within 3 SE of q, K=6, m=5",
                                     worst, N, "worst |z| = " + fmt(worst)));
}

void sampled_reduction(PropertyReport& rep, std::uint64_t seed) {
  Rng setup(seed ^ 0x8);
  RunConfig cfg;
  cfg.K = 5;
  cfg.T = 1000;
  cfg.m_schedule = MSchedule(3);
  cfg.adversary = ConstantSpec{random_matrix(5, setup, 0.05, 0.95), std::nullopt};
  cfg.algo = Algorithm::Reduced;
  cfg.reduced_inner = Algorithm::Midex;
  Moments diff;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const EpisodeResult ep = run_episode(cfg, replication_seed(seed, r));
    diff.add(ep.ledger.final_regret() - ep.multi->final_regret());
  }
  const double z = z_score(diff, 0.0);
  rep.checks.push_back(sampled_check(
      "reduction", "mean (dueling - multi-dueling) regret within 3 SE of 0, K=5, 200 reps", z, reps,
      "mean diff = " + fmt(diff.mean) + ", SE = " + fmt(diff.std_error())));
}

}  // namespace

bool PropertyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

double expected_g(int m, double p_xy) {
  const PreferenceMatrix P = validate(2, {0.5, p_xy, 1.0 - p_xy, 0.5});
  RoundTrace tr;
  tr.x = 0;
  tr.y = 1;
  double e = 0.0;
  for (bool x_major : {true, false}) {
    tr.x_major = x_major;
    tr.A = build_multiset(0, 1, m, x_major);
    const std::vector<double> W = winner_distribution(tr.A, P);
    for (std::size_t idx = 0; idx < W.size(); ++idx) {
      e += 0.5 * W[idx] * resolve_feedback(tr, idx).g;
    }
  }
  return e;
}

std::vector<double> expected_shat(const std::vector<double>& q,
                                  const std::vector<std::vector<double>>& Prows, int m,
                                  double gamma) {
  const PreferenceMatrix P = validate(Prows);
  std::vector<double> e(q.size(), 0.0);
  enumerate_rounds(q, P, m, [&](const RoundTrace& tr, double w) {
    const SparseScore sh = estimate_scores(tr, q, gamma);
    e[sh.arm] += w * sh.value;
  });
  return e;
}

double expected_weighted_shat_sq(const std::vector<double>& q,
                                 const std::vector<std::vector<double>>& Prows, int m,
                                 double gamma) {
  const PreferenceMatrix P = validate(Prows);
  double e = 0.0;
  enumerate_rounds(q, P, m, [&](const RoundTrace& tr, double w) {
    const SparseScore sh = estimate_scores(tr, q, gamma);
    e += w * q[sh.arm] * sh.value * sh.value;
  });
  return e;
}

std::vector<std::vector<double>> position_marginals(const std::vector<double>& q, int m) {
  const int K = static_cast<int>(q.size());
  std::vector<std::vector<double>> marg(m, std::vector<double>(q.size(), 0.0));
  for (Arm x = 0; x < K; ++x) {
    for (Arm y = 0; y < K; ++y) {
      for (bool x_major : {true, false}) {
        const ArmMultiset A = build_multiset(x, y, m, x_major);
        for (int j = 0; j < m; ++j) marg[j][A[j]] += 0.5 * q[x] * q[y];
      }
    }
  }
  return marg;
}

PropertyReport verify_properties(VerifyLevel level, unsigned long long seed) {
  PropertyReport rep;
  rep.level = level;
  if (level == VerifyLevel::Exhaustive) {
    Rng rng(seed);
    exhaustive_g_mean(rep);
    exhaustive_estimates(rep, rng);
    exhaustive_g_magnitude(rep);
    exhaustive_step_range(rep);
    exhaustive_marginals(rep, rng);
    exhaustive_pair_average(rep, rng);
  } else {
    sampled_g_mean(rep, seed);
    sampled_estimates(rep, seed);
    sampled_run_bounds(rep, seed);
    sampled_marginals(rep, seed);
    sampled_reduction(rep, seed);
  }
  return rep;
}

}  // namespace midex
