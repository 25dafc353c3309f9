// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1 for ctest).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "midex/adversaries.hpp"
#include "midex/harness.hpp"
#include "midex/midex.hpp"
#include "midex/output.hpp"
#include "midex/verify.hpp"

using namespace midex;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

int g_failed = 0;

void criterion(int id, const std::string& title, double limit_s,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out = body();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= limit_s;
  const bool ok = out.passed && in_time;
  if (!ok) ++g_failed;
  std::printf("[%s] C%-2d %s: %s (%.2f s, limit %.0f s)%s\n", ok ? "PASS" : "FAIL", id,
              title.c_str(), out.detail.c_str(), secs, limit_s, in_time ? "" : " TIMEOUT");
  std::fflush(stdout);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<double> random_q(int K, double gamma, Rng& rng) {
  std::vector<double> w(K);
  double sum = 0.0;
  for (double& x : w) sum += (x = rng.uniform() + 1e-3);
  for (double& x : w) x = (1.0 - gamma) * x / sum + gamma / K;
  return w;
}

std::vector<std::vector<double>> random_rows(int K, Rng& rng) {
  std::vector<std::vector<double>> P(K, std::vector<double>(K, 0.5));
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      P[i][j] = rng.uniform();
      P[j][i] = 1.0 - P[i][j];
    }
  return P;
}

RunConfig midex_config(int K, long long T, int m, AdversarySpec adv, int reps,
                       std::uint64_t seed) {
  RunConfig c;
  c.K = K;
  c.T = T;
  c.m_schedule = MSchedule(m);
  c.adversary = std::move(adv);
  c.replications = reps;
  c.seed = seed;
  c.threads = workers();
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "expected g equals P(x,y)", 1, [] {
    double worst = 0.0;
    int cases = 0;
    for (int m : {2, 3, 4, 5, 8, 9})
      for (double p : {0.0, 0.25, 0.5, 0.7, 1.0}) {
        worst = std::max(worst, std::abs(expected_g(m, p) - p));
        ++cases;
      }
    return Outcome{worst <= 1e-12, std::to_string(cases) + " cases, worst |E[g] - P(x,y)| = " +
                                       fmt("%.3g", worst)};
  });

  criterion(2, "score estimate is unbiased", 10, [] {
    Rng rng(2);
    double worst = 0.0;
    int cases = 0;
    for (; cases < 60; ++cases) {
      const int K = 2 + static_cast<int>(rng.below(4));
      const int m = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(K, 5) - 1)));
      const double gamma = rng.uniform(0.05, 1.0);
      const auto q = random_q(K, gamma, rng);
      const auto P = random_rows(K, rng);
      const auto e = expected_shat(q, P, m, gamma);
      const auto s = shifted_borda_scores(validate(P)).values;
      for (int i = 0; i < K; ++i) worst = std::max(worst, std::abs(e[i] - s[i]));
    }
    return Outcome{worst <= 1e-12, std::to_string(cases) + " instances, worst |E[shat(i)] - s(i)| = " +
                                       fmt("%.3g", worst)};
  });

  criterion(3, "position marginals equal q", 5, [] {
    Rng rng(3);
    double worst = 0.0;
    int cases = 0;
    for (int K = 2; K <= 5; ++K)
      for (int m = 2; m <= 6; ++m)
        for (int r = 0; r < 5; ++r, ++cases) {
          const auto q = random_q(K, 0.2, rng);
          const auto marg = position_marginals(q, m);
          for (const auto& row : marg)
            for (int i = 0; i < K; ++i) worst = std::max(worst, std::abs(row[i] - q[i]));
        }
    return Outcome{worst <= 1e-12, std::to_string(cases) + " (K, m, q) cases, worst |Pr(A(j)=i) - q(i)| = " +
                                       fmt("%.3g", worst)};
  });

  criterion(4, "reduction preserves regret", 120, [] {
    Rng rng(4);
    double worst = 0.0;
    for (int c = 0; c < 10000; ++c) {
      const int K = 2 + static_cast<int>(rng.below(9));
      const int m = 2 + static_cast<int>(rng.below(7));
      std::vector<double> b(K);
      for (double& x : b) x = rng.uniform();
      std::vector<Arm> A(m);
      for (Arm& a : A) a = static_cast<Arm>(rng.below(K));
      double pairs = 0.0, mean = 0.0;
      for (int i = 0; i < m; ++i) {
        mean += b[A[i]] / m;
        for (int j = 0; j < m; ++j)
          if (i != j) pairs += (b[A[i]] + b[A[j]]) / 2.0 / (m * (m - 1.0));
      }
      worst = std::max(worst, std::abs(pairs - mean));
    }
    RunConfig c = midex_config(5, 1000, 3, ConstantSpec{borda_gap_matrix(5, 0.2), 0.2}, 200, 44);
    c.algo = Algorithm::Reduced;
    const AggregateResult agg = run_replications(c);
    std::vector<double> diff;
    for (int r = 0; r < c.replications; ++r) {
      diff.push_back(agg.final_regret[r] - agg.final_multi_regret[r]);
    }
    const auto [md, sd] = mean_std(diff);
    const double se = sd / std::sqrt(static_cast<double>(diff.size()));
    const double z = se > 0.0 ? std::abs(md) / se : (md == 0.0 ? 0.0 : INFINITY);
    return Outcome{worst <= 1e-12 && z <= 3.0,
                   "(a) 10^4 cases, worst " + fmt("%.3g", worst) + "; (b) 200 reps, mean dueling " +
                       fmt("%.2f", mean_std(agg.final_regret).first) + " vs multi " +
                       fmt("%.2f", mean_std(agg.final_multi_regret).first) + ", |z| = " +
                       fmt("%.2f", z)};
  });

  criterion(5, "per-round bounds in full runs", 60, [] {
    bool g_ok = true, upper_ok = true, lower_ok = true, var_ok = true;
    std::string detail;
    for (int m = 2; m <= 5; ++m) {
      RunConfig c = midex_config(10, 10000, m, SeededRandomSpec{10, 55}, 1, 500 + m);
      const EpisodeResult ep = run_episode(c, c.seed);
      const RunDiagnostics& d = *ep.diagnostics;
      g_ok = g_ok && d.max_abs_g <= d.max_abs_g_bound;
      upper_ok = upper_ok && d.max_eta_shat <= 1.0;
      lower_ok = lower_ok && d.min_eta_shat >= 0.0;
      var_ok = var_ok && d.sum_q_shat_sq <= d.sum_q_shat_sq_bound;
      detail += " m=" + std::to_string(m) + ": eta*shat in [" + fmt("%.3g", d.min_eta_shat) + ", " +
                fmt("%.3g", d.max_eta_shat) + "];";
    }
    detail = std::string("|g| bound ") + (g_ok ? "ok" : "violated") + ", eta*shat <= 1 " +
             (upper_ok ? "ok" : "violated") + ", eta*shat >= 0 " + (lower_ok ? "ok" : "violated") +
             ", variance bound " + (var_ok ? "ok" : "violated") + ";" + detail;
    return Outcome{g_ok && upper_ok && lower_ok && var_ok, detail};
  });

  // Mean final regret on the gap instance, reused by C6-C8.
  std::vector<long long> horizons{1000, 10000, 100000};
  std::vector<double> gap_means;
  const AdversarySpec gap = ConstantSpec{borda_gap_matrix(10, 0.2), 0.2};

  criterion(6, "regret bound, K=10 m=4, 20 reps", 600, [&] {
    bool ok = true;
    std::string detail;
    for (const auto& [name, adv] :
         std::vector<std::pair<std::string, AdversarySpec>>{{"seeded_random", SeededRandomSpec{10, 66}},
                                                            {"gap 0.2", gap}}) {
      detail += name + ":";
      for (long long T : horizons) {
        const AggregateResult agg = run_replications(midex_config(10, T, 4, adv, 20, 600 + T));
        if (name == "gap 0.2") gap_means.push_back(agg.mean_final);
        ok = ok && agg.mean_final <= agg.bound_simplified;
        detail += " T=" + std::to_string(T) + " " + fmt("%.1f", agg.mean_final) + "/" +
                  fmt("%.0f", agg.bound_simplified);
      }
      detail += "; ";
    }
    return Outcome{ok, "mean R_T / bound: " + detail};
  });

  criterion(7, "sublinear scaling on the gap instance", 1800, [&] {
    std::vector<long long> Ts = horizons;
    std::vector<double> means = gap_means;
    const AggregateResult big = run_replications(midex_config(10, 1000000, 4, gap, 20, 600 + 1000000));
    Ts.push_back(1000000);
    means.push_back(big.mean_final);
    gap_means.push_back(big.mean_final);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(Ts.size());
    for (std::size_t i = 0; i < Ts.size(); ++i) {
      const double x = std::log(static_cast<double>(Ts[i]));
      const double y = std::log(means[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::string detail = "slope " + fmt("%.3f", slope) + " over T = 1e3..1e6, means";
    for (double v : means) detail += " " + fmt("%.1f", v);
    return Outcome{slope <= 0.85, detail};
  });

  criterion(8, "MiDEX beats the uniform player", 600, [&] {
    // Decided at the longest horizon; the ratio at each horizon is reported.
    std::vector<long long> Ts = horizons;
    Ts.push_back(1000000);
    std::string detail = "MiDEX / uniform mean R_T:";
    double last = 0.0;
    for (std::size_t i = 0; i < Ts.size() && i < gap_means.size(); ++i) {
      RunConfig c = midex_config(10, Ts[i], 4, gap, 20, 800 + Ts[i]);
      c.algo = Algorithm::Uniform;
      const double uni = run_replications(c).mean_final;
      last = gap_means[i] / uni;
      detail += " T=" + std::to_string(Ts[i]) + " " + fmt("%.1f", gap_means[i]) + "/" +
                fmt("%.1f", uni) + " (" + fmt("%.3f", last) + ")";
    }
    return Outcome{gap_means.size() == Ts.size() && last < 0.5, detail};
  });

  criterion(9, "determinism of emitted files", 120, [] {
    const auto base = std::filesystem::temp_directory_path() / "midex_acceptance_c9";
    std::filesystem::remove_all(base);
    RunConfig c = midex_config(8, 20000, 3, SeededRandomSpec{8, 9, 0.05, 100}, 6, 99);
    c.write_trace = true;
    c.threads = 1;
    emit_outputs(run_replications(c), c, (base / "a").string());
    emit_outputs(run_replications(c), c, (base / "b").string());
    c.threads = 4;
    emit_outputs(run_replications(c), c, (base / "c").string());
    bool ok = true;
    int files = 0;
    for (const char* f : {"trajectory.csv", "summary.json", "trace.csv", "q_snapshots.csv"}) {
      const std::string a = slurp(base / "a" / f);
      ok = ok && !a.empty() && a == slurp(base / "b" / f) && a == slurp(base / "c" / f);
      ++files;
    }
    return Outcome{ok, std::to_string(files) + " files compared across two sequential runs and a 4-worker run"};
  });

  criterion(10, "score and regret identities", 120, [] {
    Rng rng(10);
    double worst_affine = 0.0, worst_regret = 0.0;
    int argmax_mismatch = 0;
    for (int n = 0; n < 1000; ++n) {
      const int K = 2 + static_cast<int>(rng.below(9));
      const PreferenceMatrix P = validate(random_rows(K, rng));
      const auto b = borda_scores(P).values;
      const auto s = shifted_borda_scores(P).values;
      for (int i = 0; i < K; ++i) {
        worst_affine = std::max(worst_affine, std::abs(s[i] - ((K - 1.0) / K * b[i] + 0.5 / K)));
      }
      const long long T = 1 + static_cast<long long>(rng.below(50));
      const AdversarySpec adv = SeededRandomSpec{K, rng.next_u64()};
      const PreferenceSequence seq = build_sequence(adv, T);
      if (benchmark(seq).ties != shifted_benchmark(seq).ties) ++argmax_mismatch;
      RunConfig c = midex_config(K, T, 2, adv, 1, rng.next_u64());
      c.algo = Algorithm::Uniform;
      const EpisodeResult ep = run_episode(c, c.seed);
      for (long long t = 0; t < T; ++t) {
        const double r = ep.ledger.cum_regret()[t];
        const double rs = ep.ledger.cum_shifted_regret()[t];
        worst_regret = std::max(worst_regret, std::abs(r - K / (K - 1.0) * rs));
      }
    }
    const bool ok = worst_affine <= 1e-9 && worst_regret <= 1e-9 && argmax_mismatch == 0;
    return Outcome{ok, "1000 instances: affine map " + fmt("%.3g", worst_affine) + ", argmax mismatches " +
                           std::to_string(argmax_mismatch) + ", regret scaling " +
                           fmt("%.3g", worst_regret)};
  });

  std::printf("%d of 10 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
