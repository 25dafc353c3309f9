// Command-line front end: run, sweep, reduce, verify, bound.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 verification
// failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "midex/config.hpp"
#include "midex/errors.hpp"
#include "midex/harness.hpp"
#include "midex/midex.hpp"
#include "midex/output.hpp"
#include "midex/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<std::string> out;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<int> threads;
  bool trace = false;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--seed", ov.seed, "master seed");
  cmd->add_option("--reps", ov.reps, "number of replications");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--eta", ov.eta, "learning rate override");
  cmd->add_option("--gamma", ov.gamma, "exploration mix override");
  cmd->add_option("--threads", ov.threads, "worker threads for replications");
  cmd->add_flag("--trace", ov.trace, "write trace.csv and q_snapshots.csv for replication 1");
}

midex::RunConfig load(const std::string& path, const Overrides& ov) {
  midex::RunConfig c = midex::parse_config(path);
  if (ov.seed) c.seed = *ov.seed;
  if (ov.reps) c.replications = *ov.reps;
  if (ov.out) c.output_dir = *ov.out;
  if (ov.eta) c.eta = *ov.eta;
  if (ov.gamma) c.gamma = *ov.gamma;
  if (ov.threads) c.threads = *ov.threads;
  if (ov.trace) c.write_trace = true;
  if (c.output_dir.empty()) {
    const char* env = std::getenv("MIDEX_OUT_DIR");
    c.output_dir = (env && *env) ? env : "out";
  }
  midex::validate_config(c);
  return c;
}

void print_run(const midex::AggregateResult& r, const midex::RunConfig& c, const std::string& dir) {
  std::printf("%s  K=%d T=%lld reps=%d  mean R_T=%.6g (std %.6g)  bound(8.13)=%.6g  ratio=%.4g\n",
              midex::algorithm_name(c.algo).c_str(), c.K, c.T, c.replications, r.mean_final,
              r.std_final, r.bound_simplified, r.ratio_to_bound);
  if (r.params) {
    std::printf("  eta=%.6g gamma=%.6g m'=%.6g\n", r.params->eta, r.params->gamma,
                r.params->m_prime);
  }
  std::printf("  wrote %s\n", dir.c_str());
}

int cmd_run(const std::string& path, const Overrides& ov, bool reduce) {
  midex::RunConfig c = load(path, ov);
  if (reduce && c.algo != midex::Algorithm::Reduced) {
    c.reduced_inner = c.algo;
    c.algo = midex::Algorithm::Reduced;
    midex::validate_config(c);
  }
  const midex::AggregateResult r = midex::run_replications(c);
  midex::emit_outputs(r, c, c.output_dir);
  print_run(r, c, c.output_dir);
  if (!r.final_multi_regret.empty()) {
    double md = 0.0;
    for (std::size_t i = 0; i < r.final_regret.size(); ++i) {
      md += r.final_regret[i] - r.final_multi_regret[i];
    }
    std::printf("  mean dueling - multi-dueling regret: %.6g\n",
                md / static_cast<double>(r.final_regret.size()));
  }
  return kExitOk;
}

int cmd_sweep(const std::string& path, const Overrides& ov) {
  const midex::RunConfig base = load(path, ov);
  const std::vector<int> Ks = base.sweep_K.empty() ? std::vector<int>{base.K} : base.sweep_K;
  const std::vector<long long> Ts =
      base.sweep_T.empty() ? std::vector<long long>{base.T} : base.sweep_T;

  std::string index = "K,T,mean_regret,std_regret,bound,bound_simplified,ratio\n";
  for (int K : Ks) {
    for (long long T : Ts) {
      midex::RunConfig c = base;
      c.K = K;
      c.T = T;
      c.sweep_K.clear();
      c.sweep_T.clear();
      try {
        c.adversary = midex::resize_adversary(base.adversary, K);
      } catch (const midex::BadSpec& e) {
        throw midex::ValidationError("sweep.K", e.what());
      }
      const std::string dir = (std::filesystem::path(base.output_dir) /
                               ("K" + std::to_string(K) + "_T" + std::to_string(T)))
                                  .string();
      c.output_dir = dir;
      const midex::AggregateResult r = midex::run_replications(c);
      midex::emit_outputs(r, c, dir);
      print_run(r, c, dir);
      index += std::to_string(K) + "," + std::to_string(T) + "," +
               midex::format_double(r.mean_final) + "," + midex::format_double(r.std_final) +
               "," + midex::format_double(r.bound) + "," +
               midex::format_double(r.bound_simplified) + "," +
               midex::format_double(r.ratio_to_bound) + "\n";
    }
  }
  std::filesystem::create_directories(base.output_dir);
  midex::write_text_file((std::filesystem::path(base.output_dir) / "sweep.csv").string(), index);
  return kExitOk;
}

int cmd_verify(const std::string& level, const std::optional<std::string>& out,
               unsigned long long seed) {
  std::vector<midex::VerifyLevel> levels;
  if (level == "exhaustive" || level == "all") levels.push_back(midex::VerifyLevel::Exhaustive);
  if (level == "sampled" || level == "all") levels.push_back(midex::VerifyLevel::Sampled);

  bool ok = true;
  nlohmann::json reports = nlohmann::json::array();
  for (auto lv : levels) {
    const midex::PropertyReport rep = midex::verify_properties(lv, seed);
    std::printf("== %s ==\n", lv == midex::VerifyLevel::Exhaustive ? "exhaustive" : "sampled");
    for (const auto& c : rep.checks) {
      std::printf("[%s] %-22s %-70s dev=%.3g tol=%.3g n=%lld%s%s\n", c.passed ? "PASS" : "FAIL",
                  c.property.c_str(), c.check.c_str(), c.deviation, c.tolerance, c.cases,
                  c.detail.empty() ? "" : "  ", c.detail.c_str());
    }
    ok = ok && rep.all_passed();
    reports.push_back(midex::report_to_json(rep));
  }
  if (out) {
    std::filesystem::create_directories(*out);
    midex::write_text_file((std::filesystem::path(*out) / "verify.json").string(),
                           midex::dump_json(reports));
  }
  return ok ? kExitOk : kExitVerify;
}

int cmd_bound(int K, long long T, const std::vector<int>& ms) {
  const midex::MSchedule schedule =
      ms.size() == 1 ? midex::MSchedule(ms.front()) : midex::MSchedule(ms);
  const double mp = midex::m_prime(schedule);
  std::printf("%-28s %d\n", "K", K);
  std::printf("%-28s %lld\n", "T", T);
  std::printf("%-28s %.10g\n", "m'", mp);
  std::printf("%-28s %.10g\n", "bound 3.78 (m')^2/3 ...", midex::regret_bound(K, T, mp));
  std::printf("%-28s %.10g\n", "bound 8.13 ...", midex::simplified_bound(K, T));
  const midex::MidexParams p = midex::default_params(K, T, schedule);
  std::printf("%-28s %.10g\n", "eta", p.eta);
  std::printf("%-28s %.10g\n", "gamma", p.gamma);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MiDEX multi-dueling bandit simulator"};
  app.require_subcommand(1);

  Overrides run_ov, sweep_ov, reduce_ov;
  std::string run_cfg, sweep_cfg, reduce_cfg;

  auto* run = app.add_subcommand("run", "run replications of one configuration");
  run->add_option("config", run_cfg, "config file")->required();
  add_override_flags(run, run_ov);

  auto* sweep = app.add_subcommand("sweep", "grid over sweep.K x sweep.T, one summary per cell");
  sweep->add_option("config", sweep_cfg, "config file")->required();
  add_override_flags(sweep, sweep_ov);

  auto* reduce = app.add_subcommand("reduce", "play the configured learner through the dueling reduction");
  reduce->add_option("config", reduce_cfg, "config file")->required();
  add_override_flags(reduce, reduce_ov);

  std::string level = "exhaustive";
  std::optional<std::string> verify_out;
  unsigned long long verify_seed = 20240601ULL;
  auto* verify = app.add_subcommand("verify", "estimator property verification battery");
  verify->add_option("--level", level, "exhaustive | sampled | all")
      ->check(CLI::IsMember({"exhaustive", "sampled", "all"}));
  verify->add_option("--out", verify_out, "directory for verify.json");
  verify->add_option("--seed", verify_seed, "seed for random instances");

  int bK = 0;
  long long bT = 0;
  std::vector<int> bm;
  auto* bound = app.add_subcommand("bound", "regret bound and default parameters");
  bound->add_option("--K", bK, "number of arms")->required()->check(CLI::Range(2, 1 << 30));
  bound->add_option("--T", bT, "horizon")->required()->check(CLI::PositiveNumber);
  bound->add_option("--m", bm, "m, or a comma-separated schedule")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_cfg, run_ov, false);
    if (*sweep) return cmd_sweep(sweep_cfg, sweep_ov);
    if (*reduce) return cmd_run(reduce_cfg, reduce_ov, true);
    if (*verify) return cmd_verify(level, verify_out, verify_seed);
    if (*bound) return cmd_bound(bK, bT, bm);
  } catch (const midex::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
