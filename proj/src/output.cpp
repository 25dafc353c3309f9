#include "midex/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "midex/config.hpp"
#include "midex/errors.hpp"

namespace midex {
namespace {

using nlohmann::json;

void dump_value(const json& j, int indent, int depth, std::string& out) {
  const auto pad = [&](int d) {
    if (indent > 0) out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        pad(depth + 1);
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_value(it.value(), indent, depth + 1, out);
      }
      out += nl;
      pad(depth);
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) {
        return e.is_structured();
      });
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) {
          out += nl;
          pad(depth + 1);
        }
        first = false;
        dump_value(e, indent, depth + 1, out);
      }
      if (!flat) {
        out += nl;
        pad(depth);
      }
      out += "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) row += ',';
    first = false;
    row += c;
  }
  row += '\n';
  return row;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_value(j, indent, 0, out);
  out += '\n';
  return out;
}

json report_to_json(const PropertyReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"property", c.property},
                      {"check", c.check},
                      {"passed", c.passed},
                      {"deviation", c.deviation},
                      {"tolerance", c.tolerance},
                      {"cases", c.cases},
                      {"detail", c.detail}});
  }
  // One entry per property; a property passes when all of its checks pass.
  json properties = json::object();
  for (const auto& c : report.checks) {
    if (!properties.contains(c.property)) properties[c.property] = true;
    properties[c.property] = properties[c.property].get<bool>() && c.passed;
  }
  return {{"level", report.level == VerifyLevel::Exhaustive ? "exhaustive" : "sampled"},
          {"all_passed", report.all_passed()},
          {"properties", properties},
          {"checks", checks}};
}

json summary_json(const AggregateResult& r, const RunConfig& config,
                  const std::optional<PropertyReport>& report) {
  json cfg = config_to_json(config);
  // Execution settings that cannot change results.
  cfg.erase("threads");
  cfg.erase("output_dir");

  json s;
  s["config"] = cfg;
  s["seeds"] = r.seeds;
  s["final_regret"] = r.final_regret;
  s["final_shifted_regret"] = r.final_shifted_regret;
  if (!r.final_multi_regret.empty()) {
    s["final_multi_regret"] = r.final_multi_regret;
    double md = 0.0;
    for (std::size_t i = 0; i < r.final_regret.size(); ++i) {
      md += r.final_regret[i] - r.final_multi_regret[i];
    }
    s["mean_dueling_minus_multi"] = md / static_cast<double>(r.final_regret.size());
  }
  s["mean_final_regret"] = r.mean_final;
  s["std_final_regret"] = r.std_final;
  s["bound"] = {{"full", r.bound},
                {"simplified", r.bound_simplified},
                {"ratio_mean_to_simplified", r.ratio_to_bound}};
  if (r.params) {
    s["params"] = {{"eta", r.params->eta},
                   {"gamma", r.params->gamma},
                   {"m_prime", r.params->m_prime}};
  }
  s["trajectory_std_regret"] = r.std_regret;
  if (!r.diagnostics.empty()) {
    json d = json::array();
    for (const auto& x : r.diagnostics) {
      d.push_back({{"rounds", x.rounds},
                   {"max_abs_g", x.max_abs_g},
                   {"max_abs_g_bound", x.max_abs_g_bound},
                   {"min_eta_shat", x.min_eta_shat},
                   {"max_eta_shat", x.max_eta_shat},
                   {"mean_q_shat_sq", x.sum_q_shat_sq / static_cast<double>(x.rounds)},
                   {"mean_q_shat_sq_bound", x.sum_q_shat_sq_bound / static_cast<double>(x.rounds)},
                   {"min_q_over_floor", x.min_q_over_floor}});
    }
    s["diagnostics"] = d;
  }
  if (report) s["verification"] = report_to_json(*report);
  return s;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("write to '" + path + "' failed");
}

void emit_outputs(const AggregateResult& r, const RunConfig& config, const std::string& dir,
                  const std::optional<PropertyReport>& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);

  std::string traj = "t,regret_cum,shifted_regret_cum,bench_score,played_avg_score\n";
  for (std::size_t k = 0; k < r.snapshot_rounds.size(); ++k) {
    traj += csv_row({std::to_string(r.snapshot_rounds[k]), format_double(r.mean_regret[k]),
                     format_double(r.mean_shifted_regret[k]), format_double(r.mean_bench_score[k]),
                     format_double(r.mean_played_score[k])});
  }
  write_text_file((base / "trajectory.csv").string(), traj);
  write_text_file((base / "summary.json").string(), dump_json(summary_json(r, config, report)));

  if (!r.trace.empty()) {
    std::string tr = "t,x,y,split,winner_index,o,g,shat_value\n";
    for (const auto& rt : r.trace) {
      tr += csv_row({std::to_string(rt.t), std::to_string(rt.x + 1), std::to_string(rt.y + 1),
                     rt.x_major ? "x" : "y", std::to_string(rt.winner_index + 1),
                     std::to_string(rt.o + 1), format_double(rt.g), format_double(rt.shat_value)});
    }
    write_text_file((base / "trace.csv").string(), tr);
  }
  if (!r.q_snapshots.empty()) {
    std::ostringstream qs;
    qs << "t";
    for (int i = 1; i <= config.K; ++i) qs << ",q_" << i;
    qs << '\n';
    for (std::size_t k = 0; k < r.q_snapshots.size() && k < r.snapshot_rounds.size(); ++k) {
      qs << r.snapshot_rounds[k];
      for (double v : r.q_snapshots[k]) qs << ',' << format_double(v);
      qs << '\n';
    }
    write_text_file((base / "q_snapshots.csv").string(), qs.str());
  }
}

}  // namespace midex
