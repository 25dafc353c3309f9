#include "midex/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "midex/errors.hpp"

namespace midex {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ValidationError(prefix + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path, "missing required key");
  return *it;
}

long long as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
  return v.get<long long>();
}

std::uint64_t as_u64(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) {
    return static_cast<std::uint64_t>(v.get<long long>());
  }
  throw ValidationError(path, "expected a non-negative integer");
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, "expected a number");
  return v.get<double>();
}

PreferenceMatrix as_matrix(const json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "expected a list of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) throw ValidationError(rp, "expected a row of numbers");
    std::vector<double> row;
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      row.push_back(as_double(v[i][j], rp + "[" + std::to_string(j) + "]"));
    }
    rows.push_back(std::move(row));
  }
  try {
    return validate(rows);
  } catch (const Error& e) {
    throw ValidationError(path, e.what());
  }
}

json matrix_to_json(const PreferenceMatrix& P) {
  json rows = json::array();
  for (int i = 0; i < P.K(); ++i) rows.push_back(std::vector<double>(P.row(i).begin(), P.row(i).end()));
  return rows;
}

Algorithm as_algorithm(const json& v, const std::string& path) {
  if (!v.is_string()) throw ValidationError(path, "expected a string");
  const std::string s = v.get<std::string>();
  if (s == "midex") return Algorithm::Midex;
  if (s == "uniform") return Algorithm::Uniform;
  if (s == "fixed_arm") return Algorithm::FixedArm;
  if (s == "reduced") return Algorithm::Reduced;
  throw ValidationError(path, "unknown algorithm '" + s + "'");
}

}  // namespace

AdversarySpec adversary_from_json(const json& j, int K) {
  const std::string p = "adversary";
  if (!j.is_object()) throw ValidationError(p, "expected an object");
  const json& kind_v = require(j, "kind", p + ".kind");
  if (!kind_v.is_string()) throw ValidationError(p + ".kind", "expected a string");
  const std::string kind = kind_v.get<std::string>();
  try {
    if (kind == "constant") {
      reject_unknown(j, {"kind", "matrix", "gap"}, p + ".");
      if (j.contains("matrix") == j.contains("gap")) {
        throw ValidationError(p, "constant needs exactly one of 'matrix' or 'gap'");
      }
      if (j.contains("gap")) {
        const double gap = as_double(j["gap"], p + ".gap");
        return ConstantSpec{borda_gap_matrix(K, gap), gap};
      }
      return ConstantSpec{as_matrix(j["matrix"], p + ".matrix"), std::nullopt};
    }
    if (kind == "abrupt_switch") {
      reject_unknown(j, {"kind", "switch_times", "matrices"}, p + ".");
      AbruptSwitchSpec s;
      const json& times = require(j, "switch_times", p + ".switch_times");
      if (!times.is_array()) throw ValidationError(p + ".switch_times", "expected a list");
      for (std::size_t i = 0; i < times.size(); ++i) {
        s.switch_times.push_back(
            as_int(times[i], p + ".switch_times[" + std::to_string(i) + "]"));
      }
      const json& mats = require(j, "matrices", p + ".matrices");
      if (!mats.is_array()) throw ValidationError(p + ".matrices", "expected a list");
      for (std::size_t i = 0; i < mats.size(); ++i) {
        s.matrices.push_back(as_matrix(mats[i], p + ".matrices[" + std::to_string(i) + "]"));
      }
      return s;
    }
    if (kind == "sinusoidal_drift") {
      reject_unknown(j, {"kind", "base", "amplitude", "period"}, p + ".");
      PreferenceMatrix base =
          j.contains("base")
              ? as_matrix(j["base"], p + ".base")
              : validate(K, std::vector<double>(static_cast<std::size_t>(K) * K, 0.5));
      return SinusoidalDriftSpec{std::move(base),
                                 as_double(require(j, "amplitude", p + ".amplitude"),
                                           p + ".amplitude"),
                                 as_double(require(j, "period", p + ".period"), p + ".period")};
    }
    if (kind == "seeded_random") {
      reject_unknown(j, {"kind", "seed", "epsilon", "hold"}, p + ".");
      SeededRandomSpec s{K, as_u64(require(j, "seed", p + ".seed"), p + ".seed")};
      if (j.contains("epsilon")) s.epsilon = as_double(j["epsilon"], p + ".epsilon");
      if (j.contains("hold")) s.hold = as_int(j["hold"], p + ".hold");
      return s;
    }
    if (kind == "cyclic_no_condorcet") {
      reject_unknown(j, {"kind", "margin"}, p + ".");
      return CyclicNoCondorcetSpec{K, as_double(require(j, "margin", p + ".margin"),
                                                p + ".margin")};
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(p, e.what());
  }
  throw ValidationError(p + ".kind", "unknown adversary kind '" + kind + "'");
}

json adversary_to_json(const AdversarySpec& spec) {
  json j;
  j["kind"] = kind_name(spec);
  if (const auto* c = std::get_if<ConstantSpec>(&spec)) {
    if (c->gap) {
      j["gap"] = *c->gap;
    } else {
      j["matrix"] = matrix_to_json(c->matrix);
    }
  } else if (const auto* a = std::get_if<AbruptSwitchSpec>(&spec)) {
    j["switch_times"] = a->switch_times;
    json mats = json::array();
    for (const auto& M : a->matrices) mats.push_back(matrix_to_json(M));
    j["matrices"] = mats;
  } else if (const auto* d = std::get_if<SinusoidalDriftSpec>(&spec)) {
    j["base"] = matrix_to_json(d->base);
    j["amplitude"] = d->amplitude;
    j["period"] = d->period;
  } else if (const auto* r = std::get_if<SeededRandomSpec>(&spec)) {
    j["seed"] = r->seed;
    j["epsilon"] = r->epsilon;
    j["hold"] = r->hold;
  } else if (const auto* y = std::get_if<CyclicNoCondorcetSpec>(&spec)) {
    j["margin"] = y->margin;
  }
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("<root>", "expected an object");
  reject_unknown(j,
                 {"K", "T", "m", "adversary", "algo", "fixed_arm", "reduced_inner", "seed",
                  "replications", "eta", "gamma", "output_dir", "snapshot_every", "threads",
                  "trace", "sweep"},
                 "");
  RunConfig c;
  c.K = static_cast<int>(as_int(require(j, "K", "K"), "K"));
  c.T = as_int(require(j, "T", "T"), "T");
  if (c.K < 2) throw ValidationError("K", "must be >= 2");
  if (c.T < 1) throw ValidationError("T", "must be >= 1");

  const json& m = require(j, "m", "m");
  if (m.is_array()) {
    if (m.empty()) throw ValidationError("m", "schedule must not be empty");
    std::vector<int> ms;
    for (std::size_t i = 0; i < m.size(); ++i) {
      ms.push_back(static_cast<int>(as_int(m[i], "m[" + std::to_string(i) + "]")));
    }
    c.m_schedule = MSchedule(std::move(ms));
  } else {
    c.m_schedule = MSchedule(static_cast<int>(as_int(m, "m")));
  }
  if (c.m_schedule.min() < 2) throw ValidationError("m", "every m must be >= 2");
  if (c.m_schedule.max() > c.K) throw ValidationError("m", "m must not exceed K");

  c.adversary = adversary_from_json(require(j, "adversary", "adversary"), c.K);

  if (j.contains("algo")) c.algo = as_algorithm(j["algo"], "algo");
  if (j.contains("reduced_inner")) c.reduced_inner = as_algorithm(j["reduced_inner"], "reduced_inner");
  if (j.contains("fixed_arm")) {
    c.fixed_arm = static_cast<Arm>(as_int(j["fixed_arm"], "fixed_arm") - 1);
  } else if (c.algo == Algorithm::FixedArm ||
             (c.algo == Algorithm::Reduced && c.reduced_inner == Algorithm::FixedArm)) {
    throw ValidationError("fixed_arm", "required by the fixed_arm learner");
  }
  if (j.contains("seed")) c.seed = as_u64(j["seed"], "seed");
  if (j.contains("replications")) {
    c.replications = static_cast<int>(as_int(j["replications"], "replications"));
  }
  if (j.contains("eta")) c.eta = as_double(j["eta"], "eta");
  if (j.contains("gamma")) c.gamma = as_double(j["gamma"], "gamma");
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ValidationError("output_dir", "expected a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("snapshot_every")) c.snapshot_every = as_int(j["snapshot_every"], "snapshot_every");
  if (j.contains("threads")) c.threads = static_cast<int>(as_int(j["threads"], "threads"));
  if (j.contains("trace")) {
    if (!j["trace"].is_boolean()) throw ValidationError("trace", "expected a boolean");
    c.write_trace = j["trace"].get<bool>();
  }
  if (j.contains("sweep")) {
    const json& sw = j["sweep"];
    if (!sw.is_object()) throw ValidationError("sweep", "expected an object");
    reject_unknown(sw, {"K", "T"}, "sweep.");
    if (sw.contains("K")) {
      if (!sw["K"].is_array()) throw ValidationError("sweep.K", "expected a list");
      for (std::size_t i = 0; i < sw["K"].size(); ++i) {
        c.sweep_K.push_back(
            static_cast<int>(as_int(sw["K"][i], "sweep.K[" + std::to_string(i) + "]")));
      }
    }
    if (sw.contains("T")) {
      if (!sw["T"].is_array()) throw ValidationError("sweep.T", "expected a list");
      for (std::size_t i = 0; i < sw["T"].size(); ++i) {
        c.sweep_T.push_back(as_int(sw["T"][i], "sweep.T[" + std::to_string(i) + "]"));
      }
    }
  }
  validate_config(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["K"] = c.K;
  j["T"] = c.T;
  if (c.m_schedule.is_constant()) {
    j["m"] = c.m_schedule.values().front();
  } else {
    j["m"] = c.m_schedule.values();
  }
  j["adversary"] = adversary_to_json(c.adversary);
  j["algo"] = algorithm_name(c.algo);
  j["fixed_arm"] = c.fixed_arm + 1;
  j["reduced_inner"] = algorithm_name(c.reduced_inner);
  j["seed"] = c.seed;
  j["replications"] = c.replications;
  if (c.eta) j["eta"] = *c.eta;
  if (c.gamma) j["gamma"] = *c.gamma;
  j["output_dir"] = c.output_dir;
  j["snapshot_every"] = c.snapshot_every;
  j["threads"] = c.threads;
  j["trace"] = c.write_trace;
  if (!c.sweep_K.empty() || !c.sweep_T.empty()) {
    json sw = json::object();
    if (!c.sweep_K.empty()) sw["K"] = c.sweep_K;
    if (!c.sweep_T.empty()) sw["T"] = c.sweep_T;
    j["sweep"] = sw;
  }
  return j;
}

}  // namespace midex
