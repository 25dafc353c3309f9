#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "midex/harness.hpp"

namespace midex {

// Experiment configuration files are JSON objects. Grammar (keys are
// case-sensitive; unknown keys anywhere are errors):
//
//   K             integer >= 2                               required
//   T             integer >= 1                               required
//   m             integer, or list of integers (cyclic)      required
//   adversary     object, see below                          required
//   algo          "midex" | "uniform" | "fixed_arm" | "reduced"   default "midex"
//   fixed_arm     arm in [1, K]                              required for fixed_arm
//   reduced_inner learner wrapped by the reduction           default "midex"
//   seed          unsigned 64-bit integer                    default 0
//   replications  integer >= 1                               default 1
//   eta, gamma    numbers; override the default schedule
//   output_dir    string
//   snapshot_every integer >= 0 (0 = max(1, T/1000))         default 0
//   threads       integer >= 1                               default 1
//   trace         boolean                                    default false
//   sweep         {"K": [..], "T": [..]}                     sweep only
//
// Adversary objects carry "kind" plus:
//   constant             "matrix": K x K rows  | "gap": Borda gap of arm 1
//   abrupt_switch        "switch_times": [..], "matrices": [K x K, ...]
//   sinusoidal_drift     "amplitude", "period", optional "base" (default all 1/2)
//   seeded_random        "seed", optional "epsilon" (0.05), "hold" (1)
//   cyclic_no_condorcet  "margin"
//
// Arms are 1-indexed in every external format.

// Throws ParseError (malformed JSON) or ValidationError (field path in
// field()).
RunConfig config_from_json(const nlohmann::json& j);
RunConfig parse_config(const std::string& path);

// Canonical form; config_from_json(config_to_json(c)) == c.
nlohmann::json config_to_json(const RunConfig& config);

nlohmann::json adversary_to_json(const AdversarySpec& spec);
AdversarySpec adversary_from_json(const nlohmann::json& j, int K);

}  // namespace midex
