#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "midex/harness.hpp"
#include "midex/verify.hpp"

namespace midex {

// %.17g; non-finite values become "nan" / "inf" / "-inf".
std::string format_double(double v);

// Serialises JSON with every floating-point number at 17 significant digits
// (non-finite numbers become null). Keys keep nlohmann's sorted order, so
// output is byte-stable.
std::string dump_json(const nlohmann::json& j, int indent = 2);

nlohmann::json report_to_json(const PropertyReport& report);
nlohmann::json summary_json(const AggregateResult& result, const RunConfig& config,
                            const std::optional<PropertyReport>& report = std::nullopt);

// Writes into dir (created if needed):
//   trajectory.csv   t,regret_cum,shifted_regret_cum,bench_score,played_avg_score
//                    (means over replications at the snapshot rounds)
//   summary.json     effective config, seeds, per-replication final regrets,
//                    aggregates, bound values, verification report when given
//   trace.csv        replication 0 learner trace, when recorded
//   q_snapshots.csv  q_t at the snapshot rounds, when recorded
// Throws IoError.
void emit_outputs(const AggregateResult& result, const RunConfig& config, const std::string& dir,
                  const std::optional<PropertyReport>& report = std::nullopt);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace midex
