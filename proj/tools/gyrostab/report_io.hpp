#pragma once

#include "gyrostab/gyrostat.hpp"
#include "gyrostab/numerics.hpp"
#include "gyrostab/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace gyrostab::cli {

using Json = nlohmann::ordered_json;

/// Machine-readable analysis document: parameter set plus one entry per
/// equilibrium with the full verdict set and justification tags.
struct ReportDocument {
  gyrostat::Params params;
  struct Entry {
    gyrostat::EquilibriumState equilibrium;
    skewprod::StabilityReport report;
  };
  std::vector<Entry> entries;
  std::vector<std::string> notes;
};

[[nodiscard]] Json to_json(const gyrostat::Params& params);
[[nodiscard]] Json to_json(const skewprod::Verdict& verdict);
[[nodiscard]] Json to_json(const gyrostat::EquilibriumState& eq);
[[nodiscard]] Json to_json(const skewprod::StabilityReport& report);
[[nodiscard]] Json to_json(const ReportDocument& doc);
[[nodiscard]] Json to_json(const numerics::PerturbationResult& result,
                           const skewprod::Verdict& empirical);

/// Inverse of to_json(ReportDocument); verdicts and justification tags
/// round-trip exactly.
[[nodiscard]] ReportDocument report_document_from_json(const Json& j);

/// CSV with header t,M1,M2,M3,g1,g2,g3,H,C1,C2,F, one row per saved step,
/// 17 significant digits. A truncated (blow-up) trajectory gets a footer
/// comment row.
void write_trajectory_csv(std::ostream& out, const gyrostat::Params& params,
                          const numerics::Trajectory& traj);

/// Per-quantity absolute and relative drift summary, one line per quantity.
void write_drift_summary(std::ostream& out, const gyrostat::Params& params,
                         const numerics::Trajectory& traj);

void write_check_lines(std::ostream& out, const std::vector<verify::CheckResult>& checks);

}  // namespace gyrostab::cli
