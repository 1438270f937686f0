#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gresilience/metrics.hpp"
#include "json.hpp"

namespace gresilience {

inline constexpr int kReportSchemaVersion = 1;

// One report.csv row. Column order is fixed:
// scenario_id, seed, policy, objects_total, robot_placed, human_placed, missed,
// corrections, human_interactions, recovery_mean_s, recovery_p95_s, energy_wh,
// co2e_g, combined_score
struct ReportRow {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string policy;
  std::int64_t objects_total = 0;
  std::int64_t robot_placed = 0;
  std::int64_t human_placed = 0;
  std::int64_t missed = 0;
  std::int64_t corrections = 0;
  std::int64_t human_interactions = 0;
  double recovery_mean_s = 0.0;
  double recovery_p95_s = 0.0;
  double energy_wh = 0.0;
  double co2e_g = 0.0;
  double combined_score = 0.0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

std::string_view report_csv_header();
ReportRow to_row(const RunReport& r);

// Header line followed by one line per row.
std::string write_report_csv(const std::vector<ReportRow>& rows);
// Throws IntegrityError for a wrong header or malformed rows.
std::vector<ReportRow> parse_report_csv(std::string_view text);

nlohmann::ordered_json report_to_json(const RunReport& r);
nlohmann::ordered_json summary_to_json(const std::vector<RunReport>& reports);

}  // namespace gresilience
