#include "gresilience/report_io.hpp"

#include <charconv>

#include "gresilience/errors.hpp"

namespace gresilience {

namespace {

constexpr std::string_view kHeader =
    "scenario_id,seed,policy,objects_total,robot_placed,human_placed,missed,"
    "corrections,human_interactions,recovery_mean_s,recovery_p95_s,energy_wh,"
    "co2e_g,combined_score";
constexpr std::size_t kColumns = 14;

template <class Int>
Int parse_integer(std::string_view s, std::string_view column) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IntegrityError("report.csv column " + std::string(column) + ": bad integer '" +
                         std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const std::size_t pos = line.find(sep);
    out.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return out;
}

}  // namespace

std::string_view report_csv_header() { return kHeader; }

ReportRow to_row(const RunReport& r) {
  return {r.scenario_id,
          r.seed,
          r.policy,
          r.counters.objects_total,
          r.counters.robot_placed,
          r.counters.human_placed,
          r.counters.missed,
          r.counters.corrections,
          r.counters.human_interactions,
          r.recovery.mean_s,
          r.recovery.p95_s,
          r.energy_wh,
          r.co2e_g,
          r.combined_score};
}

std::string write_report_csv(const std::vector<ReportRow>& rows) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& r : rows) {
    const std::string cells[kColumns] = {r.scenario_id,
                                         std::to_string(r.seed),
                                         r.policy,
                                         std::to_string(r.objects_total),
                                         std::to_string(r.robot_placed),
                                         std::to_string(r.human_placed),
                                         std::to_string(r.missed),
                                         std::to_string(r.corrections),
                                         std::to_string(r.human_interactions),
                                         format_number(r.recovery_mean_s),
                                         format_number(r.recovery_p95_s),
                                         format_number(r.energy_wh),
                                         format_number(r.co2e_g),
                                         format_number(r.combined_score)};
    for (std::size_t i = 0; i < kColumns; ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<ReportRow> parse_report_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kHeader) {
    throw IntegrityError("report.csv: missing or unexpected header");
  }
  std::vector<ReportRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto c = split(lines[i], ',');
    if (c.size() != kColumns) {
      throw IntegrityError("report.csv line " + std::to_string(i + 1) + ": expected " +
                           std::to_string(kColumns) + " columns");
    }
    ReportRow r;
    r.scenario_id = std::string(c[0]);
    r.seed = parse_integer<std::uint64_t>(c[1], "seed");
    r.policy = std::string(c[2]);
    r.objects_total = parse_integer<std::int64_t>(c[3], "objects_total");
    r.robot_placed = parse_integer<std::int64_t>(c[4], "robot_placed");
    r.human_placed = parse_integer<std::int64_t>(c[5], "human_placed");
    r.missed = parse_integer<std::int64_t>(c[6], "missed");
    r.corrections = parse_integer<std::int64_t>(c[7], "corrections");
    r.human_interactions = parse_integer<std::int64_t>(c[8], "human_interactions");
    r.recovery_mean_s = parse_number(c[9]);
    r.recovery_p95_s = parse_number(c[10]);
    r.energy_wh = parse_number(c[11]);
    r.co2e_g = parse_number(c[12]);
    r.combined_score = parse_number(c[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::ordered_json report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["scenario_id"] = r.scenario_id;
  j["seed"] = r.seed;
  j["policy"] = r.policy;
  for (const auto& [name, value] : numeric_fields(r)) j[name] = value;
  return j;
}

nlohmann::ordered_json summary_to_json(const std::vector<RunReport>& reports) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["report_csv_columns"] = kHeader;
  j["scenario_id"] = reports.empty() ? "" : reports.front().scenario_id;
  nlohmann::ordered_json policies = nlohmann::ordered_json::array();
  if (!reports.empty()) {
    for (const auto& s : aggregate(reports)) {
      nlohmann::ordered_json p;
      p["policy"] = s.policy;
      p["runs"] = s.runs;
      nlohmann::ordered_json fields;
      for (const auto& f : s.fields) fields[f.name] = {{"mean", f.mean}, {"half_width_95", f.half_width}};
      p["fields"] = std::move(fields);
      policies.push_back(std::move(p));
    }
  }
  j["policies"] = std::move(policies);
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& r : reports) runs.push_back(report_to_json(r));
  j["runs"] = std::move(runs);
  return j;
}

}  // namespace gresilience
