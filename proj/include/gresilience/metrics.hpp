#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gresilience/event_log.hpp"
#include "gresilience/green_meter.hpp"
#include "gresilience/scenario.hpp"

namespace gresilience {

// Interval from detecting an uncertain or novel object until the object is
// resolved and the conveyor is back at nominal speed.
struct DegradationEpisode {
  std::int64_t object_id = 0;
  double detected_at_s = 0.0;
  std::optional<double> resolved_at_s;  // empty if unresolved at end of log

  double recovery_time_s() const { return resolved_at_s ? *resolved_at_s - detected_at_s : 0.0; }
};

// One episode per object that entered the slowdown path or the learning
// queue, ordered by detection. Throws IntegrityError for unordered logs.
std::vector<DegradationEpisode> detect_episodes(std::span<const Event> events);

struct RecoveryStats {
  std::int64_t resolved = 0;
  double mean_s = 0.0;
  double p50_s = 0.0;
  double p95_s = 0.0;
  double max_s = 0.0;
};

// Percentiles interpolate linearly between order statistics.
RecoveryStats recovery_stats(const std::vector<DegradationEpisode>& episodes);

struct RunCounters {
  std::int64_t objects_total = 0;
  std::int64_t robot_placed = 0;
  std::int64_t human_placed = 0;
  std::int64_t missed = 0;
  std::int64_t discarded = 0;
  std::int64_t in_flight = 0;
  std::int64_t corrections = 0;
  std::int64_t human_interactions = 0;

  bool conserved() const {
    return objects_total == discarded + robot_placed + human_placed + missed + in_flight;
  }
  friend bool operator==(const RunCounters&, const RunCounters&) = default;
};

struct RunReport {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string policy;
  RunCounters counters;
  std::int64_t episodes = 0;
  RecoveryStats recovery;
  std::array<double, kNumEnergySources> energy_wh_by_source{};
  double energy_wh = 0.0;
  double co2e_g = 0.0;
  double combined_score = 0.0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

// Higher is better; strictly decreasing in recovery time, CO2e and human
// interactions per object.
double combined_score(double recovery_mean_s, double co2e_g, std::int64_t human_interactions,
                      std::int64_t objects_total, const ScoreWeights& w);

// Recomputes everything from the log alone (ENERGY records carry the ledger).
RunReport build_report(const EventLog& log, const ScenarioConfig& cfg);

// Named numeric view of a report, in a fixed order.
std::vector<std::pair<std::string, double>> numeric_fields(const RunReport& r);

struct FieldSummary {
  std::string name;
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal-approximation half-width
};

struct PolicySummary {
  std::string policy;
  std::int64_t runs = 0;
  std::vector<FieldSummary> fields;
};

// Groups by policy label in order of first appearance. Throws DomainError on
// an empty list.
std::vector<PolicySummary> aggregate(const std::vector<RunReport>& reports);

}  // namespace gresilience
