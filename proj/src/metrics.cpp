#include "gresilience/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gresilience/errors.hpp"

namespace gresilience {

namespace {

double seconds(std::int64_t t_ms) { return static_cast<double>(t_ms) / 1000.0; }

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<DegradationEpisode> detect_episodes(std::span<const Event> events) {
  check_ordered(std::vector<Event>(events.begin(), events.end()));

  std::vector<DegradationEpisode> episodes;
  std::map<std::int64_t, std::size_t> open;  // object -> episode index
  std::set<std::int64_t> detected;
  // Episodes whose object is done but the conveyor is still slowed.
  std::vector<std::size_t> awaiting_restore;
  int slowed_depth = 0;

  for (const Event& e : events) {
    switch (e.kind) {
      case EventKind::kSlowdown:
        ++slowed_depth;
        [[fallthrough]];
      case EventKind::kQueue: {
        if (e.kind == EventKind::kQueue && e.text("reason") != "novel") break;
        if (detected.insert(e.object_id).second) {
          open[e.object_id] = episodes.size();
          episodes.push_back({e.object_id, seconds(e.t_ms), std::nullopt});
        }
        break;
      }
      case EventKind::kRestore:
        slowed_depth = std::max(0, slowed_depth - 1);
        if (slowed_depth == 0) {
          for (std::size_t i : awaiting_restore) episodes[i].resolved_at_s = seconds(e.t_ms);
          awaiting_restore.clear();
        }
        break;
      case EventKind::kDone:
      case EventKind::kMiss: {
        auto it = open.find(e.object_id);
        if (it == open.end()) break;
        if (slowed_depth == 0) {
          episodes[it->second].resolved_at_s = seconds(e.t_ms);
        } else {
          awaiting_restore.push_back(it->second);
        }
        open.erase(it);
        break;
      }
      default:
        break;
    }
  }
  return episodes;
}

RecoveryStats recovery_stats(const std::vector<DegradationEpisode>& episodes) {
  std::vector<double> times;
  for (const auto& ep : episodes) {
    if (ep.resolved_at_s) times.push_back(ep.recovery_time_s());
  }
  RecoveryStats s;
  s.resolved = static_cast<std::int64_t>(times.size());
  if (times.empty()) return s;
  std::sort(times.begin(), times.end());
  double sum = 0.0;
  for (double t : times) sum += t;
  s.mean_s = sum / static_cast<double>(times.size());
  s.p50_s = percentile(times, 0.50);
  s.p95_s = percentile(times, 0.95);
  s.max_s = times.back();
  return s;
}

double combined_score(double recovery_mean_s, double co2e_g, std::int64_t human_interactions,
                      std::int64_t objects_total, const ScoreWeights& w) {
  const double n = static_cast<double>(std::max<std::int64_t>(objects_total, 1));
  return -(w.resilience * recovery_mean_s / w.recovery_ref_s +
           w.green * (co2e_g / n) / w.co2e_ref_g_per_object +
           w.human * static_cast<double>(human_interactions) / n);
}

RunReport build_report(const EventLog& log, const ScenarioConfig& cfg) {
  RunReport r;
  r.scenario_id = cfg.scenario_id;
  r.seed = cfg.seed;
  r.policy = policy_label(cfg.policy);

  EnergyLedger ledger;
  bool ended = false;
  for (const Event& e : log.events()) {
    switch (e.kind) {
      case EventKind::kArrive: ++r.counters.objects_total; break;
      case EventKind::kDiscard: ++r.counters.discarded; break;
      case EventKind::kMiss: ++r.counters.missed; break;
      case EventKind::kCorrection: ++r.counters.corrections; break;
      case EventKind::kHumanStart: ++r.counters.human_interactions; break;
      case EventKind::kDone:
        if (e.text("outcome") == "robot_placed") {
          ++r.counters.robot_placed;
        } else {
          ++r.counters.human_placed;
        }
        break;
      case EventKind::kEnergy:
        ledger.record(parse_energy_source(e.text("source")), e.number("power_w"),
                      e.number("duration_s"));
        break;
      case EventKind::kEnd:
        r.counters.in_flight = static_cast<std::int64_t>(e.number("in_flight"));
        ended = true;
        break;
      default:
        break;
    }
  }
  if (!ended) throw IntegrityError("event log has no END record");
  if (!r.counters.conserved()) throw IntegrityError("event log violates object conservation");

  const auto episodes = detect_episodes(log.events());
  r.episodes = static_cast<std::int64_t>(episodes.size());
  r.recovery = recovery_stats(episodes);

  const CO2Report co2 = co2e(ledger, cfg.carbon_intensity_g_per_kwh);
  for (std::size_t i = 0; i < kNumEnergySources; ++i) {
    r.energy_wh_by_source[i] = co2.joules_by_source[i] / 3600.0;
  }
  r.energy_wh = co2.total_joules / 3600.0;
  r.co2e_g = co2.co2e_g;
  r.combined_score = combined_score(r.recovery.mean_s, r.co2e_g, r.counters.human_interactions,
                                    r.counters.objects_total, cfg.score);
  return r;
}

std::vector<std::pair<std::string, double>> numeric_fields(const RunReport& r) {
  const auto d = [](std::int64_t v) { return static_cast<double>(v); };
  return {
      {"objects_total", d(r.counters.objects_total)},
      {"robot_placed", d(r.counters.robot_placed)},
      {"human_placed", d(r.counters.human_placed)},
      {"missed", d(r.counters.missed)},
      {"discarded", d(r.counters.discarded)},
      {"in_flight", d(r.counters.in_flight)},
      {"corrections", d(r.counters.corrections)},
      {"human_interactions", d(r.counters.human_interactions)},
      {"episodes", d(r.episodes)},
      {"recovery_mean_s", r.recovery.mean_s},
      {"recovery_p50_s", r.recovery.p50_s},
      {"recovery_p95_s", r.recovery.p95_s},
      {"recovery_max_s", r.recovery.max_s},
      {"energy_wh_arm", r.energy_wh_by_source[0]},
      {"energy_wh_compute", r.energy_wh_by_source[1]},
      {"energy_wh_conveyor", r.energy_wh_by_source[2]},
      {"energy_wh_human_aid", r.energy_wh_by_source[3]},
      {"energy_wh", r.energy_wh},
      {"co2e_g", r.co2e_g},
      {"combined_score", r.combined_score},
  };
}

std::vector<PolicySummary> aggregate(const std::vector<RunReport>& reports) {
  if (reports.empty()) throw DomainError("reports", "cannot aggregate an empty report list");
  std::vector<PolicySummary> out;
  std::vector<std::vector<const RunReport*>> groups;
  for (const auto& r : reports) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.policy == r.policy; });
    if (it == out.end()) {
      out.push_back({r.policy, 0, {}});
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    const auto& members = groups[g];
    const auto n = static_cast<double>(members.size());
    out[g].runs = static_cast<std::int64_t>(members.size());
    const auto names = numeric_fields(*members.front());
    for (std::size_t f = 0; f < names.size(); ++f) {
      double sum = 0.0;
      for (const RunReport* r : members) sum += numeric_fields(*r)[f].second;
      const double mean = sum / n;
      double ss = 0.0;
      for (const RunReport* r : members) {
        const double dev = numeric_fields(*r)[f].second - mean;
        ss += dev * dev;
      }
      const double half = members.size() > 1 ? 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
      out[g].fields.push_back({names[f].first, mean, half});
    }
  }
  return out;
}

}  // namespace gresilience
