#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gresilience/errors.hpp"
#include "gresilience/metrics.hpp"
#include "gresilience/report_io.hpp"
#include "oracles.hpp"

using namespace gresilience;

namespace {

Event ev(std::int64_t t, EventKind k, std::int64_t id) { return Event{t, k, id, {}}; }

// Percentile by linear interpolation between order statistics.
double pct(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double rank = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (rank - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TEST_CASE("episode from slowdown to placement") {
  std::vector<Event> log = {
      ev(1000, EventKind::kSlowdown, 7),
      ev(1500, EventKind::kDecision, 7),
      ev(5200, EventKind::kPlace, 7),
      ev(5200, EventKind::kRestore, 7),
      ev(5200, EventKind::kDone, 7).with("outcome", "robot_placed"),
  };
  const auto eps = detect_episodes(log);
  REQUIRE(eps.size() == 1);
  CHECK(eps[0].object_id == 7);
  CHECK(eps[0].recovery_time_s() == doctest::Approx(4.2));
}

TEST_CASE("episode ends at the later conveyor restore") {
  std::vector<Event> log = {
      ev(1000, EventKind::kSlowdown, 1),
      ev(4000, EventKind::kDone, 1).with("outcome", "human_placed"),
      ev(6000, EventKind::kRestore, 1),
  };
  const auto eps = detect_episodes(log);
  REQUIRE(eps.size() == 1);
  CHECK(eps[0].resolved_at_s.value() == doctest::Approx(6.0));
  CHECK(eps[0].recovery_time_s() == doctest::Approx(5.0));
}

TEST_CASE("novel queueing opens an episode, uncertain queueing does not add one") {
  std::vector<Event> log = {
      ev(0, EventKind::kQueue, 2).with("reason", "novel"),
      ev(100, EventKind::kSlowdown, 3),
      ev(200, EventKind::kQueue, 3).with("reason", "uncertain"),
      ev(3000, EventKind::kDone, 2).with("outcome", "human_placed"),
      ev(4000, EventKind::kRestore, 3),
  };
  const auto eps = detect_episodes(log);
  REQUIRE(eps.size() == 2);
  // Object 2 is done while the conveyor is still slowed for object 3.
  CHECK(eps[0].resolved_at_s.value() == doctest::Approx(4.0));
  CHECK_FALSE(eps[1].resolved_at_s.has_value());
}

TEST_CASE("unordered logs are rejected") {
  std::vector<Event> log = {ev(10, EventKind::kSlowdown, 1), ev(5, EventKind::kDone, 1)};
  CHECK_THROWS_AS(detect_episodes(log), IntegrityError);
}

TEST_CASE("recovery percentiles match the interpolation oracle") {
  oracle::Gen gen(47);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(gen.next() % 40);
    std::vector<DegradationEpisode> eps;
    std::vector<double> times;
    for (int i = 0; i < n; ++i) {
      const double t0 = gen.uniform(0, 100), d = gen.uniform(0, 30);
      eps.push_back({i, t0, t0 + d});
      times.push_back(d);
    }
    eps.push_back({n, 5.0, std::nullopt});  // unresolved episodes are ignored
    const RecoveryStats s = recovery_stats(eps);
    CHECK(s.resolved == n);
    double sum = 0;
    for (double t : times) sum += t;
    CHECK(s.mean_s == doctest::Approx(sum / n));
    CHECK(s.p50_s == doctest::Approx(pct(times, 0.5)));
    CHECK(s.p95_s == doctest::Approx(pct(times, 0.95)));
    CHECK(s.max_s == doctest::Approx(*std::max_element(times.begin(), times.end())));
  }
  CHECK(recovery_stats({}).resolved == 0);
}

TEST_CASE("combined score decreases in each cost") {
  const ScoreWeights w;
  const double base = combined_score(5.0, 1.0, 10, 50, w);
  CHECK(combined_score(6.0, 1.0, 10, 50, w) < base);
  CHECK(combined_score(5.0, 1.5, 10, 50, w) < base);
  CHECK(combined_score(5.0, 1.0, 11, 50, w) < base);
  CHECK(combined_score(0.0, 0.0, 0, 0, w) == 0.0);
  const double want = -(w.resilience * 5.0 / w.recovery_ref_s +
                        w.green * (1.0 / 50) / w.co2e_ref_g_per_object + w.human * 10.0 / 50);
  CHECK(base == doctest::Approx(want));
}

TEST_CASE("report built from a log") {
  EventLog log;
  log.append(ev(0, EventKind::kStart, -1));
  log.append(ev(10, EventKind::kArrive, 0));
  log.append(ev(10, EventKind::kArrive, 1));
  log.append(ev(20, EventKind::kDiscard, 1));
  log.append(ev(30, EventKind::kEnergy, 0).with("source", "ARM").with("power_w", 1000.0).with("duration_s", 3600.0));
  log.append(ev(40, EventKind::kDone, 0).with("outcome", "robot_placed"));
  log.append(ev(50, EventKind::kEnd, -1).with("objects_total", 2).with("in_flight", 0));
  ScenarioConfig cfg;
  cfg.scenario_id = "fixture";
  const RunReport r = build_report(log, cfg);
  CHECK(r.counters.objects_total == 2);
  CHECK(r.counters.robot_placed == 1);
  CHECK(r.counters.discarded == 1);
  CHECK(r.counters.conserved());
  CHECK(r.energy_wh == doctest::Approx(1000.0));
  CHECK(r.co2e_g == doctest::Approx(475.0));

  EventLog broken;
  broken.append(ev(0, EventKind::kArrive, 0));
  CHECK_THROWS_AS(build_report(broken, cfg), IntegrityError);
  broken.append(ev(1, EventKind::kEnd, -1).with("in_flight", 0));
  CHECK_THROWS_AS(build_report(broken, cfg), IntegrityError);
}

TEST_CASE("aggregate groups by policy with a 95% half-width") {
  std::vector<RunReport> reports(3);
  reports[0].policy = "gresilience";
  reports[0].co2e_g = 1.0;
  reports[1].policy = "always-human";
  reports[1].co2e_g = 5.0;
  reports[2].policy = "gresilience";
  reports[2].co2e_g = 3.0;
  const auto s = aggregate(reports);
  REQUIRE(s.size() == 2);
  CHECK(s[0].policy == "gresilience");
  CHECK(s[0].runs == 2);
  const auto f = std::find_if(s[0].fields.begin(), s[0].fields.end(),
                              [](const FieldSummary& x) { return x.name == "co2e_g"; });
  REQUIRE(f != s[0].fields.end());
  CHECK(f->mean == doctest::Approx(2.0));
  CHECK(f->half_width == doctest::Approx(1.96 * std::sqrt(2.0) / std::sqrt(2.0)));
  CHECK(s[1].fields[0].half_width == 0.0);
  CHECK_THROWS_AS(aggregate({}), DomainError);
}

TEST_CASE("csv round trip is byte identical") {
  oracle::Gen gen(53);
  std::vector<ReportRow> rows;
  for (int i = 0; i < 50; ++i) {
    ReportRow r;
    r.scenario_id = "s" + std::to_string(i);
    r.seed = gen.next();
    r.policy = i % 2 ? "gresilience" : "threshold";
    r.objects_total = static_cast<std::int64_t>(gen.next() % 1000);
    r.robot_placed = static_cast<std::int64_t>(gen.next() % 500);
    r.recovery_mean_s = gen.uniform(0, 30);
    r.recovery_p95_s = gen.uniform(0, 60);
    r.energy_wh = gen.uniform(0, 100);
    r.co2e_g = r.energy_wh * 0.475;
    r.combined_score = -gen.uniform(0, 5);
    rows.push_back(r);
  }
  const std::string text = write_report_csv(rows);
  const auto back = parse_report_csv(text);
  CHECK(back == rows);
  CHECK(write_report_csv(back) == text);
  CHECK(text.substr(0, text.find('\n')) == report_csv_header());
  CHECK_THROWS_AS(parse_report_csv("bad,header\n"), IntegrityError);
  CHECK_THROWS_AS(parse_report_csv(std::string(report_csv_header()) + "\nx,1\n"), IntegrityError);
}
