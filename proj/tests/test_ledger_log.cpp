#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "gresilience/errors.hpp"
#include "gresilience/event_log.hpp"
#include "gresilience/factors.hpp"
#include "gresilience/green_meter.hpp"
#include "oracles.hpp"

using namespace gresilience;

TEST_CASE("one kWh at 475 g/kWh is 475 g") {
  EnergyLedger l;
  l.record(EnergySource::kArm, 1000.0, 3600.0);
  const CO2Report r = co2e(l, 475.0);
  CHECK(r.total_joules == 3.6e6);
  CHECK(r.total_kwh == 1.0);
  CHECK(r.co2e_g == 475.0);
  CHECK(r.joules_by_source[static_cast<int>(EnergySource::kArm)] == 3.6e6);
}

TEST_CASE("co2e is additive over ledgers and monotone in energy") {
  oracle::Gen gen(41);
  for (int i = 0; i < 500; ++i) {
    EnergyLedger a, b;
    for (int k = 0; k < 5; ++k) {
      a.record(static_cast<EnergySource>(gen.next() % 4), gen.uniform(0, 100), gen.uniform(0, 60));
      b.record(static_cast<EnergySource>(gen.next() % 4), gen.uniform(0, 100), gen.uniform(0, 60));
    }
    const double ci = gen.uniform(0, 900);
    const double sum = co2e(a, ci).co2e_g + co2e(b, ci).co2e_g;
    CHECK(co2e(a.merged(b), ci).co2e_g == doctest::Approx(sum).epsilon(1e-12));
    CHECK(co2e(a.merged(b), ci).co2e_g >= co2e(a, ci).co2e_g);
  }
}

TEST_CASE("ledger rejects negative or non-finite input") {
  EnergyLedger l;
  CHECK_THROWS_AS(l.record(EnergySource::kArm, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(l.record(EnergySource::kArm, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(l.record(EnergySource::kArm, std::numeric_limits<double>::infinity(), 1.0),
                  DomainError);
  CHECK_THROWS_AS(co2e(l, -5.0), DomainError);
  CHECK(co2e(l).co2e_g == 0.0);
  CHECK(parse_energy_source("HUMAN_AID") == EnergySource::kHumanAid);
}

TEST_CASE("event text round trip") {
  EventLog log;
  log.append(Event{0, EventKind::kStart, kSystemObject, {}}.with("scenario_id", "x").with("seed", 42));
  log.append(Event{10, EventKind::kClassify, 3, {}}.with("eps", 0.1 + 0.2).with("correct", true));
  log.append(Event{10, EventKind::kEnergy, 3, {}}.with("joules", 1e-300).with("power_w", -0.0));
  log.append(Event{25, EventKind::kEnd, kSystemObject, {}});
  const std::string text = log.to_text();
  const EventLog back = EventLog::parse_text(text);
  CHECK(back == log);
  CHECK(back.to_text() == text);
  CHECK(back.events()[1].number("eps") == 0.1 + 0.2);
  CHECK(back.events()[1].text("correct") == "1");
  CHECK(text.find("10,CLASSIFY,3,eps=0.30000000000000004;correct=1\n") != std::string::npos);
}

TEST_CASE("number formatting is shortest round trip") {
  oracle::Gen gen(43);
  for (int i = 0; i < 5000; ++i) {
    const double v = gen.uniform(-1e6, 1e6) * std::pow(10.0, static_cast<int>(gen.next() % 20) - 10);
    REQUIRE(parse_number(format_number(v)) == v);
  }
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(3.0) == "3");
  CHECK_THROWS_AS(parse_number("1.5x"), IntegrityError);
  CHECK_THROWS_AS(parse_number(""), IntegrityError);
}

TEST_CASE("event log integrity") {
  EventLog log;
  log.append(Event{5, EventKind::kArrive, 0, {}});
  CHECK_THROWS_AS(log.append(Event{4, EventKind::kArrive, 1, {}}), InvariantError);
  CHECK_THROWS_AS(EventLog::parse_text("5,ARRIVE,0,\n4,ARRIVE,1,\n"), IntegrityError);
  CHECK_THROWS_AS(EventLog::parse_text("5,NOPE,0,\n"), IntegrityError);
  CHECK_THROWS_AS(EventLog::parse_text("5,ARRIVE\n"), IntegrityError);
  CHECK_THROWS_AS(log.events()[0].number("eps"), IntegrityError);
  CHECK_THROWS_AS(check_ordered({Event{2, EventKind::kEnd, -1, {}}, Event{1, EventKind::kEnd, -1, {}}}),
                  IntegrityError);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("jsonl export has one object per event") {
  EventLog log;
  log.append(Event{1, EventKind::kArrive, 0, {}}.with("color", 2));
  log.append(Event{2, EventKind::kImage, 0, {}}.with("empty", false));
  const std::string j = log.to_jsonl();
  CHECK(std::count(j.begin(), j.end(), '\n') == 2);
  CHECK(j.find("\"kind\":\"ARRIVE\"") != std::string::npos);
}

TEST_CASE("factor normalization") {
  const FactorBounds b{2.0, 6.0, 4.0};
  CHECK(normalize_score(2.0, b) == doctest::Approx(0.05));
  CHECK(normalize_score(6.0, b) == doctest::Approx(1.0));
  CHECK(normalize_score(4.0, b) == doctest::Approx(0.525));
  CHECK(normalize_score(-10.0, b) == 0.05);
  CHECK(normalize_score(100.0, b) == 1.0);
  NormalizationBounds nb;
  nb.arm_time_s = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(measure_factors({}, nb), ValidationError);
}

TEST_CASE("empty window uses priors") {
  NormalizationBounds nb;
  const RawFactors r = raw_factors({}, nb);
  CHECK(r.human_time_s == nb.human_time_s.prior);
  CHECK(r.arm_time_s == nb.arm_time_s.prior);
  CHECK(r.human_interactions == nb.human_interactions.prior);
  CHECK(r.co2e_g_per_object == nb.co2e_g_per_object.prior);
  const SystemFactors f = measure_factors({}, nb);
  CHECK(f.arm_time == doctest::Approx(normalize_score(nb.arm_time_s.prior, nb.arm_time_s)));
}

TEST_CASE("raw factors from a window") {
  std::vector<Event> w;
  w.push_back(Event{0, EventKind::kArrive, 0, {}});
  w.push_back(Event{0, EventKind::kArrive, 1, {}});
  w.push_back(Event{1, EventKind::kHumanStart, 0, {}}.with("task", "classify").with("duration_s", 4.0));
  w.push_back(Event{2, EventKind::kHumanStart, 1, {}}.with("task", "learn").with("duration_s", 6.0));
  w.push_back(Event{3, EventKind::kHumanStart, 1, {}}.with("task", "correct").with("duration_s", 9.0));
  w.push_back(Event{4, EventKind::kArmMove, 1, {}}.with("duration_s", 3.0));
  w.push_back(Event{5, EventKind::kEnergy, -1, {}}.with("joules", 3.6e6));
  NormalizationBounds nb;
  nb.carbon_intensity_g_per_kwh = 475.0;
  const RawFactors r = raw_factors(w, nb);
  CHECK(r.human_time_s == 5.0);
  CHECK(r.arm_time_s == 3.0);
  CHECK(r.human_interactions == 3.0);
  CHECK(r.co2e_g_per_object == doctest::Approx(237.5));
}
