#pragma once

// Event-driven model of the online colour-classification cell: conveyor,
// camera + classifier pipeline, one robot arm and one human operator. Objects
// whose first prediction is not confident slow the conveyor, get a second
// image, and the decision engine picks robot or human.

#include <cstdint>

#include "gresilience/event_log.hpp"
#include "gresilience/green_meter.hpp"
#include "gresilience/random.hpp"
#include "gresilience/scenario.hpp"

namespace gresilience {

struct WorldObject {
  std::int64_t id = 0;
  int true_color = 0;
  bool is_novel = false;  // colour not yet learned when the object arrived
  double arrival_time_s = 0.0;
  double position_m = 0.0;
};

struct Classification {
  int predicted_color = 0;
  double eps = 0.0;
  bool correct = false;
};

// Confidence for the object's class (known or novel distribution), clamped to
// [eps_clamp_min, eps_clamp_max].
double sample_confidence(bool is_novel, const ClassifierModel& model, RandomSource& rng);

// Calibrated prediction: the true colour with probability eps, otherwise a
// uniformly drawn wrong colour from the palette.
Classification predict_color(int true_color, double eps, int palette_size,
                             RandomSource& rng);

Classification classify(const WorldObject& object, const ClassifierModel& model,
                        int palette_size, RandomSource& rng);

// Confidence threshold of the confident path for a policy. always-human never
// takes it.
double gate_threshold(const Policy& policy, const ClassifierModel& model);

struct SimCounters {
  std::int64_t objects_total = 0;
  std::int64_t discarded = 0;
  std::int64_t robot_placed = 0;
  std::int64_t human_placed = 0;
  std::int64_t missed = 0;
  std::int64_t in_flight = 0;
  std::int64_t corrections = 0;
  std::int64_t human_interactions = 0;
  std::int64_t slowdowns = 0;
  std::int64_t learning_queue = 0;
  std::int64_t game_decisions = 0;

  friend bool operator==(const SimCounters&, const SimCounters&) = default;
};

struct SimulationResult {
  EventLog log;
  EnergyLedger ledger;
  SimCounters counters;
};

// Throws ValidationError for an invalid config and InvariantError if the run
// breaks object conservation.
SimulationResult run_scenario(const ScenarioConfig& cfg);

// Millisecond tick count for a duration in seconds.
std::int64_t to_ticks(double seconds);

}  // namespace gresilience
