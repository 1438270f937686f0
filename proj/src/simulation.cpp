#include "gresilience/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <variant>

#include "gresilience/decision.hpp"
#include "gresilience/errors.hpp"
#include "gresilience/factors.hpp"

namespace gresilience {

std::int64_t to_ticks(double seconds) { return std::llround(seconds * 1000.0); }

double sample_confidence(bool is_novel, const ClassifierModel& model, RandomSource& rng) {
  const double mean = is_novel ? model.eps_novel_mean : model.eps_known_mean;
  const double spread = is_novel ? model.eps_novel_spread : model.eps_known_spread;
  return std::clamp(rng.uniform(mean - spread, mean + spread), model.eps_clamp_min,
                    model.eps_clamp_max);
}

Classification predict_color(int true_color, double eps, int palette_size,
                             RandomSource& rng) {
  if (rng.uniform() < eps || palette_size <= 1) return {true_color, eps, true};
  // Uniform over the palette_size - 1 wrong colours.
  int wrong = static_cast<int>(rng.index(static_cast<std::size_t>(palette_size - 1)));
  if (wrong >= true_color) ++wrong;
  return {wrong, eps, false};
}

Classification classify(const WorldObject& object, const ClassifierModel& model,
                        int palette_size, RandomSource& rng) {
  const double eps = sample_confidence(object.is_novel, model, rng);
  return predict_color(object.true_color, eps, palette_size, rng);
}

double gate_threshold(const Policy& policy, const ClassifierModel& model) {
  if (const auto* g = std::get_if<GresiliencePolicy>(&policy)) return g->eps_high;
  if (const auto* t = std::get_if<ThresholdPolicy>(&policy)) return t->cutoff;
  if (std::holds_alternative<AlwaysHumanPolicy>(policy)) {
    return std::numeric_limits<double>::infinity();
  }
  return model.confidence_gate;
}

namespace {

// Sub-stream ids; separate streams keep the arrival sequence identical across
// policies.
enum Stream : std::uint64_t { kArrivals = 1, kWorld, kClassifier, kHuman, kDecisions };

enum class HumanTask { kLearn, kClassify, kCorrect, kRetrieve };

const char* task_name(HumanTask t) {
  switch (t) {
    case HumanTask::kLearn: return "learn";
    case HumanTask::kClassify: return "classify";
    case HumanTask::kCorrect: return "correct";
    case HumanTask::kRetrieve: return "retrieve";
  }
  return "classify";
}

struct ObjectState {
  WorldObject world;
  bool empty_image = false;
  bool on_belt = false;
  bool terminal = false;
  double odometer_at_arrival = 0.0;
  std::uint64_t exit_generation = 0;
  Classification prediction;
};

struct Arrival {};
struct ImageDone { std::int64_t obj; };
struct SecondImageDone { std::int64_t obj; };
struct ArmDone { std::int64_t obj; };
struct HumanDone { HumanTask task; std::int64_t obj; };
struct ExitCheck { std::int64_t obj; std::uint64_t generation; };

using SimEvent = std::variant<Arrival, ImageDone, SecondImageDone, ArmDone, HumanDone, ExitCheck>;

struct Pending {
  std::int64_t t_ms;
  std::uint64_t seq;
  SimEvent what;
};

struct Later {
  bool operator()(const Pending& x, const Pending& y) const {
    return x.t_ms != y.t_ms ? x.t_ms > y.t_ms : x.seq > y.seq;
  }
};

class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& cfg)
      : cfg_(cfg),
        arrivals_rng_(derive_seed(cfg.seed, kArrivals)),
        world_rng_(derive_seed(cfg.seed, kWorld)),
        classifier_rng_(derive_seed(cfg.seed, kClassifier)),
        human_rng_(derive_seed(cfg.seed, kHuman)),
        decision_rng_(derive_seed(cfg.seed, kDecisions)),
        end_ms_(to_ticks(cfg.duration_s)),
        gate_(gate_threshold(cfg.policy, cfg.classifier)) {
    const auto palette = static_cast<std::size_t>(cfg.colors.palette_size);
    learned_.assign(palette, false);
    seen_.assign(palette, false);
    for (int c = 0; c < cfg.colors.initially_known; ++c) {
      learned_[c] = true;
      seen_[c] = true;
    }
  }

  SimulationResult run() {
    log(Event{0, EventKind::kStart, kSystemObject, {}}
            .with("scenario_id", cfg_.scenario_id)
            .with("seed", std::to_string(cfg_.seed))
            .with("policy", policy_label(cfg_.policy))
            .with("duration_s", cfg_.duration_s));
    schedule_next_arrival();
    while (!agenda_.empty() && agenda_.top().t_ms < end_ms_) {
      Pending p = agenda_.top();
      agenda_.pop();
      advance_to(p.t_ms);
      std::visit([this](const auto& a) { handle(a); }, p.what);
    }
    advance_to(end_ms_);
    close_conveyor_segment();

    counters_.in_flight = 0;
    for (const auto& o : objects_) {
      if (!o.terminal) ++counters_.in_flight;
    }
    log(Event{now_, EventKind::kEnd, kSystemObject, {}}
            .with("objects_total", counters_.objects_total)
            .with("in_flight", counters_.in_flight));

    const auto& c = counters_;
    if (c.objects_total !=
        c.discarded + c.robot_placed + c.human_placed + c.missed + c.in_flight) {
      throw InvariantError("object conservation violated");
    }
    return {std::move(log_), std::move(ledger_), counters_};
  }

 private:
  // -- bookkeeping ---------------------------------------------------------

  void log(Event e) { log_.append(std::move(e)); }

  Event event(EventKind kind, std::int64_t obj) const { return Event{now_, kind, obj, {}}; }

  void at(std::int64_t t_ms, SimEvent what) { agenda_.push({t_ms, seq_++, what}); }

  double speed() const {
    return slowed_ ? cfg_.conveyor.speed_mps * cfg_.conveyor.slowdown_factor
                   : cfg_.conveyor.speed_mps;
  }

  void advance_to(std::int64_t t_ms) {
    odometer_ += speed() * static_cast<double>(t_ms - now_) / 1000.0;
    now_ = t_ms;
  }

  double position(const ObjectState& o) const { return odometer_ - o.odometer_at_arrival; }

  void energy(EnergySource source, double power_w, std::int64_t duration_ms,
              std::int64_t obj) {
    const EnergyEntry& e =
        ledger_.record(source, power_w, static_cast<double>(duration_ms) / 1000.0);
    log(event(EventKind::kEnergy, obj)
            .with("source", std::string(to_string(source)))
            .with("power_w", e.power_w)
            .with("duration_s", e.duration_s)
            .with("joules", e.joules));
  }

  // The conveyor motor runs throughout; its energy is booked per segment so
  // slowed time spent waiting on the human can be attributed to HUMAN_AID.
  void close_conveyor_segment() {
    if (now_ > segment_start_) {
      energy(segment_source_, cfg_.conveyor.power_w, now_ - segment_start_, kSystemObject);
    }
    segment_start_ = now_;
  }

  // -- belt ----------------------------------------------------------------

  void schedule_exit(ObjectState& o) {
    const double remaining = cfg_.conveyor.picking_area_m - position(o);
    const auto dt = static_cast<std::int64_t>(std::ceil(remaining / speed() * 1000.0 - 1e-9));
    at(now_ + std::max<std::int64_t>(dt, 0), ExitCheck{o.world.id, ++o.exit_generation});
  }

  void reschedule_exits() {
    for (std::int64_t id : belt_) schedule_exit(objects_[id]);
  }

  void take_off_belt(ObjectState& o) {
    o.on_belt = false;
    std::erase(belt_, o.world.id);
  }

  void slow_down(std::int64_t obj) {
    close_conveyor_segment();
    slowed_ = true;
    slowed_for_ = obj;
    ++counters_.slowdowns;
    log(event(EventKind::kSlowdown, obj).with("speed_mps", speed()));
    reschedule_exits();
  }

  void restore(std::int64_t obj) {
    close_conveyor_segment();
    segment_source_ = EnergySource::kConveyor;
    slowed_ = false;
    slowed_for_.reset();
    log(event(EventKind::kRestore, obj).with("speed_mps", speed()));
    reschedule_exits();
    // The pipeline was held by the uncertain object until now.
    if (pipeline_busy_ == obj) pipeline_busy_.reset();
    start_pipeline();
  }

  void finish(ObjectState& o, const char* outcome) {
    o.terminal = true;
    log(event(EventKind::kDone, o.world.id).with("outcome", outcome));
  }

  // -- arrivals ------------------------------------------------------------

  void schedule_next_arrival() {
    next_arrival_s_ += arrivals_rng_.exponential(cfg_.arrival_rate_per_min / 60.0);
    const std::int64_t t = to_ticks(next_arrival_s_);
    if (t < end_ms_) at(t, Arrival{});
  }

  int draw_color() {
    std::vector<int> known;
    std::vector<int> unknown;
    for (int c = 0; c < cfg_.colors.palette_size; ++c) {
      (learned_[c] ? known : unknown).push_back(c);
    }
    const bool want_known = world_rng_.uniform() < cfg_.known_color_fraction;
    const std::vector<int>& pool =
        (want_known && !known.empty()) || unknown.empty() ? known : unknown;
    return pool[world_rng_.index(pool.size())];
  }

  void handle(const Arrival&) {
    ObjectState o;
    o.world.id = static_cast<std::int64_t>(objects_.size());
    o.world.arrival_time_s = static_cast<double>(now_) / 1000.0;
    o.empty_image = world_rng_.uniform() < cfg_.classifier.empty_image_prob;
    o.odometer_at_arrival = odometer_;
    ++counters_.objects_total;
    Event ev = event(EventKind::kArrive, o.world.id);
    if (o.empty_image) {
      ev.with("empty", true);
    } else {
      o.world.true_color = draw_color();
      o.world.is_novel = !learned_[o.world.true_color];
      o.on_belt = true;
      ev.with("empty", false).with("color", o.world.true_color).with("novel", o.world.is_novel);
    }
    log(std::move(ev));
    objects_.push_back(o);
    if (o.on_belt) {
      belt_.push_back(o.world.id);
      schedule_exit(objects_.back());
    }
    pipeline_queue_.push_back(o.world.id);
    start_pipeline();
    schedule_next_arrival();
  }

  // -- camera + classifier pipeline -----------------------------------------

  void start_pipeline() {
    while (!pipeline_busy_ && !pipeline_queue_.empty()) {
      const std::int64_t id = pipeline_queue_.front();
      pipeline_queue_.pop_front();
      if (objects_[id].terminal) continue;
      pipeline_busy_ = id;
      at(now_ + to_ticks(cfg_.classifier.image_time_s), ImageDone{id});
    }
  }

  void release_pipeline(std::int64_t id) {
    if (pipeline_busy_ == id) pipeline_busy_.reset();
    start_pipeline();
  }

  void handle(const ImageDone& a) {
    ObjectState& o = objects_[a.obj];
    energy(EnergySource::kCompute, cfg_.compute_power_w, to_ticks(cfg_.classifier.image_time_s),
           a.obj);
    if (o.terminal) return release_pipeline(a.obj);

    log(event(EventKind::kImage, a.obj).with("empty", o.empty_image));
    if (o.empty_image) {
      o.terminal = true;
      ++counters_.discarded;
      log(event(EventKind::kDiscard, a.obj));
      return release_pipeline(a.obj);
    }

    const int color = o.world.true_color;
    const bool similar = seen_[color];
    seen_[color] = true;
    log(event(EventKind::kSimilarity, a.obj).with("similar", similar));
    if (!similar) {
      // Learning mode: the operator labels the new colour.
      ++counters_.learning_queue;
      log(event(EventKind::kQueue, a.obj).with("reason", "novel"));
      enqueue_human(HumanTask::kLearn, a.obj);
      return release_pipeline(a.obj);
    }

    o.world.position_m = position(o);
    o.prediction = classify(o.world, cfg_.classifier, cfg_.colors.palette_size, classifier_rng_);
    log(event(EventKind::kClassify, a.obj)
            .with("eps", o.prediction.eps)
            .with("predicted", o.prediction.predicted_color)
            .with("correct", o.prediction.correct)
            .with("position_m", o.world.position_m));
    if (o.prediction.eps >= gate_) {
      enqueue_arm(a.obj);
      return release_pipeline(a.obj);
    }
    // Uncertain: hold the pipeline, slow the belt, take a second image.
    slow_down(a.obj);
    at(now_ + to_ticks(cfg_.classifier.second_image_time_s), SecondImageDone{a.obj});
  }

  void handle(const SecondImageDone& a) {
    ObjectState& o = objects_[a.obj];
    energy(EnergySource::kCompute, cfg_.compute_power_w,
           to_ticks(cfg_.classifier.second_image_time_s), a.obj);
    if (o.terminal) return;  // missed meanwhile; restore already happened

    const auto& m = cfg_.classifier;
    const double boost = classifier_rng_.uniform(m.second_image_boost_mean - m.second_image_boost_spread,
                                                 m.second_image_boost_mean + m.second_image_boost_spread);
    const double eps2 = std::clamp(o.prediction.eps + boost, m.eps_clamp_min, m.eps_clamp_max);
    o.prediction = predict_color(o.world.true_color, eps2, cfg_.colors.palette_size, classifier_rng_);
    log(event(EventKind::kSecondImage, a.obj)
            .with("eps", o.prediction.eps)
            .with("predicted", o.prediction.predicted_color)
            .with("correct", o.prediction.correct));

    const auto& events = log_.events();
    const std::int64_t from = now_ - to_ticks(cfg_.factors.window_s);
    const auto first = std::lower_bound(events.begin(), events.end(), from,
                                        [](const Event& e, std::int64_t t) { return e.t_ms < t; });
    const SystemFactors factors =
        measure_factors(std::span<const Event>(first, events.end()), cfg_.factors);
    const Decision d = decide(o.prediction.eps, factors, cfg_.policy, decision_rng_);

    Event ev = event(EventKind::kDecision, a.obj);
    ev.with("action", std::string(to_string(d.action)))
        .with("rationale", std::string(to_string(d.rationale)))
        .with("eps", o.prediction.eps);
    if (d.solution) {
      ++counters_.game_decisions;
      ev.with("t_h", factors.human_time)
          .with("t_a", factors.arm_time)
          .with("h", factors.human_interaction)
          .with("co2", factors.co2)
          .with("sigma_p1", d.solution->msne.sigma_p1_robot)
          .with("sigma_p2", d.solution->msne.sigma_p2_robot)
          .with("p_robot", *d.sampled_probability_robot)
          .with("payoff_p1", d.solution->msne_payoff_p1)
          .with("payoff_p2", d.solution->msne_payoff_p2)
          .with("fallback", d.sampling_fallback);
    }
    log(std::move(ev));

    if (d.action == Action::kRobot) {
      enqueue_arm(a.obj);
    } else {
      log(event(EventKind::kQueue, a.obj).with("reason", "uncertain"));
      close_conveyor_segment();
      segment_source_ = EnergySource::kHumanAid;
      enqueue_human(HumanTask::kClassify, a.obj);
    }
  }

  // -- robot arm -----------------------------------------------------------

  void enqueue_arm(std::int64_t id) {
    arm_queue_.push_back(id);
    start_arm();
  }

  void start_arm() {
    while (!arm_busy_ && !arm_queue_.empty()) {
      const std::int64_t id = arm_queue_.front();
      arm_queue_.pop_front();
      ObjectState& o = objects_[id];
      if (o.terminal) continue;
      take_off_belt(o);
      arm_busy_ = true;
      const std::int64_t ms = to_ticks(cfg_.arm.move_time_s);
      log(event(EventKind::kArmMove, id)
              .with("label", o.prediction.predicted_color)
              .with("duration_s", static_cast<double>(ms) / 1000.0));
      at(now_ + ms, ArmDone{id});
    }
  }

  void handle(const ArmDone& a) {
    ObjectState& o = objects_[a.obj];
    energy(EnergySource::kArm, cfg_.arm.power_w, to_ticks(cfg_.arm.move_time_s), a.obj);
    log(event(EventKind::kPlace, a.obj)
            .with("by", "robot")
            .with("label", o.prediction.predicted_color)
            .with("correct", o.prediction.correct));
    if (slowed_for_ == a.obj) restore(a.obj);
    if (o.prediction.correct) {
      ++counters_.robot_placed;
      finish(o, "robot_placed");
    } else {
      enqueue_human(HumanTask::kCorrect, a.obj);
    }
    arm_busy_ = false;
    start_arm();
  }

  // -- human operator ------------------------------------------------------

  void enqueue_human(HumanTask task, std::int64_t id) {
    human_queue_.push_back({task, id});
    start_human();
  }

  void start_human() {
    while (!human_busy_ && !human_queue_.empty()) {
      const auto [task, id] = human_queue_.front();
      human_queue_.pop_front();
      ObjectState& o = objects_[id];
      const bool from_belt = task == HumanTask::kLearn || task == HumanTask::kClassify;
      if (from_belt && o.terminal) continue;
      if (from_belt) take_off_belt(o);

      double seconds = 0.0;
      switch (task) {
        case HumanTask::kLearn:
        case HumanTask::kClassify:
          seconds = human_rng_.uniform(cfg_.human.reaction_time_mean_s - cfg_.human.reaction_time_spread_s,
                                       cfg_.human.reaction_time_mean_s + cfg_.human.reaction_time_spread_s);
          break;
        case HumanTask::kCorrect: seconds = cfg_.human.correction_time_s; break;
        case HumanTask::kRetrieve: seconds = cfg_.human.retrieval_time_s; break;
      }
      const std::int64_t ms = to_ticks(seconds);
      human_busy_ = true;
      ++counters_.human_interactions;
      log(event(EventKind::kHumanStart, id)
              .with("task", task_name(task))
              .with("duration_s", static_cast<double>(ms) / 1000.0));
      at(now_ + ms, HumanDone{task, id});
    }
  }

  void handle(const HumanDone& a) {
    ObjectState& o = objects_[a.obj];
    log(event(EventKind::kHumanDone, a.obj).with("task", task_name(a.task)));
    switch (a.task) {
      case HumanTask::kLearn:
        learned_[o.world.true_color] = true;
        log(event(EventKind::kLearned, a.obj).with("color", o.world.true_color));
        [[fallthrough]];
      case HumanTask::kClassify:
        log(event(EventKind::kPlace, a.obj)
                .with("by", "human")
                .with("label", o.world.true_color)
                .with("correct", true));
        if (slowed_for_ == a.obj) restore(a.obj);
        ++counters_.human_placed;
        finish(o, "human_placed");
        break;
      case HumanTask::kCorrect:
        ++counters_.corrections;
        log(event(EventKind::kCorrection, a.obj)
                .with("from", o.prediction.predicted_color)
                .with("to", o.world.true_color));
        ++counters_.robot_placed;
        finish(o, "robot_placed");
        break;
      case HumanTask::kRetrieve:
        break;
    }
    human_busy_ = false;
    start_human();
  }

  // -- picking window ------------------------------------------------------

  void handle(const ExitCheck& a) {
    ObjectState& o = objects_[a.obj];
    if (a.generation != o.exit_generation || !o.on_belt || o.terminal) return;
    if (position(o) < cfg_.conveyor.picking_area_m - 1e-9) {
      schedule_exit(o);
      return;
    }
    take_off_belt(o);
    o.terminal = true;
    ++counters_.missed;
    log(event(EventKind::kMiss, a.obj).with("position_m", position(o)));
    if (slowed_for_ == a.obj) restore(a.obj);
    // An object still in image processing frees the pipeline in ImageDone.
    enqueue_human(HumanTask::kRetrieve, a.obj);
  }

  const ScenarioConfig& cfg_;
  RandomSource arrivals_rng_;
  RandomSource world_rng_;
  RandomSource classifier_rng_;
  RandomSource human_rng_;
  RandomSource decision_rng_;
  const std::int64_t end_ms_;
  const double gate_;

  EventLog log_;
  EnergyLedger ledger_;
  SimCounters counters_;

  std::priority_queue<Pending, std::vector<Pending>, Later> agenda_;
  std::uint64_t seq_ = 0;
  std::int64_t now_ = 0;
  double next_arrival_s_ = 0.0;

  std::vector<ObjectState> objects_;
  std::vector<std::int64_t> belt_;
  std::vector<bool> learned_;
  std::vector<bool> seen_;

  double odometer_ = 0.0;
  bool slowed_ = false;
  std::optional<std::int64_t> slowed_for_;
  std::int64_t segment_start_ = 0;
  EnergySource segment_source_ = EnergySource::kConveyor;

  std::optional<std::int64_t> pipeline_busy_;
  std::deque<std::int64_t> pipeline_queue_;
  bool arm_busy_ = false;
  std::deque<std::int64_t> arm_queue_;
  bool human_busy_ = false;
  std::deque<std::pair<HumanTask, std::int64_t>> human_queue_;
};

}  // namespace

SimulationResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  return Simulator(cfg).run();
}

}  // namespace gresilience
