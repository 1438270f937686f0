#include "gresilience/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gresilience/errors.hpp"

namespace gresilience {

namespace {

using nlohmann::json;

// Walks one JSON object, recording which keys were consumed so leftovers can
// be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_or_root(), "expected an object");
  }

  void number(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ValidationError(field(key), "expected a number");
      out = v->get<double>();
    }
  }

  void integer(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) throw ValidationError(field(key), "expected an integer");
      out = v->get<int>();
    }
  }

  void unsigned_integer(const char* key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned())
        throw ValidationError(field(key), "expected a nonnegative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void string(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ValidationError(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  // Reader over a nested object; an absent key reads as an empty object.
  ObjectReader child(const char* key) {
    static const json kEmpty = json::object();
    const json* v = take(key);
    return ObjectReader(v ? *v : kEmpty, field(key));
  }

  std::string field(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  // Throws on any key that was never consumed.
  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ValidationError(field(k.c_str()), "unknown key");
    }
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  std::string path_or_root() const { return path_.empty() ? "<root>" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_bounds(ObjectReader r, FactorBounds& b) {
  r.number("lo", b.lo);
  r.number("hi", b.hi);
  r.number("prior", b.prior);
  r.finish();
}

Policy read_policy(ObjectReader r) {
  std::string kind = "gresilience";
  r.string("kind", kind);
  Policy p;
  if (kind == "gresilience") {
    GresiliencePolicy g;
    r.number("eps_low", g.eps_low);
    r.number("eps_high", g.eps_high);
    std::string sampling(to_string(g.sampling));
    r.string("sampling", sampling);
    std::string scale(to_string(g.scale));
    r.string("scale", scale);
    try {
      g.sampling = parse_sampling_mode(sampling);
    } catch (const ValidationError& e) {
      throw ValidationError(r.field("sampling"), e.what());
    }
    try {
      g.scale = parse_scale_mode(scale);
    } catch (const ValidationError& e) {
      throw ValidationError(r.field("scale"), e.what());
    }
    p = g;
  } else if (kind == "threshold") {
    ThresholdPolicy t;
    r.number("cutoff", t.cutoff);
    p = t;
  } else if (kind == "always-robot") {
    p = AlwaysRobotPolicy{};
  } else if (kind == "always-human") {
    p = AlwaysHumanPolicy{};
  } else {
    throw ValidationError(r.field("kind"), "unknown policy kind '" + kind + "'");
  }
  r.finish();
  return p;
}

void require(bool ok, const std::string& field, const char* what) {
  if (!ok) throw ValidationError(field, what);
}

void positive(double v, const std::string& field) {
  require(std::isfinite(v) && v > 0.0, field, "must be finite and > 0");
}

void nonnegative(double v, const std::string& field) {
  require(std::isfinite(v) && v >= 0.0, field, "must be finite and >= 0");
}

void probability(double v, const std::string& field) {
  require(v >= 0.0 && v <= 1.0, field, "must lie in [0, 1]");
}

nlohmann::ordered_json bounds_json(const FactorBounds& b) {
  return {{"lo", b.lo}, {"hi", b.hi}, {"prior", b.prior}};
}

}  // namespace

void NormalizationBounds::validate() const {
  positive(window_s, "factors.window_s");
  const std::pair<const char*, const FactorBounds*> all[] = {
      {"factors.human_time_s", &human_time_s},
      {"factors.arm_time_s", &arm_time_s},
      {"factors.human_interactions", &human_interactions},
      {"factors.co2e_g_per_object", &co2e_g_per_object}};
  for (const auto& [name, b] : all) {
    require(std::isfinite(b->lo) && std::isfinite(b->hi) && std::isfinite(b->prior),
            name, "bounds must be finite");
    require(b->hi != b->lo, name, "zero-width normalization bounds");
    require(b->hi > b->lo, name, "hi must exceed lo");
  }
  nonnegative(carbon_intensity_g_per_kwh, "carbon_intensity_g_per_kwh");
}

void ScenarioConfig::validate() const {
  require(!scenario_id.empty(), "scenario_id", "must not be empty");
  require(scenario_id.find_first_of(",;=\n\"") == std::string::npos, "scenario_id",
          "must not contain , ; = \" or newlines");
  positive(duration_s, "duration_s");
  positive(arrival_rate_per_min, "arrival_rate_per_min");
  probability(known_color_fraction, "known_color_fraction");
  require(colors.palette_size >= 1, "colors.palette_size", "must be >= 1");
  require(colors.initially_known >= 0 && colors.initially_known <= colors.palette_size,
          "colors.initially_known", "must lie in [0, palette_size]");

  positive(conveyor.speed_mps, "conveyor.speed_mps");
  positive(conveyor.picking_area_m, "conveyor.picking_area_m");
  require(conveyor.slowdown_factor > 0.0 && conveyor.slowdown_factor <= 1.0,
          "conveyor.slowdown_factor", "must lie in (0, 1]");
  positive(conveyor.power_w, "conveyor.power_w");

  probability(classifier.eps_known_mean, "classifier.eps_known_mean");
  nonnegative(classifier.eps_known_spread, "classifier.eps_known_spread");
  probability(classifier.eps_novel_mean, "classifier.eps_novel_mean");
  nonnegative(classifier.eps_novel_spread, "classifier.eps_novel_spread");
  require(std::isfinite(classifier.second_image_boost_mean),
          "classifier.second_image_boost_mean", "must be finite");
  nonnegative(classifier.second_image_boost_spread, "classifier.second_image_boost_spread");
  positive(classifier.image_time_s, "classifier.image_time_s");
  positive(classifier.second_image_time_s, "classifier.second_image_time_s");
  probability(classifier.empty_image_prob, "classifier.empty_image_prob");
  probability(classifier.confidence_gate, "classifier.confidence_gate");
  probability(classifier.eps_clamp_min, "classifier.eps_clamp_min");
  probability(classifier.eps_clamp_max, "classifier.eps_clamp_max");
  require(classifier.eps_clamp_min <= classifier.eps_clamp_max, "classifier.eps_clamp_min",
          "must be <= eps_clamp_max");

  positive(human.reaction_time_mean_s, "human.reaction_time_mean_s");
  nonnegative(human.reaction_time_spread_s, "human.reaction_time_spread_s");
  require(human.reaction_time_spread_s < human.reaction_time_mean_s,
          "human.reaction_time_spread_s", "must be < reaction_time_mean_s");
  positive(human.correction_time_s, "human.correction_time_s");
  positive(human.retrieval_time_s, "human.retrieval_time_s");

  positive(arm.move_time_s, "arm.move_time_s");
  positive(arm.power_w, "arm.power_w");
  positive(compute_power_w, "compute.power_w");
  nonnegative(carbon_intensity_g_per_kwh, "carbon_intensity_g_per_kwh");

  factors.validate();

  try {
    gresilience::validate(policy);
  } catch (const ValidationError& e) {
    throw ValidationError("policy." + e.field(), e.what());
  }

  positive(score.resilience, "score.w_resilience");
  positive(score.green, "score.w_green");
  positive(score.human, "score.w_human");
  positive(score.recovery_ref_s, "score.recovery_ref_s");
  positive(score.co2e_ref_g_per_object, "score.co2e_ref_g_per_object");
}

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  ScenarioConfig cfg;
  ObjectReader root(j, "");
  int version = kScenarioSchemaVersion;
  root.integer("schema_version", version);
  if (version != kScenarioSchemaVersion) {
    throw ValidationError("schema_version", "unsupported version " + std::to_string(version));
  }
  root.string("scenario_id", cfg.scenario_id);
  root.unsigned_integer("seed", cfg.seed);
  root.number("duration_s", cfg.duration_s);
  root.number("arrival_rate_per_min", cfg.arrival_rate_per_min);
  root.number("known_color_fraction", cfg.known_color_fraction);
  {
    ObjectReader r = root.child("colors");
    r.integer("palette_size", cfg.colors.palette_size);
    r.integer("initially_known", cfg.colors.initially_known);
    r.finish();
  }
  {
    ObjectReader r = root.child("conveyor");
    r.number("speed_mps", cfg.conveyor.speed_mps);
    r.number("picking_area_m", cfg.conveyor.picking_area_m);
    r.number("slowdown_factor", cfg.conveyor.slowdown_factor);
    r.number("power_w", cfg.conveyor.power_w);
    r.finish();
  }
  {
    ObjectReader r = root.child("classifier");
    auto& c = cfg.classifier;
    r.number("eps_known_mean", c.eps_known_mean);
    r.number("eps_known_spread", c.eps_known_spread);
    r.number("eps_novel_mean", c.eps_novel_mean);
    r.number("eps_novel_spread", c.eps_novel_spread);
    r.number("second_image_boost_mean", c.second_image_boost_mean);
    r.number("second_image_boost_spread", c.second_image_boost_spread);
    r.number("image_time_s", c.image_time_s);
    r.number("second_image_time_s", c.second_image_time_s);
    r.number("empty_image_prob", c.empty_image_prob);
    r.number("confidence_gate", c.confidence_gate);
    r.number("eps_clamp_min", c.eps_clamp_min);
    r.number("eps_clamp_max", c.eps_clamp_max);
    r.finish();
  }
  {
    ObjectReader r = root.child("human");
    r.number("reaction_time_mean_s", cfg.human.reaction_time_mean_s);
    r.number("reaction_time_spread_s", cfg.human.reaction_time_spread_s);
    r.number("correction_time_s", cfg.human.correction_time_s);
    r.number("retrieval_time_s", cfg.human.retrieval_time_s);
    r.finish();
  }
  {
    ObjectReader r = root.child("arm");
    r.number("move_time_s", cfg.arm.move_time_s);
    r.number("power_w", cfg.arm.power_w);
    r.finish();
  }
  {
    ObjectReader r = root.child("compute");
    r.number("power_w", cfg.compute_power_w);
    r.finish();
  }
  root.number("carbon_intensity_g_per_kwh", cfg.carbon_intensity_g_per_kwh);
  {
    ObjectReader r = root.child("factors");
    r.number("window_s", cfg.factors.window_s);
    read_bounds(r.child("human_time_s"), cfg.factors.human_time_s);
    read_bounds(r.child("arm_time_s"), cfg.factors.arm_time_s);
    read_bounds(r.child("human_interactions"), cfg.factors.human_interactions);
    read_bounds(r.child("co2e_g_per_object"), cfg.factors.co2e_g_per_object);
    r.finish();
  }
  cfg.factors.carbon_intensity_g_per_kwh = cfg.carbon_intensity_g_per_kwh;
  if (root.has("policy")) cfg.policy = read_policy(root.child("policy"));
  {
    ObjectReader r = root.child("score");
    r.number("w_resilience", cfg.score.resilience);
    r.number("w_green", cfg.score.green);
    r.number("w_human", cfg.score.human);
    r.number("recovery_ref_s", cfg.score.recovery_ref_s);
    r.number("co2e_ref_g_per_object", cfg.score.co2e_ref_g_per_object);
    r.finish();
  }
  root.finish();
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json scenario_to_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["scenario_id"] = cfg.scenario_id;
  j["seed"] = cfg.seed;
  j["duration_s"] = cfg.duration_s;
  j["arrival_rate_per_min"] = cfg.arrival_rate_per_min;
  j["known_color_fraction"] = cfg.known_color_fraction;
  j["colors"] = {{"palette_size", cfg.colors.palette_size},
                 {"initially_known", cfg.colors.initially_known}};
  j["conveyor"] = {{"speed_mps", cfg.conveyor.speed_mps},
                   {"picking_area_m", cfg.conveyor.picking_area_m},
                   {"slowdown_factor", cfg.conveyor.slowdown_factor},
                   {"power_w", cfg.conveyor.power_w}};
  const auto& c = cfg.classifier;
  j["classifier"] = {{"eps_known_mean", c.eps_known_mean},
                     {"eps_known_spread", c.eps_known_spread},
                     {"eps_novel_mean", c.eps_novel_mean},
                     {"eps_novel_spread", c.eps_novel_spread},
                     {"second_image_boost_mean", c.second_image_boost_mean},
                     {"second_image_boost_spread", c.second_image_boost_spread},
                     {"image_time_s", c.image_time_s},
                     {"second_image_time_s", c.second_image_time_s},
                     {"empty_image_prob", c.empty_image_prob},
                     {"confidence_gate", c.confidence_gate},
                     {"eps_clamp_min", c.eps_clamp_min},
                     {"eps_clamp_max", c.eps_clamp_max}};
  j["human"] = {{"reaction_time_mean_s", cfg.human.reaction_time_mean_s},
                {"reaction_time_spread_s", cfg.human.reaction_time_spread_s},
                {"correction_time_s", cfg.human.correction_time_s},
                {"retrieval_time_s", cfg.human.retrieval_time_s}};
  j["arm"] = {{"move_time_s", cfg.arm.move_time_s}, {"power_w", cfg.arm.power_w}};
  j["compute"] = {{"power_w", cfg.compute_power_w}};
  j["carbon_intensity_g_per_kwh"] = cfg.carbon_intensity_g_per_kwh;
  j["factors"] = {{"window_s", cfg.factors.window_s},
                  {"human_time_s", bounds_json(cfg.factors.human_time_s)},
                  {"arm_time_s", bounds_json(cfg.factors.arm_time_s)},
                  {"human_interactions", bounds_json(cfg.factors.human_interactions)},
                  {"co2e_g_per_object", bounds_json(cfg.factors.co2e_g_per_object)}};
  nlohmann::ordered_json p;
  p["kind"] = policy_label(cfg.policy);
  if (const auto* g = std::get_if<GresiliencePolicy>(&cfg.policy)) {
    p["eps_low"] = g->eps_low;
    p["eps_high"] = g->eps_high;
    p["sampling"] = to_string(g->sampling);
    p["scale"] = to_string(g->scale);
  } else if (const auto* t = std::get_if<ThresholdPolicy>(&cfg.policy)) {
    p["cutoff"] = t->cutoff;
  }
  j["policy"] = std::move(p);
  j["score"] = {{"w_resilience", cfg.score.resilience},
                {"w_green", cfg.score.green},
                {"w_human", cfg.score.human},
                {"recovery_ref_s", cfg.score.recovery_ref_s},
                {"co2e_ref_g_per_object", cfg.score.co2e_ref_g_per_object}};
  return j;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario", "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("scenario", std::string("JSON parse error: ") + e.what());
  }
  return scenario_from_json(j);
}

ScenarioConfig with_parameter(const ScenarioConfig& cfg, std::string_view path,
                              double value) {
  // Round-trip through text: the canonical form is ordered, the reader is not.
  nlohmann::json j = nlohmann::json::parse(scenario_to_json(cfg).dump());
  nlohmann::json* node = &j;
  std::string_view rest = path;
  while (true) {
    const std::size_t dot = rest.find('.');
    const std::string key(rest.substr(0, dot));
    if (!node->is_object() || !node->contains(key)) {
      throw ValidationError(std::string(path), "no such scenario parameter");
    }
    node = &(*node)[key];
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  if (node->is_number_integer()) {
    if (value != std::floor(value)) {
      throw ValidationError(std::string(path), "integer parameter needs an integral value");
    }
    if (node->is_number_unsigned() && value >= 0.0) {
      *node = static_cast<std::uint64_t>(value);
    } else {
      *node = static_cast<std::int64_t>(value);
    }
  } else if (node->is_number()) {
    *node = value;
  } else {
    throw ValidationError(std::string(path), "parameter is not numeric");
  }
  return scenario_from_json(j);
}

}  // namespace gresilience
