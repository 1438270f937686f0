#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "gresilience/decision.hpp"
#include "json.hpp"

namespace gresilience {

inline constexpr int kScenarioSchemaVersion = 1;

struct ConveyorModel {
  double speed_mps = 0.05;
  double picking_area_m = 0.6;  // pickable stretch measured from the camera
  double slowdown_factor = 0.5;
  double power_w = 30.0;
};

// Confidence distributions are uniform on [mean - spread, mean + spread],
// clamped to [eps_clamp_min, eps_clamp_max].
struct ClassifierModel {
  double eps_known_mean = 0.75;
  double eps_known_spread = 0.2;
  double eps_novel_mean = 0.35;
  double eps_novel_spread = 0.15;
  double second_image_boost_mean = 0.1;
  double second_image_boost_spread = 0.1;
  double image_time_s = 0.3;         // capture + similarity + classify
  double second_image_time_s = 0.5;  // capture + re-classify after slowdown
  double empty_image_prob = 0.05;
  // Confident-path threshold for policies without their own (always-robot).
  double confidence_gate = 0.7;
  double eps_clamp_min = 0.01;
  double eps_clamp_max = 0.99;
};

struct HumanModel {
  double reaction_time_mean_s = 4.0;
  double reaction_time_spread_s = 2.0;
  double correction_time_s = 6.0;
  double retrieval_time_s = 15.0;  // fetching a missed object downstream
};

struct ArmModel {
  double move_time_s = 3.0;
  double power_w = 60.0;
};

struct ColorModel {
  int palette_size = 6;
  int initially_known = 4;
};

// Min-max bounds for one raw measurement; `prior` stands in when the window
// holds no sample.
struct FactorBounds {
  double lo = 0.0;
  double hi = 1.0;
  double prior = 0.5;
};

struct NormalizationBounds {
  double window_s = 120.0;
  FactorBounds human_time_s{1.0, 10.0, 4.0};
  FactorBounds arm_time_s{0.5, 6.0, 3.0};
  FactorBounds human_interactions{0.0, 20.0, 2.0};
  FactorBounds co2e_g_per_object{0.0, 0.2, 0.06};
  double carbon_intensity_g_per_kwh = 475.0;  // mirrors the scenario value

  // Throws ValidationError ("factors.<name>") for zero-width or inverted bounds.
  void validate() const;
};

// Weights of the policy-comparison score (an aggregate for ranking runs).
struct ScoreWeights {
  double resilience = 0.5;
  double green = 0.3;
  double human = 0.2;
  double recovery_ref_s = 10.0;
  double co2e_ref_g_per_object = 0.06;
};

struct ScenarioConfig {
  std::string scenario_id = "scenario";
  std::uint64_t seed = 42;
  double duration_s = 600.0;
  double arrival_rate_per_min = 6.0;
  double known_color_fraction = 0.9;
  ColorModel colors;
  ConveyorModel conveyor;
  ClassifierModel classifier;
  HumanModel human;
  ArmModel arm;
  double compute_power_w = 45.0;
  double carbon_intensity_g_per_kwh = 475.0;
  NormalizationBounds factors;
  Policy policy = GresiliencePolicy{};
  ScoreWeights score;

  // Throws ValidationError with the dotted field path.
  void validate() const;
};

// Strict parse: unknown keys and wrong types are rejected with a field path.
// Missing keys take the defaults above.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::ordered_json scenario_to_json(const ScenarioConfig& cfg);

// Throws ValidationError for unreadable files or invalid content.
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Sets a numeric field addressed by dotted path (e.g. "policy.eps_high").
ScenarioConfig with_parameter(const ScenarioConfig& cfg, std::string_view path,
                              double value);

}  // namespace gresilience
