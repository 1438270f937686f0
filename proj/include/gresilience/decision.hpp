#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "gresilience/game.hpp"
#include "gresilience/random.hpp"

namespace gresilience {

// How the two equilibrium mixes collapse into one executed action.
enum class SamplingMode { kConditionalCoordination, kP1Marginal, kP2Marginal };

std::string_view to_string(SamplingMode m);
SamplingMode parse_sampling_mode(std::string_view s);

// Thresholds at the extremes, game sampling in between.
struct GresiliencePolicy {
  double eps_low = 0.3;
  double eps_high = 0.7;
  SamplingMode sampling = SamplingMode::kConditionalCoordination;
  P2ScaleMode scale = P2ScaleMode::kComplement;
};
struct AlwaysRobotPolicy {};
struct AlwaysHumanPolicy {};
// Robot iff eps >= cutoff.
struct ThresholdPolicy {
  double cutoff = 0.5;
};

using Policy = std::variant<GresiliencePolicy, AlwaysRobotPolicy,
                            AlwaysHumanPolicy, ThresholdPolicy>;

// Throws ValidationError for eps_low >= eps_high, out-of-range values.
void validate(const Policy& p);

// "gresilience", "always-robot", "always-human", "threshold".
std::string policy_label(const Policy& p);

// Accepts the labels above; "threshold:<cutoff>" sets the cutoff.
Policy parse_policy(std::string_view s);

enum class Rationale { kHighConfidence, kLowConfidence, kGameSampled, kPolicyFixed };

std::string_view to_string(Rationale r);

struct Decision {
  Action action = Action::kHuman;
  Rationale rationale = Rationale::kPolicyFixed;
  // Present iff rationale == kGameSampled.
  std::optional<EquilibriumSolution> solution;
  std::optional<double> sampled_probability_robot;
  // The conditional rule had a zero denominator and fell back to P1's marginal.
  bool sampling_fallback = false;
};

struct SamplingProbability {
  double probability = 0.0;
  bool fell_back = false;
};

SamplingProbability sampling_probability(const MixedStrategyProfile& s,
                                         SamplingMode mode);

// eps is the raw confidence in [0, 1]; the game is only built strictly inside
// (eps_low, eps_high). Exactly one draw is taken from rng on the game path,
// none otherwise.
Decision decide(double eps, const SystemFactors& factors, const Policy& policy,
                RandomSource& rng);

}  // namespace gresilience
