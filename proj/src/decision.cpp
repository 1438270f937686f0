#include "gresilience/decision.hpp"

#include <charconv>
#include <cmath>

#include "gresilience/errors.hpp"

namespace gresilience {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string_view to_string(SamplingMode m) {
  switch (m) {
    case SamplingMode::kConditionalCoordination: return "conditional_coordination";
    case SamplingMode::kP1Marginal: return "p1_marginal";
    case SamplingMode::kP2Marginal: return "p2_marginal";
  }
  return "conditional_coordination";
}

SamplingMode parse_sampling_mode(std::string_view s) {
  if (s == "conditional_coordination") return SamplingMode::kConditionalCoordination;
  if (s == "p1_marginal") return SamplingMode::kP1Marginal;
  if (s == "p2_marginal") return SamplingMode::kP2Marginal;
  throw ValidationError("sampling", "expected conditional_coordination|p1_marginal|"
                                    "p2_marginal, got '" + std::string(s) + "'");
}

std::string_view to_string(Rationale r) {
  switch (r) {
    case Rationale::kHighConfidence: return "high_confidence";
    case Rationale::kLowConfidence: return "low_confidence";
    case Rationale::kGameSampled: return "game_sampled";
    case Rationale::kPolicyFixed: return "policy_fixed";
  }
  return "policy_fixed";
}

void validate(const Policy& p) {
  std::visit(overloaded{
                 [](const GresiliencePolicy& g) {
                   if (!is_probability(g.eps_low))
                     throw ValidationError("eps_low", "must lie in [0, 1]");
                   if (!is_probability(g.eps_high))
                     throw ValidationError("eps_high", "must lie in [0, 1]");
                   if (!(g.eps_low < g.eps_high))
                     throw ValidationError("eps_low", "must be < eps_high");
                 },
                 [](const ThresholdPolicy& t) {
                   if (!is_probability(t.cutoff))
                     throw ValidationError("cutoff", "must lie in [0, 1]");
                 },
                 [](const auto&) {},
             },
             p);
}

std::string policy_label(const Policy& p) {
  return std::visit(overloaded{
                        [](const GresiliencePolicy&) { return "gresilience"; },
                        [](const AlwaysRobotPolicy&) { return "always-robot"; },
                        [](const AlwaysHumanPolicy&) { return "always-human"; },
                        [](const ThresholdPolicy&) { return "threshold"; },
                    },
                    p);
}

Policy parse_policy(std::string_view s) {
  if (s == "gresilience") return GresiliencePolicy{};
  if (s == "always-robot") return AlwaysRobotPolicy{};
  if (s == "always-human") return AlwaysHumanPolicy{};
  if (s == "threshold") return ThresholdPolicy{};
  if (s.starts_with("threshold:")) {
    const std::string_view num = s.substr(10);
    ThresholdPolicy t;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), t.cutoff);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw ValidationError("policy", "bad threshold cutoff in '" + std::string(s) + "'");
    }
    validate(t);
    return t;
  }
  throw ValidationError("policy", "unknown policy '" + std::string(s) +
                                      "' (gresilience|always-robot|always-human|"
                                      "threshold[:cutoff])");
}

SamplingProbability sampling_probability(const MixedStrategyProfile& s,
                                         SamplingMode mode) {
  if (!is_probability(s.sigma_p1_robot))
    throw DomainError("sigma_p1_a1", "probability must lie in [0, 1]");
  if (!is_probability(s.sigma_p2_robot))
    throw DomainError("sigma_p2_a1", "probability must lie in [0, 1]");
  switch (mode) {
    case SamplingMode::kP1Marginal: return {s.sigma_p1_robot, false};
    case SamplingMode::kP2Marginal: return {s.sigma_p2_robot, false};
    case SamplingMode::kConditionalCoordination: {
      // Condition the product distribution on the coordinated outcomes.
      const double both_robot = s.sigma_p1_robot * s.sigma_p2_robot;
      const double both_human = (1.0 - s.sigma_p1_robot) * (1.0 - s.sigma_p2_robot);
      const double den = both_robot + both_human;
      if (den == 0.0) return {s.sigma_p1_robot, true};
      return {both_robot / den, false};
    }
  }
  return {s.sigma_p1_robot, false};
}

Decision decide(double eps, const SystemFactors& factors, const Policy& policy,
                RandomSource& rng) {
  if (!is_probability(eps)) throw DomainError("eps", "confidence must lie in [0, 1]");
  return std::visit(
      overloaded{
          [&](const GresiliencePolicy& g) {
            Decision d;
            if (eps >= g.eps_high) {
              d.action = Action::kRobot;
              d.rationale = Rationale::kHighConfidence;
              return d;
            }
            if (eps <= g.eps_low) {
              d.action = Action::kHuman;
              d.rationale = Rationale::kLowConfidence;
              return d;
            }
            EquilibriumSolution sol = solve(factors, eps, g.scale);
            const SamplingProbability p = sampling_probability(sol.msne, g.sampling);
            d.action = rng.uniform() < p.probability ? Action::kRobot : Action::kHuman;
            d.rationale = Rationale::kGameSampled;
            d.solution = std::move(sol);
            d.sampled_probability_robot = p.probability;
            d.sampling_fallback = p.fell_back;
            return d;
          },
          [&](const AlwaysRobotPolicy&) {
            return Decision{Action::kRobot, Rationale::kPolicyFixed, {}, {}, false};
          },
          [&](const AlwaysHumanPolicy&) {
            return Decision{Action::kHuman, Rationale::kPolicyFixed, {}, {}, false};
          },
          [&](const ThresholdPolicy& t) {
            const bool robot = eps >= t.cutoff;
            return Decision{robot ? Action::kRobot : Action::kHuman,
                            robot ? Rationale::kHighConfidence : Rationale::kLowConfidence,
                            {}, {}, false};
          },
      },
      policy);
}

}  // namespace gresilience
