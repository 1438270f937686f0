#include <cmath>

#include "doctest.h"
#include "gresilience/decision.hpp"
#include "gresilience/errors.hpp"
#include "oracles.hpp"

using namespace gresilience;

namespace {
const SystemFactors kF{0.5, 0.4, 0.3, 0.6};
}

TEST_CASE("confidence bands bypass the game and the rng") {
  RandomSource rng(1);
  const GresiliencePolicy p;
  const Decision hi = decide(0.7, kF, p, rng);
  CHECK(hi.action == Action::kRobot);
  CHECK(hi.rationale == Rationale::kHighConfidence);
  CHECK_FALSE(hi.solution.has_value());
  const Decision lo = decide(0.3, kF, p, rng);
  CHECK(lo.action == Action::kHuman);
  CHECK(lo.rationale == Rationale::kLowConfidence);
  CHECK(decide(1.0, kF, p, rng).action == Action::kRobot);
  CHECK(decide(0.0, kF, p, rng).action == Action::kHuman);
  CHECK(rng.draws() == 0);
}

TEST_CASE("game path consumes exactly one draw and carries the solution") {
  RandomSource rng(2);
  const Decision d = decide(0.5, kF, GresiliencePolicy{}, rng);
  CHECK(rng.draws() == 1);
  CHECK(d.rationale == Rationale::kGameSampled);
  REQUIRE(d.solution.has_value());
  REQUIRE(d.sampled_probability_robot.has_value());
  const auto& s = d.solution->msne;
  const double x = s.sigma_p1_robot, y = s.sigma_p2_robot;
  CHECK(*d.sampled_probability_robot == doctest::Approx(x * y / (x * y + (1 - x) * (1 - y))));
}

TEST_CASE("sampling rules") {
  const MixedStrategyProfile s{0.6, 0.2};
  CHECK(sampling_probability(s, SamplingMode::kP1Marginal).probability == 0.6);
  CHECK(sampling_probability(s, SamplingMode::kP2Marginal).probability == 0.2);
  CHECK(sampling_probability(s, SamplingMode::kConditionalCoordination).probability ==
        doctest::Approx(0.12 / (0.12 + 0.32)));
  const auto fb = sampling_probability({1.0, 0.0}, SamplingMode::kConditionalCoordination);
  CHECK(fb.fell_back);
  CHECK(fb.probability == 1.0);
}

TEST_CASE("robot frequency follows the sampling probability") {
  for (SamplingMode mode :
       {SamplingMode::kConditionalCoordination, SamplingMode::kP1Marginal, SamplingMode::kP2Marginal}) {
    GresiliencePolicy p;
    p.sampling = mode;
    RandomSource rng(99);
    int robot = 0;
    double prob = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const Decision d = decide(0.5, kF, p, rng);
      prob = *d.sampled_probability_robot;
      robot += d.action == Action::kRobot;
    }
    CHECK(std::abs(robot / 10000.0 - prob) <= 0.02);
  }
}

TEST_CASE("same seed gives the same decisions") {
  RandomSource a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double eps = 0.31 + 0.38 * (i % 100) / 100.0;
    CHECK(decide(eps, kF, GresiliencePolicy{}, a).action ==
          decide(eps, kF, GresiliencePolicy{}, b).action);
  }
}

TEST_CASE("fixed and threshold policies") {
  RandomSource rng(3);
  CHECK(decide(0.99, kF, AlwaysHumanPolicy{}, rng).action == Action::kHuman);
  CHECK(decide(0.01, kF, AlwaysRobotPolicy{}, rng).action == Action::kRobot);
  CHECK(decide(0.5, kF, AlwaysRobotPolicy{}, rng).rationale == Rationale::kPolicyFixed);
  const ThresholdPolicy t{0.6};
  CHECK(decide(0.6, kF, t, rng).action == Action::kRobot);
  CHECK(decide(0.59, kF, t, rng).action == Action::kHuman);
  CHECK(rng.draws() == 0);
}

TEST_CASE("policy validation and parsing") {
  CHECK_THROWS_AS(validate(GresiliencePolicy{0.7, 0.3}), ValidationError);
  CHECK_THROWS_AS(validate(GresiliencePolicy{0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(validate(ThresholdPolicy{1.2}), ValidationError);
  CHECK_NOTHROW(validate(AlwaysRobotPolicy{}));
  CHECK(policy_label(parse_policy("always-human")) == "always-human");
  const Policy t = parse_policy("threshold:0.65");
  REQUIRE(std::holds_alternative<ThresholdPolicy>(t));
  CHECK(std::get<ThresholdPolicy>(t).cutoff == 0.65);
  CHECK_THROWS_AS(parse_policy("threshold:x"), ValidationError);
  CHECK_THROWS_AS(parse_policy("random"), ValidationError);
  CHECK(parse_sampling_mode("p2_marginal") == SamplingMode::kP2Marginal);
}

TEST_CASE("decide rejects confidence outside [0, 1]") {
  RandomSource rng(4);
  CHECK_THROWS_AS(decide(1.01, kF, GresiliencePolicy{}, rng), DomainError);
  CHECK_THROWS_AS(decide(-0.01, kF, AlwaysRobotPolicy{}, rng), DomainError);
}

TEST_CASE("random source") {
  RandomSource a(10), b(10);
  for (int i = 0; i < 100; ++i) REQUIRE(a.uniform() == b.uniform());
  RandomSource r(11);
  double sum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += r.exponential(2.0);
  }
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.03));
  CHECK(r.uniform(3.0, 3.0) == 3.0);
  for (int i = 0; i < 1000; ++i) REQUIRE(r.index(6) < 6);
  CHECK(derive_seed(42, 1) != derive_seed(42, 2));
  CHECK(derive_seed(42, 1) == derive_seed(42, 1));
}
