#include "gresilience/game.hpp"

#include <cmath>
#include <tuple>

#include "gresilience/errors.hpp"

namespace gresilience {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(name, "probability must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

// The four factor combinations shared by both players' payoff formulas.
struct Terms {
  double best;         // t_h + t_a + h + co2
  double coordinated;  // t_h + t_a + co2 - h
  double mismatch;     // t_h + co2 - h
  double worst;        // t_h + co2 - t_a - h
};

Terms terms(const SystemFactors& f) {
  return {f.human_time + f.arm_time + f.human_interaction + f.co2,
          f.human_time + f.arm_time + f.co2 - f.human_interaction,
          f.human_time + f.co2 - f.human_interaction,
          f.human_time + f.co2 - f.arm_time - f.human_interaction};
}

double p2_scale(double eps, P2ScaleMode mode) {
  switch (mode) {
    case P2ScaleMode::kComplement: return 1.0 - eps;
    case P2ScaleMode::kSame: return eps;
    case P2ScaleMode::kUnit: return 1.0;
  }
  return 1.0;
}

}  // namespace

std::string_view to_string(Action a) {
  return a == Action::kRobot ? "robot" : "human";
}

std::string_view to_string(P2ScaleMode m) {
  switch (m) {
    case P2ScaleMode::kComplement: return "complement";
    case P2ScaleMode::kSame: return "same";
    case P2ScaleMode::kUnit: return "unit";
  }
  return "complement";
}

P2ScaleMode parse_scale_mode(std::string_view s) {
  if (s == "complement") return P2ScaleMode::kComplement;
  if (s == "same") return P2ScaleMode::kSame;
  if (s == "unit") return P2ScaleMode::kUnit;
  throw ValidationError("scale_mode", "expected complement|same|unit, got '" +
                                          std::string(s) + "'");
}

void SystemFactors::validate() const {
  const std::pair<const char*, double> all[] = {{"t_h", human_time},
                                                {"t_a", arm_time},
                                                {"h", human_interaction},
                                                {"co2", co2}};
  for (const auto& [name, v] : all) {
    if (!std::isfinite(v)) throw ValidationError(name, "factor must be finite");
    if (v < 0.0) throw ValidationError(name, "factor must be nonnegative");
  }
  if (arm_time <= 0.0) throw ValidationError("t_a", "factor must be > 0");
  if (human_interaction <= 0.0) throw ValidationError("h", "factor must be > 0");
}

void check_confidence(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("eps", "confidence must lie strictly in (0, 1), got " +
                                 std::to_string(eps));
  }
}

bool BimatrixPayoffs::satisfies_ordering() const {
  for (const auto& t : {p1_, p2_}) {
    for (const auto& row : t) {
      for (double v : row) {
        if (!std::isfinite(v)) return false;
      }
    }
  }
  return A() > B() && B() > C() && C() > D() && a() > b() && b() > c() &&
         c() > d();
}

BimatrixPayoffs BimatrixPayoffs::scaled(Player who, double k) const {
  BimatrixPayoffs out = *this;
  Table& t = who == Player::kP1 ? out.p1_ : out.p2_;
  for (auto& row : t) {
    for (double& v : row) v *= k;
  }
  return out;
}

double payoff_p1(ActionProfile profile, const SystemFactors& f, double eps) {
  f.validate();
  check_confidence(eps);
  const Terms t = terms(f);
  const bool p1_robot = profile.p1 == Action::kRobot;
  const bool p2_robot = profile.p2 == Action::kRobot;
  if (p1_robot && p2_robot) return eps * t.best;
  if (!p1_robot && !p2_robot) return eps * t.coordinated;
  if (p1_robot) return eps * t.mismatch;
  return eps * t.worst;
}

double payoff_p2(ActionProfile profile, const SystemFactors& f, double eps,
                 P2ScaleMode mode) {
  f.validate();
  check_confidence(eps);
  const Terms t = terms(f);
  const double s = p2_scale(eps, mode);
  const bool p1_robot = profile.p1 == Action::kRobot;
  const bool p2_robot = profile.p2 == Action::kRobot;
  // Mirror image of P1: the human action is P2's preferred one.
  if (!p1_robot && !p2_robot) return s * t.best;       // a
  if (p1_robot && p2_robot) return s * t.coordinated;  // b
  if (!p1_robot) return s * t.mismatch;                // c at (H,R)
  return s * t.worst;                                  // d at (R,H)
}

BimatrixPayoffs build_bimatrix(const SystemFactors& f, double eps,
                               P2ScaleMode mode) {
  BimatrixPayoffs::Table p1{};
  BimatrixPayoffs::Table p2{};
  for (Action x : {Action::kRobot, Action::kHuman}) {
    for (Action y : {Action::kRobot, Action::kHuman}) {
      const ActionProfile s{x, y};
      p1[static_cast<int>(x)][static_cast<int>(y)] = payoff_p1(s, f, eps);
      p2[static_cast<int>(x)][static_cast<int>(y)] = payoff_p2(s, f, eps, mode);
    }
  }
  BimatrixPayoffs m(p1, p2);
  if (!m.satisfies_ordering()) {
    throw InvariantError("generated bimatrix violates A>B>C>D / a>b>c>d");
  }
  return m;
}

std::vector<ActionProfile> find_psne(const BimatrixPayoffs& m) {
  std::vector<ActionProfile> out;
  for (Action x : {Action::kRobot, Action::kHuman}) {
    for (Action y : {Action::kRobot, Action::kHuman}) {
      const Action x_alt = x == Action::kRobot ? Action::kHuman : Action::kRobot;
      const Action y_alt = y == Action::kRobot ? Action::kHuman : Action::kRobot;
      const bool p1_stays = m.p1({x, y}) >= m.p1({x_alt, y});
      const bool p2_stays = m.p2({x, y}) >= m.p2({x, y_alt});
      if (p1_stays && p2_stays) out.push_back({x, y});
    }
  }
  return out;
}

double expected_utility_action(const BimatrixPayoffs& m, Player who,
                               Action action, double opponent_sigma_robot) {
  check_probability(opponent_sigma_robot, "opponent_sigma_a1");
  const double s = opponent_sigma_robot;
  if (who == Player::kP1) {
    return s * m.p1({action, Action::kRobot}) +
           (1.0 - s) * m.p1({action, Action::kHuman});
  }
  return s * m.p2({Action::kRobot, action}) +
         (1.0 - s) * m.p2({Action::kHuman, action});
}

MixedStrategyProfile msne(const BimatrixPayoffs& m) {
  const double den_p1 = m.a() + m.b() - m.c() - m.d();
  const double den_p2 = m.A() + m.B() - m.C() - m.D();
  if (den_p1 == 0.0 || den_p2 == 0.0) {
    throw DegenerateGameError("mixed equilibrium denominator is zero");
  }
  // Each player's mix makes the opponent indifferent.
  return {(m.a() - m.c()) / den_p1, (m.B() - m.C()) / den_p2};
}

std::pair<double, double> msne_expected_payoffs(const BimatrixPayoffs& m,
                                                const MixedStrategyProfile& s) {
  check_probability(s.sigma_p1_robot, "sigma_p1_a1");
  check_probability(s.sigma_p2_robot, "sigma_p2_a1");
  const double x = s.sigma_p1_robot;
  const double y = s.sigma_p2_robot;
  const double eu1 = (m.A() + m.B() - m.C() - m.D()) * x * y +
                     (m.C() - m.B()) * x + (m.D() - m.B()) * y + m.B();
  const double eu2 = (m.a() + m.b() - m.c() - m.d()) * x * y +
                     (m.d() - m.a()) * x + (m.c() - m.a()) * y + m.a();
  return {eu1, eu2};
}

EquilibriumSolution solve(const SystemFactors& f, double eps, P2ScaleMode mode) {
  EquilibriumSolution sol;
  sol.payoffs = build_bimatrix(f, eps, mode);
  sol.psne = find_psne(sol.payoffs);
  sol.msne = msne(sol.payoffs);
  std::tie(sol.msne_payoff_p1, sol.msne_payoff_p2) =
      msne_expected_payoffs(sol.payoffs, sol.msne);
  return sol;
}

}  // namespace gresilience
