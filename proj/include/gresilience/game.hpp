#pragma once

// The Gresilience Game: a 2x2 coordination game between a resilience player
// (P1, prefers the robot arm to act) and a green player (P2, prefers leaving
// the object to the human operator).

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gresilience {

enum class Action { kRobot = 0, kHuman = 1 };
enum class Player { kP1, kP2 };

std::string_view to_string(Action a);

struct ActionProfile {
  Action p1 = Action::kRobot;
  Action p2 = Action::kRobot;
  friend bool operator==(const ActionProfile&, const ActionProfile&) = default;
};

// Normalized, dimensionless factor scores. Produced upstream by
// measure_factors(); arm_time and human_interaction must be strictly positive
// for the payoff ordering to be strict.
struct SystemFactors {
  double human_time = 0.0;         // t_h
  double arm_time = 0.0;           // t_a
  double human_interaction = 0.0;  // h
  double co2 = 0.0;                // CO2 reduction score

  // Throws ValidationError naming the offending factor.
  void validate() const;
};

// Scale applied to the green player's payoffs.
enum class P2ScaleMode { kComplement, kSame, kUnit };

std::string_view to_string(P2ScaleMode m);
P2ScaleMode parse_scale_mode(std::string_view s);

// Throws DomainError unless 0 < eps < 1.
void check_confidence(double eps);

// Both players' payoffs for every action profile, indexed [p1 action][p2
// action]. Named accessors follow the published cell layout:
//   (R,R) -> (A, b)   (R,H) -> (C, d)
//   (H,R) -> (D, c)   (H,H) -> (B, a)
class BimatrixPayoffs {
 public:
  using Table = std::array<std::array<double, 2>, 2>;

  BimatrixPayoffs() = default;
  // No ordering check; hand-built matrices may be arbitrary.
  BimatrixPayoffs(const Table& p1, const Table& p2) : p1_(p1), p2_(p2) {}

  double p1(ActionProfile s) const { return p1_[idx(s.p1)][idx(s.p2)]; }
  double p2(ActionProfile s) const { return p2_[idx(s.p1)][idx(s.p2)]; }
  double payoff(Player who, ActionProfile s) const {
    return who == Player::kP1 ? p1(s) : p2(s);
  }

  double A() const { return p1_[0][0]; }
  double B() const { return p1_[1][1]; }
  double C() const { return p1_[0][1]; }
  double D() const { return p1_[1][0]; }
  double a() const { return p2_[1][1]; }
  double b() const { return p2_[0][0]; }
  double c() const { return p2_[1][0]; }
  double d() const { return p2_[0][1]; }

  // A > B > C > D, a > b > c > d, all finite.
  bool satisfies_ordering() const;

  // Multiply one player's payoffs by k.
  BimatrixPayoffs scaled(Player who, double k) const;

 private:
  static int idx(Action a) { return static_cast<int>(a); }
  Table p1_{};
  Table p2_{};
};

struct MixedStrategyProfile {
  double sigma_p1_robot = 0.0;  // probability P1 plays a1
  double sigma_p2_robot = 0.0;  // probability P2 plays a1
};

struct EquilibriumSolution {
  BimatrixPayoffs payoffs;
  std::vector<ActionProfile> psne;
  MixedStrategyProfile msne;
  double msne_payoff_p1 = 0.0;
  double msne_payoff_p2 = 0.0;
};

double payoff_p1(ActionProfile profile, const SystemFactors& f, double eps);
double payoff_p2(ActionProfile profile, const SystemFactors& f, double eps,
                 P2ScaleMode mode = P2ScaleMode::kComplement);

// Throws InvariantError if the generated matrix breaks the strict orderings.
BimatrixPayoffs build_bimatrix(const SystemFactors& f, double eps,
                               P2ScaleMode mode = P2ScaleMode::kComplement);

// Profiles where neither player gains by deviating alone (ties count), in the
// order (R,R), (R,H), (H,R), (H,H).
std::vector<ActionProfile> find_psne(const BimatrixPayoffs& m);

// Expected payoff of `action` for `who` when the opponent plays a1 with
// probability opponent_sigma_robot.
double expected_utility_action(const BimatrixPayoffs& m, Player who,
                               Action action, double opponent_sigma_robot);

// Closed-form mixed equilibrium of the 2x2 game. Throws DegenerateGameError
// when a denominator is zero.
MixedStrategyProfile msne(const BimatrixPayoffs& m);

// Bilinear expected payoffs (P1, P2) of a mixed profile.
std::pair<double, double> msne_expected_payoffs(const BimatrixPayoffs& m,
                                                const MixedStrategyProfile& s);

EquilibriumSolution solve(const SystemFactors& f, double eps,
                          P2ScaleMode mode = P2ScaleMode::kComplement);

}  // namespace gresilience
