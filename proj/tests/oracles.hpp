#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's solver; every value is recomputed from first principles.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

// Cell payoffs indexed [p1 action][p2 action], 0 = robot, 1 = human.
struct Cells {
  std::array<std::array<double, 2>, 2> p1{};
  std::array<std::array<double, 2>, 2> p2{};
};

enum class Scale { kComplement, kSame, kUnit };

inline double scale_factor(Scale s, double eps) {
  switch (s) {
    case Scale::kComplement: return 1.0 - eps;
    case Scale::kSame: return eps;
    case Scale::kUnit: return 1.0;
  }
  return 0.0;
}

// Written out cell by cell from the game definition.
inline Cells cells(double t_h, double t_a, double h, double co2, double eps,
                   Scale scale = Scale::kComplement) {
  const double k = scale_factor(scale, eps);
  const double best = t_h + t_a + h + co2;   // both agree on a player's favourite
  const double second = t_h + t_a + co2 - h; // both agree on the other favourite
  const double third = t_h + co2 - h;        // P1 robot / P2 human
  const double worst = t_h + co2 - t_a - h;  // P1 human / P2 robot
  Cells c;
  c.p1[0][0] = eps * best;
  c.p1[1][1] = eps * second;
  c.p1[0][1] = eps * third;
  c.p1[1][0] = eps * worst;
  c.p2[1][1] = k * best;
  c.p2[0][0] = k * second;
  c.p2[1][0] = k * third;
  c.p2[0][1] = k * worst;
  return c;
}

struct Profile {
  int p1;
  int p2;
};

// Exhaustive deviation check; ties count as equilibria.
inline std::vector<Profile> brute_psne(const Cells& c) {
  std::vector<Profile> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const bool p1_ok = c.p1[i][j] >= c.p1[1 - i][j];
      const bool p2_ok = c.p2[i][j] >= c.p2[i][1 - j];
      if (p1_ok && p2_ok) out.push_back({i, j});
    }
  }
  return out;
}

// Expected payoff of a full mixed profile as the probability-weighted sum of
// the four cells. x, y = probability that P1, P2 play robot.
inline double four_cell(const std::array<std::array<double, 2>, 2>& t, double x, double y) {
  const double px[2] = {x, 1.0 - x};
  const double py[2] = {y, 1.0 - y};
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += px[i] * py[j] * t[i][j];
  return s;
}

struct Mixed {
  double x = 0.0;  // P1 robot probability
  double y = 0.0;  // P2 robot probability
};

// Mutual best response on a grid of the given step: pick the interior pair
// (x, y) where each strategy leaves the opponent closest to indifferent, i.e.
// where neither pure reply beats the other by more than on any other grid
// point.
inline Mixed grid_msne(const Cells& c, double step = 0.001) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  Mixed best;
  double gap_x = std::numeric_limits<double>::infinity();
  double gap_y = std::numeric_limits<double>::infinity();
  for (int k = 1; k < n; ++k) {
    const double p = k * step;
    // P2's gain from robot over human when P1 mixes with x = p.
    const double g2 = four_cell(c.p2, p, 1.0) - four_cell(c.p2, p, 0.0);
    if (std::abs(g2) < gap_x) {
      gap_x = std::abs(g2);
      best.x = p;
    }
    // P1's gain from robot over human when P2 mixes with y = p.
    const double g1 = four_cell(c.p1, 1.0, p) - four_cell(c.p1, 0.0, p);
    if (std::abs(g1) < gap_y) {
      gap_y = std::abs(g1);
      best.y = p;
    }
  }
  return best;
}

// Hand-rolled generator for valid game inputs.
struct GameDraw {
  double t_h, t_a, h, co2, eps;
};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng_() >> 11) * 0x1.0p-53);
  }
  GameDraw game() {
    // Scores live on [0.05, 1] after normalization; eps strictly inside (0, 1).
    return {uniform(0.05, 1.0), uniform(0.05, 1.0), uniform(0.05, 1.0),
            uniform(0.05, 1.0), uniform(0.01, 0.99)};
  }
  std::uint64_t next() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
