#pragma once

#include <span>

#include "gresilience/event_log.hpp"
#include "gresilience/game.hpp"
#include "gresilience/scenario.hpp"

namespace gresilience {

inline constexpr double kFactorFloor = 0.05;
inline constexpr double kFactorCeiling = 1.0;

// Raw measurements over a trailing window of the event log.
struct RawFactors {
  double human_time_s = 0.0;        // mean human classification time
  double arm_time_s = 0.0;          // mean arm move time
  double human_interactions = 0.0;  // human tasks started in the window
  double co2e_g_per_object = 0.0;
};

// Min-max score mapped onto [0.05, 1]: lo -> 0.05, hi -> 1, clamped outside.
double normalize_score(double raw, const FactorBounds& b);

SystemFactors normalize_factors(const RawFactors& raw, const NormalizationBounds& bounds);

// Falls back to each factor's prior when the window holds no sample for it.
RawFactors raw_factors(std::span<const Event> window, const NormalizationBounds& bounds);

// Throws ValidationError for zero-width bounds.
SystemFactors measure_factors(std::span<const Event> window,
                              const NormalizationBounds& bounds);

}  // namespace gresilience
