#include "gresilience/factors.hpp"

#include <algorithm>

#include "gresilience/green_meter.hpp"

namespace gresilience {

double normalize_score(double raw, const FactorBounds& b) {
  const double unit = (raw - b.lo) / (b.hi - b.lo);
  return std::clamp(kFactorFloor + (kFactorCeiling - kFactorFloor) * unit, kFactorFloor,
                    kFactorCeiling);
}

SystemFactors normalize_factors(const RawFactors& raw, const NormalizationBounds& bounds) {
  bounds.validate();
  return {normalize_score(raw.human_time_s, bounds.human_time_s),
          normalize_score(raw.arm_time_s, bounds.arm_time_s),
          normalize_score(raw.human_interactions, bounds.human_interactions),
          normalize_score(raw.co2e_g_per_object, bounds.co2e_g_per_object)};
}

RawFactors raw_factors(std::span<const Event> window, const NormalizationBounds& bounds) {
  double human_sum = 0.0;
  int human_n = 0;
  double arm_sum = 0.0;
  int arm_n = 0;
  int interactions = 0;
  int arrivals = 0;
  double joules = 0.0;
  for (const Event& e : window) {
    switch (e.kind) {
      case EventKind::kHumanStart: {
        ++interactions;
        const auto task = e.text("task");
        if (task == "classify" || task == "learn") {
          human_sum += e.number("duration_s");
          ++human_n;
        }
        break;
      }
      case EventKind::kArmMove:
        arm_sum += e.number("duration_s");
        ++arm_n;
        break;
      case EventKind::kArrive:
        ++arrivals;
        break;
      case EventKind::kEnergy:
        joules += e.number("joules");
        break;
      default:
        break;
    }
  }
  RawFactors r;
  r.human_time_s = human_n ? human_sum / human_n : bounds.human_time_s.prior;
  r.arm_time_s = arm_n ? arm_sum / arm_n : bounds.arm_time_s.prior;
  r.human_interactions = window.empty() ? bounds.human_interactions.prior : interactions;
  r.co2e_g_per_object = arrivals ? joules / kJoulesPerKwh *
                                       bounds.carbon_intensity_g_per_kwh / arrivals
                                 : bounds.co2e_g_per_object.prior;
  return r;
}

SystemFactors measure_factors(std::span<const Event> window,
                              const NormalizationBounds& bounds) {
  bounds.validate();
  return normalize_factors(raw_factors(window, bounds), bounds);
}

}  // namespace gresilience
