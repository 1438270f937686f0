#include "gresilience/green_meter.hpp"

#include <cmath>
#include <string>

#include "gresilience/errors.hpp"

namespace gresilience {

std::string_view to_string(EnergySource s) {
  switch (s) {
    case EnergySource::kArm: return "ARM";
    case EnergySource::kCompute: return "COMPUTE";
    case EnergySource::kConveyor: return "CONVEYOR";
    case EnergySource::kHumanAid: return "HUMAN_AID";
  }
  return "COMPUTE";
}

EnergySource parse_energy_source(std::string_view s) {
  if (s == "ARM") return EnergySource::kArm;
  if (s == "COMPUTE") return EnergySource::kCompute;
  if (s == "CONVEYOR") return EnergySource::kConveyor;
  if (s == "HUMAN_AID") return EnergySource::kHumanAid;
  throw IntegrityError("unknown energy source '" + std::string(s) + "'");
}

const EnergyEntry& EnergyLedger::record(EnergySource source, double power_w,
                                        double duration_s) {
  if (!(std::isfinite(power_w) && power_w >= 0.0))
    throw DomainError("power_w", "must be finite and >= 0");
  if (!(std::isfinite(duration_s) && duration_s >= 0.0))
    throw DomainError("duration_s", "must be finite and >= 0");
  entries_.push_back({source, power_w, duration_s, power_w * duration_s});
  return entries_.back();
}

double EnergyLedger::total_joules() const {
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.joules;
  return sum;
}

EnergyLedger EnergyLedger::merged(const EnergyLedger& other) const {
  EnergyLedger out = *this;
  out.entries_.insert(out.entries_.end(), other.entries_.begin(), other.entries_.end());
  return out;
}

CO2Report co2e(const EnergyLedger& ledger, double carbon_intensity_g_per_kwh) {
  if (!(std::isfinite(carbon_intensity_g_per_kwh) && carbon_intensity_g_per_kwh >= 0.0))
    throw DomainError("carbon_intensity_g_per_kwh", "must be finite and >= 0");
  CO2Report r;
  r.carbon_intensity_g_per_kwh = carbon_intensity_g_per_kwh;
  for (const auto& e : ledger.entries()) {
    r.joules_by_source[static_cast<std::size_t>(e.source)] += e.joules;
    r.total_joules += e.joules;
  }
  r.total_kwh = r.total_joules / kJoulesPerKwh;
  r.co2e_g = r.total_kwh * carbon_intensity_g_per_kwh;
  return r;
}

}  // namespace gresilience
