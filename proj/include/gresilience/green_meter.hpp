#pragma once

#include <array>
#include <string_view>
#include <vector>

namespace gresilience {

enum class EnergySource { kArm = 0, kCompute = 1, kConveyor = 2, kHumanAid = 3 };
inline constexpr std::size_t kNumEnergySources = 4;
inline constexpr double kJoulesPerKwh = 3.6e6;
inline constexpr double kDefaultCarbonIntensity = 475.0;  // g CO2e / kWh

std::string_view to_string(EnergySource s);
EnergySource parse_energy_source(std::string_view s);

struct EnergyEntry {
  EnergySource source = EnergySource::kCompute;
  double power_w = 0.0;
  double duration_s = 0.0;
  double joules = 0.0;  // power_w * duration_s
};

struct CO2Report {
  std::array<double, kNumEnergySources> joules_by_source{};
  double total_joules = 0.0;
  double total_kwh = 0.0;
  double co2e_g = 0.0;
  double carbon_intensity_g_per_kwh = 0.0;
};

// Append-only energy accounting, owned by one simulation instance.
class EnergyLedger {
 public:
  // Throws DomainError for negative or non-finite inputs.
  const EnergyEntry& record(EnergySource source, double power_w, double duration_s);

  const std::vector<EnergyEntry>& entries() const { return entries_; }
  double total_joules() const;

  // Concatenation of two ledgers' entries.
  EnergyLedger merged(const EnergyLedger& other) const;

 private:
  std::vector<EnergyEntry> entries_;
};

// Throws DomainError for negative intensity.
CO2Report co2e(const EnergyLedger& ledger,
               double carbon_intensity_g_per_kwh = kDefaultCarbonIntensity);

}  // namespace gresilience
