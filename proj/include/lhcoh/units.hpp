#pragma once

#include <string>
#include <string_view>

namespace lhcoh {

// Internal unit system: energies and rates in ps^-1 (angular frequency), hbar = 1.
inline constexpr double kTwoPiC = 0.1883651567;   // ps^-1 per cm^-1
inline constexpr double kHbarMeVps = 0.6582119569; // meV * ps

enum class Unit { InverseCentimeter, MilliElectronVolt, PerPicosecond, PerNanosecond };

struct UnitValue {
  double magnitude = 0.0;
  Unit unit = Unit::PerPicosecond;
};

double energy_to_internal(const UnitValue& v);
double internal_to(double internal, Unit unit);

inline double cm1(double wavenumber) { return energy_to_internal({wavenumber, Unit::InverseCentimeter}); }
inline double mev(double energy) { return energy_to_internal({energy, Unit::MilliElectronVolt}); }
inline double per_ns(double rate) { return energy_to_internal({rate, Unit::PerNanosecond}); }

/// Parses "<number><suffix>" with suffix one of meV, cm-1, /ps, /ns. A bare
/// number (no suffix) is rejected so that a missing unit never slips through.
UnitValue parse_unit_value(std::string_view text);

std::string_view unit_suffix(Unit unit);

} // namespace lhcoh
