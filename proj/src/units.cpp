#include "lhcoh/units.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lhcoh {

double energy_to_internal(const UnitValue& v) {
  switch (v.unit) {
  case Unit::InverseCentimeter:
    return v.magnitude * kTwoPiC;
  case Unit::MilliElectronVolt:
    return v.magnitude / kHbarMeVps;
  case Unit::PerPicosecond:
    return v.magnitude;
  case Unit::PerNanosecond:
    return v.magnitude / 1000.0;
  }
  throw std::invalid_argument("energy_to_internal: unsupported unit");
}

double internal_to(double internal, Unit unit) {
  switch (unit) {
  case Unit::InverseCentimeter:
    return internal / kTwoPiC;
  case Unit::MilliElectronVolt:
    return internal * kHbarMeVps;
  case Unit::PerPicosecond:
    return internal;
  case Unit::PerNanosecond:
    return internal * 1000.0;
  }
  throw std::invalid_argument("internal_to: unsupported unit");
}

std::string_view unit_suffix(Unit unit) {
  switch (unit) {
  case Unit::InverseCentimeter:
    return "cm-1";
  case Unit::MilliElectronVolt:
    return "meV";
  case Unit::PerPicosecond:
    return "/ps";
  case Unit::PerNanosecond:
    return "/ns";
  }
  return "?";
}

UnitValue parse_unit_value(std::string_view text) {
  const std::string original(text);
  while (!text.empty() && text.front() == ' ')
    text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ')
    text.remove_suffix(1);

  struct Suffix {
    std::string_view token;
    Unit unit;
  };
  static constexpr Suffix suffixes[] = {
      {"meV", Unit::MilliElectronVolt}, {"cm-1", Unit::InverseCentimeter},
      {"cm^-1", Unit::InverseCentimeter}, {"/ps", Unit::PerPicosecond},
      {"/ns", Unit::PerNanosecond}};

  for (const auto& s : suffixes) {
    if (text.size() > s.token.size() && text.ends_with(s.token)) {
      std::string_view number = text.substr(0, text.size() - s.token.size());
      while (!number.empty() && number.back() == ' ')
        number.remove_suffix(1);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
      if (ec != std::errc{} || ptr != number.data() + number.size() || !std::isfinite(value))
        throw std::invalid_argument("malformed number in '" + original + "'");
      return {value, s.unit};
    }
  }
  throw std::invalid_argument("value '" + original +
                              "' needs a unit suffix (meV, cm-1, /ps or /ns)");
}

} // namespace lhcoh
