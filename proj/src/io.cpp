#include "lhcoh/io.hpp"

#include "lhcoh/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lhcoh {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* field) {
  if (!doc.is_object() || !doc.contains(field))
    throw ConfigError(std::string(field) + ": missing");
  return doc.at(field);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number())
    throw ConfigError(field + ": expected a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(field + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

double rate(const json& v, const std::string& field) {
  if (!v.is_string())
    throw ConfigError(field + ": expected a string with unit, e.g. \"4/ps\" or \"1/ns\"");
  try {
    return energy_to_internal(parse_unit_value(v.get<std::string>()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

Unit unit_named(const std::string& name, const std::string& field) {
  if (name == "cm-1")
    return Unit::InverseCentimeter;
  if (name == "meV")
    return Unit::MilliElectronVolt;
  if (name == "/ps")
    return Unit::PerPicosecond;
  if (name == "/ns")
    return Unit::PerNanosecond;
  throw ConfigError(field + ": unknown unit '" + name + "' (cm-1, meV, /ps or /ns)");
}

Eigen::MatrixXd matrix(const json& doc, const char* field, std::size_t rows, std::size_t cols,
                       Unit unit, bool optional) {
  const auto r = static_cast<Eigen::Index>(rows);
  const auto c = static_cast<Eigen::Index>(cols);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, c);
  if (!doc.contains(field)) {
    if (optional || rows == 0 || cols == 0)
      return m;
    throw ConfigError(std::string(field) + ": missing");
  }
  const json& v = doc.at(field);
  if (!v.is_array() || v.size() != rows)
    throw ConfigError(std::string(field) + ": expected " + std::to_string(rows) + " rows");
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols)
      throw ConfigError(std::string(field) + "[" + std::to_string(i) + "]: expected " +
                        std::to_string(cols) + " columns");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = energy_to_internal(
          {number(v[i][j], std::string(field) + "[" + std::to_string(i) + "][" +
                               std::to_string(j) + "]"),
           unit});
  }
  return m;
}

json matrix_json(const Eigen::MatrixXd& m, Unit unit) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(internal_to(m(i, j), unit));
    rows.push_back(row);
  }
  return rows;
}

Vec3 vec3(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 3)
    throw ConfigError(field + ": expected [x, y, z]");
  return {number(v[0], field + "[0]"), number(v[1], field + "[1]"), number(v[2], field + "[2]")};
}

DipoleSite site_from_json(const json& v, const std::string& field, SiteRole role) {
  if (!v.is_object())
    throw ConfigError(field + ": expected an object");
  DipoleSite s;
  s.role = role;
  if (v.contains("role")) {
    const std::string r = v.at("role").get<std::string>();
    if (r == "acceptor")
      s.role = SiteRole::Acceptor;
    else if (r == "accessory")
      s.role = SiteRole::Accessory;
    else if (r == "donor")
      s.role = SiteRole::Donor;
    else
      throw ConfigError(field + ".role: expected donor, acceptor or accessory");
  }
  s.position = vec3(require(v, "position_nm"), field + ".position_nm");
  s.moment_direction = vec3(require(v, "moment"), field + ".moment");
  s.moment_magnitude = v.contains("magnitude") ? number(v.at("magnitude"), field + ".magnitude") : 1.0;
  s.base_energy_cm1 = number(require(v, "energy_cm1"), field + ".energy_cm1");
  return s;
}

json site_to_json(const DipoleSite& s) {
  const char* role = s.role == SiteRole::Acceptor    ? "acceptor"
                     : s.role == SiteRole::Accessory ? "accessory"
                                                     : "donor";
  return json{{"role", role},
              {"position_nm", {s.position.x(), s.position.y(), s.position.z()}},
              {"moment",
               {s.moment_direction.x(), s.moment_direction.y(), s.moment_direction.z()}},
              {"magnitude", s.moment_magnitude},
              {"energy_cm1", s.base_energy_cm1}};
}

// Shortest form that parses back to the same double.
std::string rate_string(double internal) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, internal);
  return std::string(buf, ptr) + "/ps";
}

} // namespace

NetworkSpec network_from_json(const json& doc) {
  try {
    const std::size_t m = count(require(doc, "donors"), "donors");
    const std::size_t n = count(require(doc, "acceptors"), "acceptors");
    const std::size_t a = doc.contains("accessories") ? count(doc.at("accessories"), "accessories") : 0;
    const Unit unit = unit_named(require(doc, "energy_unit").get<std::string>(), "energy_unit");

    NetworkSpec spec = NetworkSpec::zeros(m, n, a);
    const json& e = require(doc, "site_energies");
    if (!e.is_array() || e.size() != m + n + a)
      throw ConfigError("site_energies: expected " + std::to_string(m + n + a) + " entries");
    for (std::size_t i = 0; i < e.size(); ++i)
      spec.site_energies(static_cast<Eigen::Index>(i)) =
          energy_to_internal({number(e[i], "site_energies[" + std::to_string(i) + "]"), unit});
    spec.donor_donor = matrix(doc, "donor_donor", m, m, unit, false);
    spec.donor_acceptor = matrix(doc, "donor_acceptor", m, n, unit, false);
    spec.acceptor_acceptor = matrix(doc, "acceptor_acceptor", n, n, unit, true);
    spec.accessory_donor = matrix(doc, "accessory_donor", a, m, unit, true);
    spec.accessory_acceptor = matrix(doc, "accessory_acceptor", a, n, unit, true);
    spec.accessory_accessory = matrix(doc, "accessory_accessory", a, a, unit, true);
    spec.dissipation_rate = rate(require(doc, "dissipation_rate"), "dissipation_rate");
    spec.trapping_rate = rate(require(doc, "trapping_rate"), "trapping_rate");
    validate(spec);
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("network document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json network_to_json(const NetworkSpec& spec) {
  const Unit unit = Unit::PerPicosecond;
  json doc;
  doc["donors"] = spec.donors;
  doc["acceptors"] = spec.acceptors;
  doc["accessories"] = spec.accessories;
  doc["energy_unit"] = std::string(unit_suffix(unit));
  doc["site_energies"] = std::vector<double>(spec.site_energies.data(),
                                             spec.site_energies.data() + spec.site_energies.size());
  doc["donor_donor"] = matrix_json(spec.donor_donor, unit);
  doc["donor_acceptor"] = matrix_json(spec.donor_acceptor, unit);
  doc["acceptor_acceptor"] = matrix_json(spec.acceptor_acceptor, unit);
  doc["accessory_donor"] = matrix_json(spec.accessory_donor, unit);
  doc["accessory_acceptor"] = matrix_json(spec.accessory_acceptor, unit);
  doc["accessory_accessory"] = matrix_json(spec.accessory_accessory, unit);
  doc["dissipation_rate"] = rate_string(spec.dissipation_rate);
  doc["trapping_rate"] = rate_string(spec.trapping_rate);
  return doc;
}

GeometryConfig geometry_from_json(const json& doc) {
  try {
    GeometryConfig cfg;
    if (!doc.is_object())
      throw ConfigError("geometry document: expected a JSON object");
    cfg.label = doc.value("label", std::string{});
    cfg.nu1_cm1 = number(require(doc, "nu1_cm1"), "nu1_cm1");
    cfg.nu2_cm1 = number(require(doc, "nu2_cm1"), "nu2_cm1");
    cfg.coupling_prefactor =
        number(require(doc, "coupling_prefactor_cm1_nm3"), "coupling_prefactor_cm1_nm3");
    if (doc.contains("donor_accessory_coupling")) {
      if (!doc.at("donor_accessory_coupling").is_boolean())
        throw ConfigError("donor_accessory_coupling: expected true or false");
      cfg.donor_accessory_coupling = doc.at("donor_accessory_coupling").get<bool>();
    }
    cfg.dissipation_rate = rate(require(doc, "dissipation_rate"), "dissipation_rate");
    cfg.trapping_rate = rate(require(doc, "trapping_rate"), "trapping_rate");

    const bool has_ring = doc.contains("ring");
    const bool has_sites = doc.contains("donor_sites");
    if (has_ring == has_sites)
      throw ConfigError("ring / donor_sites: give exactly one of the two");
    if (has_ring) {
      const json& r = doc.at("ring");
      RingLayout layout;
      layout.donors = count(require(r, "donors"), "ring.donors");
      layout.radius_nm = number(require(r, "radius_nm"), "ring.radius_nm");
      layout.dimer_shift_deg = number(require(r, "dimer_shift_deg"), "ring.dimer_shift_deg");
      layout.inplane_tilt_deg = number(require(r, "inplane_tilt_deg"), "ring.inplane_tilt_deg");
      layout.out_of_plane_deg = number(require(r, "out_of_plane_deg"), "ring.out_of_plane_deg");
      layout.energy_cm1 = number(require(r, "energy_cm1"), "ring.energy_cm1");
      if (!(layout.radius_nm > 0.0))
        throw ConfigError("ring.radius_nm: must be > 0");
      cfg.donors = generate_ring(layout);
    } else {
      const json& list = doc.at("donor_sites");
      if (!list.is_array())
        throw ConfigError("donor_sites: expected an array");
      for (std::size_t i = 0; i < list.size(); ++i)
        cfg.donors.push_back(
            site_from_json(list[i], "donor_sites[" + std::to_string(i) + "]", SiteRole::Donor));
    }
    const json& rc = require(doc, "rc_sites");
    if (!rc.is_array())
      throw ConfigError("rc_sites: expected an array");
    for (std::size_t i = 0; i < rc.size(); ++i) {
      if (!rc[i].contains("role"))
        throw ConfigError("rc_sites[" + std::to_string(i) + "].role: missing");
      cfg.rc_sites.push_back(
          site_from_json(rc[i], "rc_sites[" + std::to_string(i) + "]", SiteRole::Acceptor));
    }
    validate(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("geometry document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json geometry_to_json(const GeometryConfig& cfg) {
  json doc;
  doc["label"] = cfg.label;
  doc["nu1_cm1"] = cfg.nu1_cm1;
  doc["nu2_cm1"] = cfg.nu2_cm1;
  doc["coupling_prefactor_cm1_nm3"] = cfg.coupling_prefactor;
  doc["donor_accessory_coupling"] = cfg.donor_accessory_coupling;
  doc["dissipation_rate"] = rate_string(cfg.dissipation_rate);
  doc["trapping_rate"] = rate_string(cfg.trapping_rate);
  json donors = json::array();
  for (const auto& s : cfg.donors)
    donors.push_back(site_to_json(s));
  doc["donor_sites"] = donors;
  json rc = json::array();
  for (const auto& s : cfg.rc_sites)
    rc.push_back(site_to_json(s));
  doc["rc_sites"] = rc;
  return doc;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error(path.string() + ": cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw std::runtime_error(path.string() + ": write failed");
}

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

std::string format_number(double x) {
  if (!std::isfinite(x))
    return "nan";
  if (x == 0.0)
    return "0"; // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  if (ec != std::errc{})
    throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_number(*x) : "nan";
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : result.rows) {
    const bool any = r.realizations > 0;
    out += std::to_string(r.m) + ',' + format_number(r.sigma_cm1) + ',' +
           (any ? format_number(r.eta_mean) : "nan") + ',' +
           (any ? format_number(r.eta_stderr) : "nan") + ',' + format_optional(r.tf_mean) + ',' +
           format_optional(r.tf_stderr) + ',' + (any ? format_number(r.tau_mean) : "nan") + ',' +
           std::to_string(r.windows) + ',' + std::to_string(r.realizations) + ',' +
           std::to_string(r.undefined_tf) + '\n';
  }
  return out;
}

namespace {

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  const double span = hi - lo;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (span / step <= target)
      break;
  }
  std::vector<double> ticks;
  const double first = std::ceil(lo / step);
  for (int i = 0; i <= 2 * target; ++i) {
    const double t = (first + i) * step;
    if (t > hi + 1e-9 * step)
      break;
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

} // namespace

std::string render_svg(const PlotSpec& plot) {
  constexpr double width = 720, height = 480, left = 80, right = 170, top = 40, bottom = 60;
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0.0))
        continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (x0 > x1) {
    x0 = 0;
    x1 = 1;
    y0 = 0;
    y1 = 1;
  }
  if (x1 - x0 <= 1e-9 * std::max(std::abs(x0), std::abs(x1)))
    x1 = x0 + 1;
  if (y1 - y0 <= 1e-9 * std::max(std::abs(y0), std::abs(y1))) {
    y0 -= 0.5 * std::max(1.0, std::abs(y0));
    y1 += 0.5 * std::max(1.0, std::abs(y1));
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream svg;
  svg.imbue(std::locale::classic());
  svg << std::setprecision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << escape_xml(plot.title) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : nice_ticks(x0, x1, 8)) {
    svg << "<line x1=\"" << px(t) << "\" y1=\"" << top + ph << "\" x2=\"" << px(t) << "\" y2=\""
        << top + ph + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(t) << "\" y=\"" << top + ph + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_number(t) << "</text>\n";
  }
  for (double t : nice_ticks(y0, y1, 6)) {
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << left << "\" y2=\""
        << py(t) << "\" stroke=\"black\"/>\n";
    const std::string label = plot.log_y ? "1e" + format_number(t) : format_number(t);
    svg << "<text x=\"" << left - 8 << "\" y=\"" << py(t) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label
        << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape_xml(plot.x_label) << "</text>\n";
  svg << "<text transform=\"translate(20," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape_xml(plot.y_label) << "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* colour = palette[k % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0.0))
        continue;
      svg << px(s.x[i]) << ',' << py(ty(s.y[i])) << ' ';
    }
    svg << "\"/>\n";
    const double ly = top + 14 + 18 * static_cast<double>(k);
    svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36
        << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(s.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace lhcoh
