#pragma once

#include "lhcoh/ensemble.hpp"
#include "lhcoh/geometry.hpp"
#include "lhcoh/network.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lhcoh {

/// Malformed or inconsistent input document; what() lists the offending fields.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

NetworkSpec network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const NetworkSpec& spec);

GeometryConfig geometry_from_json(const nlohmann::json& doc);
nlohmann::json geometry_to_json(const GeometryConfig& cfg);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// FNV-1a 64-bit, rendered "fnv1a64:<16 hex digits>". Identifies inputs and
/// outputs in run manifests; not a cryptographic digest.
std::string content_digest(std::string_view bytes);

/// 12 significant digits, shortest general form, locale independent; "nan" for
/// non-finite values.
std::string format_number(double x);
std::string format_optional(const std::optional<double>& x);

inline constexpr std::string_view kToyCsvHeader = "m,eta_exact,eta_quad,tf_ps,tau_ps,discrepancy";
inline constexpr std::string_view kSweepCsvHeader =
    "m,sigma_cm1,eta_mean,eta_stderr,tf_mean_ps,tf_stderr_ps,tau_mean_ps,windows,realizations,"
    "undefined_tf";

std::string sweep_to_csv(const SweepResult& result);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  bool log_y = false;
};

/// Static SVG line plot with axes, ticks and a legend.
std::string render_svg(const PlotSpec& plot);

} // namespace lhcoh
