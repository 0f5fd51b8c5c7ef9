#include "lhcoh/geometry.hpp"
#include "lhcoh/io.hpp"
#include "lhcoh/units.hpp"

#include <doctest.h>

#include <json.hpp>

using namespace lhcoh;
using nlohmann::json;

TEST_CASE("FNV-1a reference digests") {
  CHECK(content_digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(content_digest("a") == "fnv1a64:af63dc4c8601ec8c");
  CHECK(content_digest("foobar") == "fnv1a64:85944171f73967e8");
}

TEST_CASE("numbers are formatted locale-independently") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_optional(std::nullopt) == "nan");
}

TEST_CASE("network JSON round trip keeps every field") {
  const NetworkSpec spec = build_lh1_rc(default_geometry_config());
  const NetworkSpec back = network_from_json(json::parse(network_to_json(spec).dump()));
  CHECK(back.dimension() == spec.dimension());
  CHECK((back.hermitian_part() - spec.hermitian_part()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(back.dissipation_rate == spec.dissipation_rate);
  CHECK(back.trapping_rate == spec.trapping_rate);
}

TEST_CASE("network JSON accepts explicit units") {
  const json doc = json::parse(R"({
    "donors": 2, "acceptors": 1, "energy_unit": "meV",
    "site_energies": [0, 0, 1],
    "donor_donor": [[0, 10], [10, 0]],
    "donor_acceptor": [[1], [1]],
    "dissipation_rate": "1/ns", "trapping_rate": "4/ps"
  })");
  const NetworkSpec s = network_from_json(doc);
  CHECK(s.donor_donor(0, 1) == doctest::Approx(mev(10.0)));
  CHECK(s.site_energies(2) == doctest::Approx(mev(1.0)));
  CHECK(s.dissipation_rate == doctest::Approx(1e-3));
  CHECK(s.accessories == 0);
}

TEST_CASE("network JSON errors name the field") {
  json doc = json::parse(R"({"donors": 2, "acceptors": 1, "energy_unit": "meV",
    "site_energies": [0, 0, 1], "donor_donor": [[0, 10], [9, 0]], "donor_acceptor": [[1], [1]],
    "dissipation_rate": "1/ns", "trapping_rate": "4/ps"})");
  CHECK_THROWS_WITH_AS(network_from_json(doc), doctest::Contains("donor_donor"), ConfigError);
  doc["donor_donor"] = json::parse("[[0, 10], [10, 0]]");
  doc["trapping_rate"] = 4;
  CHECK_THROWS_WITH_AS(network_from_json(doc), doctest::Contains("trapping_rate"), ConfigError);
  doc["trapping_rate"] = "4";
  CHECK_THROWS_WITH_AS(network_from_json(doc), doctest::Contains("trapping_rate"), ConfigError);
  doc.erase("trapping_rate");
  CHECK_THROWS_WITH_AS(network_from_json(doc), doctest::Contains("trapping_rate"), ConfigError);
}

TEST_CASE("geometry JSON round trip and ring shorthand") {
  const GeometryConfig cfg = default_geometry_config();
  const GeometryConfig back = geometry_from_json(json::parse(geometry_to_json(cfg).dump()));
  CHECK((build_lh1_rc(back).hermitian_part() - build_lh1_rc(cfg).hermitian_part()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(back.label == cfg.label);

  json doc = geometry_to_json(cfg);
  doc.erase("donor_sites");
  doc["ring"] = {{"donors", 32},          {"radius_nm", 4.7},       {"dimer_shift_deg", 1.2},
                 {"inplane_tilt_deg", 20.0}, {"out_of_plane_deg", 30.0}, {"energy_cm1", 12911.0}};
  const GeometryConfig ring = geometry_from_json(doc);
  CHECK((build_lh1_rc(ring).hermitian_part() - build_lh1_rc(cfg).hermitian_part()).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("geometry JSON rejects ambiguous or incomplete documents") {
  json doc = geometry_to_json(default_geometry_config());
  doc["ring"] = {{"donors", 32}};
  CHECK_THROWS_AS(geometry_from_json(doc), ConfigError);
  doc.erase("ring");
  doc.erase("donor_sites");
  CHECK_THROWS_AS(geometry_from_json(doc), ConfigError);
  doc = geometry_to_json(default_geometry_config());
  doc["rc_sites"][0]["role"] = "antenna";
  CHECK_THROWS_WITH_AS(geometry_from_json(doc), doctest::Contains("rc_sites[0]"), ConfigError);
  doc = geometry_to_json(default_geometry_config());
  doc["rc_sites"].erase(0);
  CHECK_THROWS_WITH_AS(geometry_from_json(doc), doctest::Contains("acceptor"), ConfigError);
}

TEST_CASE("SVG output is a self-contained document") {
  PlotSpec plot{"eta", "m", "eta", {{"a", {1, 2, 3}, {0.1, 0.2, 0.25}}, {"b", {1, 2}, {0.3, 0.1}}}, false};
  const std::string svg = render_svg(plot);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(render_svg({"empty", "x", "y", {}, false}).find("</svg>") != std::string::npos);
  // Nearly flat data must not produce a degenerate tick step.
  PlotSpec flat{"tf", "m", "tf", {{"a", {1, 2, 3}, {36.461175537, 36.461175537 * (1 + 1e-14), 36.461175537}}}, false};
  CHECK(render_svg(flat).find("</svg>") != std::string::npos);
}
