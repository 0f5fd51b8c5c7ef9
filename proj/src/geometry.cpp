#include "lhcoh/geometry.hpp"

#include "lhcoh/units.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lhcoh {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

DipoleSite rc_site(SiteRole role, Vec3 position, Vec3 direction, double energy) {
  DipoleSite s;
  s.role = role;
  s.position = position;
  s.moment_direction = direction.normalized();
  s.base_energy_cm1 = energy;
  return s;
}

} // namespace

std::vector<DipoleSite> generate_ring(const RingLayout& layout) {
  std::vector<DipoleSite> sites;
  sites.reserve(layout.donors);
  const double m = static_cast<double>(layout.donors);
  for (std::size_t j = 1; j <= layout.donors; ++j) {
    const double parity = j % 2 == 0 ? 1.0 : -1.0;
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(j - 1) / m + parity * layout.dimer_shift_deg * kDeg;
    const Vec3 radial(std::cos(angle), std::sin(angle), 0.0);
    const Vec3 tangent(-std::sin(angle), std::cos(angle), 0.0);
    const double tilt = parity * layout.inplane_tilt_deg * kDeg;
    const Vec3 inplane = std::cos(tilt) * tangent + std::sin(tilt) * radial;
    const double lift = layout.out_of_plane_deg * kDeg;
    DipoleSite s;
    s.role = SiteRole::Donor;
    s.position = layout.radius_nm * radial;
    s.moment_direction = (std::cos(lift) * inplane + std::sin(lift) * Vec3::UnitZ()).normalized();
    s.base_energy_cm1 = layout.energy_cm1;
    sites.push_back(s);
  }
  return sites;
}

GeometryConfig default_geometry_config() {
  GeometryConfig cfg;
  cfg.label = "illustrative LH1-RC (non-canonical values)";
  cfg.donors = generate_ring(RingLayout{});
  cfg.nu1_cm1 = 806.0;
  cfg.nu2_cm1 = 377.0;
  cfg.coupling_prefactor = 519.044;
  // Special-pair moments tilted 30 degrees out of the ring plane.
  const Vec3 pair_moment(0.0, std::cos(30.0 * kDeg), std::sin(30.0 * kDeg));
  cfg.rc_sites = {
      rc_site(SiteRole::Acceptor, {-0.5, 0.0, 0.0}, pair_moment, 12748.0),
      rc_site(SiteRole::Acceptor, {0.5, 0.0, 0.0}, pair_moment, 12748.0),
      rc_site(SiteRole::Accessory, {-1.4, 0.9, 0.0}, {1.0, 0.3, 0.2}, 12338.0),
      rc_site(SiteRole::Accessory, {1.4, 0.9, 0.0}, {-1.0, 0.3, 0.2}, 12338.0),
  };
  cfg.donor_accessory_coupling = true;
  cfg.dissipation_rate = per_ns(1.0);
  cfg.trapping_rate = 4.0;
  return cfg;
}

double dipole_coupling(const DipoleSite& a, const DipoleSite& b, double prefactor) {
  const Vec3 sep = b.position - a.position;
  const double r = sep.norm();
  if (!(r > 0.0))
    throw std::invalid_argument("dipole_coupling: coincident positions");
  const Vec3 n = sep / r;
  const Vec3 mu_a = a.moment_magnitude * a.moment_direction;
  const Vec3 mu_b = b.moment_magnitude * b.moment_direction;
  return prefactor * (mu_a.dot(mu_b) - 3.0 * n.dot(mu_a) * n.dot(mu_b)) / (r * r * r);
}

int alternation_class(std::size_t lower) {
  return lower % 2 == 1 ? 1 : 2;
}

void validate(const GeometryConfig& cfg) {
  std::ostringstream problems;
  auto check_site = [&](const DipoleSite& s, const std::string& where) {
    if (!s.position.allFinite())
      problems << where << ".position: non-finite\n";
    if (std::abs(s.moment_direction.norm() - 1.0) > 1e-9)
      problems << where << ".moment: norm " << s.moment_direction.norm()
               << " is not 1\n";
    if (!std::isfinite(s.moment_magnitude))
      problems << where << ".magnitude: non-finite\n";
    if (!std::isfinite(s.base_energy_cm1))
      problems << where << ".energy_cm1: non-finite\n";
  };

  if (cfg.donors.size() != 32)
    problems << "donors: expected 32 sites, got " << cfg.donors.size() << "\n";
  for (std::size_t i = 0; i < cfg.donors.size(); ++i) {
    check_site(cfg.donors[i], "donors[" + std::to_string(i) + "]");
    if (cfg.donors[i].role != SiteRole::Donor)
      problems << "donors[" << i << "].role: must be donor\n";
  }
  std::size_t acceptors = 0;
  for (std::size_t i = 0; i < cfg.rc_sites.size(); ++i) {
    check_site(cfg.rc_sites[i], "rc_sites[" + std::to_string(i) + "]");
    if (cfg.rc_sites[i].role == SiteRole::Donor)
      problems << "rc_sites[" << i << "].role: must be acceptor or accessory\n";
    if (cfg.rc_sites[i].role == SiteRole::Acceptor)
      ++acceptors;
  }
  if (acceptors != 2)
    problems << "rc_sites: expected 2 acceptors, got " << acceptors << "\n";
  if (!std::isfinite(cfg.nu1_cm1))
    problems << "nu1_cm1: non-finite\n";
  if (!std::isfinite(cfg.nu2_cm1))
    problems << "nu2_cm1: non-finite\n";
  if (!std::isfinite(cfg.coupling_prefactor))
    problems << "coupling_prefactor_cm1_nm3: non-finite\n";
  if (!(cfg.dissipation_rate >= 0.0) || !std::isfinite(cfg.dissipation_rate))
    problems << "dissipation_rate: must be finite and >= 0\n";
  if (!(cfg.trapping_rate >= 0.0) || !std::isfinite(cfg.trapping_rate))
    problems << "trapping_rate: must be finite and >= 0\n";

  std::vector<const DipoleSite*> all;
  for (const auto& s : cfg.donors)
    all.push_back(&s);
  for (const auto& s : cfg.rc_sites)
    all.push_back(&s);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if ((all[i]->position - all[j]->position).norm() == 0.0)
        problems << "sites " << i << " and " << j << ": coincident positions\n";

  const std::string text = problems.str();
  if (!text.empty())
    throw std::invalid_argument("invalid geometry config:\n" + text);
}

NetworkSpec build_lh1_rc(const GeometryConfig& cfg) {
  validate(cfg);
  std::vector<DipoleSite> acceptors;
  std::vector<DipoleSite> accessories;
  for (const auto& s : cfg.rc_sites)
    (s.role == SiteRole::Acceptor ? acceptors : accessories).push_back(s);

  const std::size_t m = cfg.donors.size();
  NetworkSpec spec = NetworkSpec::zeros(m, acceptors.size(), accessories.size());
  const double pre = cfg.coupling_prefactor;
  auto idx = [](std::size_t i) { return static_cast<Eigen::Index>(i); };

  for (std::size_t i = 0; i < m; ++i) {
    spec.site_energies(idx(i)) = cm1(cfg.donors[i].base_energy_cm1);
    for (std::size_t k = i + 1; k < m; ++k) {
      double j_cm1;
      if (k == i + 1)
        j_cm1 = alternation_class(i) == 1 ? cfg.nu1_cm1 : cfg.nu2_cm1;
      else if (i == 0 && k == m - 1)
        j_cm1 = alternation_class(m - 1) == 1 ? cfg.nu1_cm1 : cfg.nu2_cm1;
      else
        j_cm1 = dipole_coupling(cfg.donors[i], cfg.donors[k], pre);
      spec.donor_donor(idx(i), idx(k)) = spec.donor_donor(idx(k), idx(i)) = cm1(j_cm1);
    }
    for (std::size_t c = 0; c < acceptors.size(); ++c)
      spec.donor_acceptor(idx(i), idx(c)) = cm1(dipole_coupling(cfg.donors[i], acceptors[c], pre));
    if (cfg.donor_accessory_coupling)
      for (std::size_t a = 0; a < accessories.size(); ++a)
        spec.accessory_donor(idx(a), idx(i)) =
            cm1(dipole_coupling(accessories[a], cfg.donors[i], pre));
  }
  for (std::size_t c = 0; c < acceptors.size(); ++c) {
    spec.site_energies(idx(m + c)) = cm1(acceptors[c].base_energy_cm1);
    for (std::size_t r = c + 1; r < acceptors.size(); ++r)
      spec.acceptor_acceptor(idx(c), idx(r)) = spec.acceptor_acceptor(idx(r), idx(c)) =
          cm1(dipole_coupling(acceptors[c], acceptors[r], pre));
  }
  const std::size_t base = m + acceptors.size();
  for (std::size_t a = 0; a < accessories.size(); ++a) {
    spec.site_energies(idx(base + a)) = cm1(accessories[a].base_energy_cm1);
    for (std::size_t c = 0; c < acceptors.size(); ++c)
      spec.accessory_acceptor(idx(a), idx(c)) =
          cm1(dipole_coupling(accessories[a], acceptors[c], pre));
    for (std::size_t b = a + 1; b < accessories.size(); ++b)
      spec.accessory_accessory(idx(a), idx(b)) = spec.accessory_accessory(idx(b), idx(a)) =
          cm1(dipole_coupling(accessories[a], accessories[b], pre));
  }
  spec.dissipation_rate = cfg.dissipation_rate;
  spec.trapping_rate = cfg.trapping_rate;
  validate(spec);
  return spec;
}

} // namespace lhcoh
