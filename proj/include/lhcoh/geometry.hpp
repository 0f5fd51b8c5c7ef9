#pragma once

#include "lhcoh/network.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace lhcoh {

using Vec3 = Eigen::Vector3d;

struct DipoleSite {
  Vec3 position = Vec3::Zero();          // nm
  Vec3 moment_direction = Vec3::UnitX(); // unit vector
  double moment_magnitude = 1.0;         // in units folded into the coupling prefactor
  double base_energy_cm1 = 0.0;
  SiteRole role = SiteRole::Donor;
};

// Generated donor ring in the z = 0 plane. Donor j (1-based) sits at angle
// 2 pi (j - 1) / M + (-1)^j dimer_shift; its moment is the local tangent
// rotated in-plane by (-1)^j inplane_tilt, then lifted out of the plane by
// out_of_plane.
struct RingLayout {
  std::size_t donors = 32;
  double radius_nm = 4.7;
  double dimer_shift_deg = 1.2;
  double inplane_tilt_deg = 20.0;
  double out_of_plane_deg = 30.0;
  double energy_cm1 = 12911.0;
};

struct GeometryConfig {
  std::vector<DipoleSite> donors;
  std::vector<DipoleSite> rc_sites; // acceptors and accessories, any order
  double nu1_cm1 = 0.0;             // J_{2j,2j+1}
  double nu2_cm1 = 0.0;             // J_{2j,2j-1}
  double coupling_prefactor = 0.0;  // cm^-1 nm^3
  bool donor_accessory_coupling = true;
  double dissipation_rate = 0.0;    // ps^-1
  double trapping_rate = 0.0;       // ps^-1
  std::string label;
};

std::vector<DipoleSite> generate_ring(const RingLayout& layout);

/// Illustrative LH1-RC arrangement shipped with the tool (see README for values).
GeometryConfig default_geometry_config();

/// prefactor * [mu_a . mu_b - 3 (n . mu_a)(n . mu_b)] / r^3, n the unit separation.
double dipole_coupling(const DipoleSite& a, const DipoleSite& b, double prefactor);

/// Field-level checks; throws std::invalid_argument listing every problem found.
void validate(const GeometryConfig& cfg);

/// Adjacent ring pairs (0-based i, i+1 mod M) couple with nu1 when i is odd
/// and nu2 when i is even, so J_{2j,2j+1} = nu1 and J_{2j,2j-1} = nu2 in
/// 1-based labels, including the (M, 1) wrap pair. Everything else is dipolar.
NetworkSpec build_lh1_rc(const GeometryConfig& cfg);

/// Index of the adjacent-pair constant for 0-based ring neighbours (i, i+1 mod M): 1 or 2.
int alternation_class(std::size_t lower);

} // namespace lhcoh
