#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace lhcoh {

using cplx = std::complex<double>;

enum class SiteRole { Donor, Acceptor, Accessory };

// Single-excitation network. Site order is donors [0, M), acceptors [M, M+N),
// accessories [M+N, M+N+A). Energies and rates are in ps^-1.
struct NetworkSpec {
  std::size_t donors = 1;
  std::size_t acceptors = 1;
  std::size_t accessories = 0;

  Eigen::VectorXd site_energies;       // length D
  Eigen::MatrixXd donor_donor;         // M x M, symmetric, zero diagonal
  Eigen::MatrixXd donor_acceptor;      // M x N
  Eigen::MatrixXd acceptor_acceptor;   // N x N, symmetric, zero diagonal
  Eigen::MatrixXd accessory_donor;     // A x M
  Eigen::MatrixXd accessory_acceptor;  // A x N
  Eigen::MatrixXd accessory_accessory; // A x A, symmetric, zero diagonal

  double dissipation_rate = 0.0; // Gamma, donors and accessories
  double trapping_rate = 0.0;    // kappa, acceptors

  std::size_t dimension() const { return donors + acceptors + accessories; }
  SiteRole role(std::size_t site) const;

  /// Allocates zero couplings and energies for the given counts.
  static NetworkSpec zeros(std::size_t m, std::size_t n, std::size_t a = 0);

  /// Full real symmetric D x D coupling matrix including the diagonal energies.
  Eigen::MatrixXd hermitian_part() const;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const NetworkSpec& spec);

struct ConditionalHamiltonian {
  Eigen::MatrixXcd matrix;
  // Per-site decay rate on the diagonal: Gamma for donors/accessories, kappa for acceptors.
  Eigen::VectorXd decay_rates;
  std::vector<SiteRole> roles;
  std::size_t donors = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }
};

ConditionalHamiltonian build_conditional_hamiltonian(const NetworkSpec& spec);

struct AmplitudeState {
  Eigen::VectorXcd amplitudes;
  double time_tag = 0.0; // ps

  double norm_squared() const { return amplitudes.squaredNorm(); }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes.size()); }
};

// Window states over `m` consecutive donors starting at the 1-based donor
// `offset`, wrapping cyclically. `dimension` pads with zero amplitudes on the
// non-donor sites; 0 means "donors only".
AmplitudeState symmetric_state(std::size_t m, std::size_t offset, std::size_t donors,
                               std::size_t dimension = 0);
// Sign (-1)^j with j = 1..m counted from the window start.
AmplitudeState asymmetric_state(std::size_t m, std::size_t offset, std::size_t donors,
                                std::size_t dimension = 0);

enum class WindowKind { Symmetric, Asymmetric };

AmplitudeState window_state(WindowKind kind, std::size_t m, std::size_t offset,
                            std::size_t donors, std::size_t dimension = 0);

/// Sum of the first `donors` amplitudes.
cplx collective_amplitude(const AmplitudeState& state, std::size_t donors);

} // namespace lhcoh
