#pragma once

#include "lhcoh/network.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lhcoh {

/// Prepared propagator for exp(-i H_cond t). The matrix is shifted by the mean
/// site energy (a pure global phase) and diagonalized once; every call is then
/// O(D^2). When the eigenbasis is ill-conditioned or fails to reproduce H_cond,
/// propagation switches to a cached scaling-and-squaring ladder: exp(-i H h 2^k)
/// for a base step h with ||H h|| <= 1/2, combined with a Taylor remainder.
class SpectralPropagator {
public:
  explicit SpectralPropagator(const ConditionalHamiltonian& h);

  AmplitudeState propagate(const AmplitudeState& b0, double t) const;

  /// b(t) up to the global phase exp(-i shift t); enough for every observable.
  Eigen::VectorXcd amplitudes_rotating(const Eigen::VectorXcd& b0, double t) const;

  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }
  bool uses_eigenbasis() const { return eigenbasis_ok_; }
  double eigenbasis_condition() const { return condition_; }
  double shift() const { return shift_; }
  const ConditionalHamiltonian& hamiltonian() const { return hamiltonian_; }

  /// Largest |lambda - shift| + max decay rate; sets the fastest time scale.
  double spectral_radius() const { return radius_; }

private:
  Eigen::VectorXcd ladder_apply(const Eigen::VectorXcd& b0, double t) const;

  ConditionalHamiltonian hamiltonian_;
  double shift_ = 0.0;
  double radius_ = 0.0;
  Eigen::VectorXcd eigenvalues_; // of H_cond (unshifted)
  Eigen::MatrixXcd eigenvectors_;
  Eigen::MatrixXcd inverse_eigenvectors_;
  double condition_ = 0.0;
  bool eigenbasis_ok_ = false;

  Eigen::MatrixXcd shifted_;               // H_cond - shift
  double base_step_ = 0.0;
  std::vector<Eigen::MatrixXcd> ladder_;   // exp(-i shifted base_step 2^k)
};

AmplitudeState propagate(const ConditionalHamiltonian& h, const AmplitudeState& b0, double t);

struct JumpDensitySample {
  double t = 0.0;
  double no_jump_probability = 0.0;
  double dissipation_density = 0.0; // w_D, ps^-1
  double trapping_density = 0.0;    // w_RC, ps^-1
  double total_density() const { return dissipation_density + trapping_density; }
};

/// Densities from amplitudes at one instant.
JumpDensitySample densities_from_amplitudes(const ConditionalHamiltonian& h,
                                            const Eigen::VectorXcd& b, double t);

JumpDensitySample jump_densities(const SpectralPropagator& p, const AmplitudeState& b0, double t);
JumpDensitySample jump_densities(const ConditionalHamiltonian& h, const AmplitudeState& b0,
                                 double t);

} // namespace lhcoh
