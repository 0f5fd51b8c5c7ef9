#pragma once

#include "lhcoh/network.hpp"
#include "lhcoh/propagator.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>

namespace lhcoh {

/// Eigenvalues with |Im lambda| below this (ps^-1) are treated as non-decaying.
inline constexpr double kNonDecayingThreshold = 1e-12;
/// Population allowed to remain in non-decaying modes before a run is reported divergent.
inline constexpr double kResidualPopulationThreshold = 1e-9;

struct Observables {
  double efficiency = 0.0;                  // eta
  std::optional<double> transfer_time;      // t_f (ps), absent when eta <= tolerance
  double lifetime = 0.0;                    // tau (ps)
  double dissipated = 0.0;                  // eta_D
};

/// The excitation keeps a finite probability of never jumping, so the
/// waiting-time integrals do not converge. Carries the parts that are finite.
struct Divergence {
  std::string reason;
  double residual_population = 0.0; // lim P(t)
  double efficiency = 0.0;
  double dissipated = 0.0;
};

class ObservablesResult {
public:
  ObservablesResult(Observables o) : value_(std::move(o)) {}
  ObservablesResult(Divergence d) : value_(std::move(d)) {}

  bool converged() const { return std::holds_alternative<Observables>(value_); }
  explicit operator bool() const { return converged(); }

  /// Throws std::runtime_error carrying the divergence reason.
  const Observables& value() const;
  const Divergence& divergence() const;

  const Observables* operator->() const { return &value(); }
  const Observables& operator*() const { return value(); }

private:
  std::variant<Observables, Divergence> value_;
};

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  double horizon_cap = 1e6; // ps
  std::size_t max_intervals = 400000;
};

/// Adaptive quadrature of the jump-density integrals over [0, T_max] using
/// eigen-decomposition propagation.
ObservablesResult observables_quadrature(const SpectralPropagator& p, const AmplitudeState& b0,
                                         const QuadratureOptions& options = {});
ObservablesResult observables_quadrature(const ConditionalHamiltonian& h,
                                         const AmplitudeState& b0, double tol = 1e-9);

/// Integration horizon: (ln(1/tol) + ln D) / slowest modal decay rate, capped.
/// Returns nullopt when no mode decays.
std::optional<double> integration_horizon(const SpectralPropagator& p, double tol,
                                          double cap = 1e6);

/// Splits C^D into the largest H_cond-invariant subspace on which nothing
/// decays (only possible when some site has a zero rate) and its orthogonal
/// complement, which is invariant too.
struct DecayingReduction {
  Eigen::MatrixXcd decaying; // D x r, orthonormal columns
  Eigen::MatrixXcd dark;     // D x s, orthonormal columns
};

DecayingReduction split_non_decaying(const ConditionalHamiltonian& h);

/// Exact evaluation: X = int rho dt and Y = int t rho dt from
///   H X - X H^dagger = -i rho0,   H Y - Y H^dagger = -i X,
/// solved on the decaying subspace.
ObservablesResult observables_exact(const ConditionalHamiltonian& h, const AmplitudeState& b0);

/// Quadratic forms b0^dagger F b0 for every observable integral of a fixed network,
/// from the adjoint equations H^dagger F - F H = i K. Preparing costs four
/// Sylvester solves; each initial state then costs O(D^2).
class ObservableForms {
public:
  explicit ObservableForms(const ConditionalHamiltonian& h);

  ObservablesResult evaluate(const AmplitudeState& b0, double tol = 1e-9) const;

  /// False when a non-decaying mode survived the reduction (every state diverges).
  bool well_posed() const { return well_posed_; }

private:
  Eigen::MatrixXcd efficiency_;     // int w_RC
  Eigen::MatrixXcd dissipated_;     // int w_D
  Eigen::MatrixXcd trap_moment_;    // int t w_RC
  Eigen::MatrixXcd total_moment_;   // int t w
  Eigen::MatrixXcd dark_projector_;
  bool well_posed_ = true;
  std::string reason_;
};

} // namespace lhcoh
