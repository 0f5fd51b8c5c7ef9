#include "lhcoh/observables.hpp"

#include "lhcoh/quadrature.hpp"
#include "lhcoh/sylvester.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lhcoh {

namespace {

constexpr cplx kI{0.0, 1.0};

// Diagonal weights 2*Gamma_alpha restricted to acceptors (trap) or the rest.
Eigen::VectorXd rate_weights(const ConditionalHamiltonian& h, bool acceptors) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(h.decay_rates.size());
  for (Eigen::Index a = 0; a < w.size(); ++a) {
    const bool is_acceptor = h.roles[static_cast<std::size_t>(a)] == SiteRole::Acceptor;
    if (is_acceptor == acceptors)
      w(a) = 2.0 * h.decay_rates(a);
  }
  return w;
}

double min_decay(const Eigen::VectorXcd& eigenvalues) {
  double slowest = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    slowest = std::min(slowest, std::abs(eigenvalues(k).imag()));
  return slowest;
}

Observables finish(double efficiency, double dissipated, double trap_moment, double total_moment,
                   double tol) {
  Observables o;
  o.efficiency = efficiency;
  o.dissipated = dissipated;
  o.lifetime = total_moment;
  if (efficiency > tol)
    o.transfer_time = trap_moment / efficiency;
  return o;
}

Divergence residual_divergence(double residual, double efficiency, double dissipated) {
  return Divergence{"population " + std::to_string(residual) +
                        " remains in non-decaying modes; waiting times diverge",
                    residual, efficiency, dissipated};
}

} // namespace

const Observables& ObservablesResult::value() const {
  if (const auto* o = std::get_if<Observables>(&value_))
    return *o;
  throw std::runtime_error("observables diverge: " + std::get<Divergence>(value_).reason);
}

const Divergence& ObservablesResult::divergence() const {
  if (const auto* d = std::get_if<Divergence>(&value_))
    return *d;
  throw std::logic_error("ObservablesResult::divergence called on a converged result");
}

std::optional<double> integration_horizon(const SpectralPropagator& p, double tol, double cap) {
  double slowest = std::numeric_limits<double>::infinity();
  const auto& ev = p.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double rate = std::abs(ev(k).imag());
    if (rate >= kNonDecayingThreshold)
      slowest = std::min(slowest, rate);
  }
  if (!std::isfinite(slowest))
    return std::nullopt;
  const double d = static_cast<double>(ev.size());
  const double horizon = (std::log(1.0 / tol) + std::log(d)) / slowest;
  return std::min(horizon, cap);
}

ObservablesResult observables_quadrature(const SpectralPropagator& p, const AmplitudeState& b0,
                                         const QuadratureOptions& options) {
  const auto& h = p.hamiltonian();
  if (b0.dimension() != h.dimension())
    throw std::invalid_argument("observables_quadrature: state dimension mismatch");
  const double tol = options.abs_tol > 0.0 ? options.abs_tol : kResidualPopulationThreshold;

  const auto horizon = integration_horizon(p, tol, options.horizon_cap);
  if (!horizon)
    return residual_divergence(b0.norm_squared(), 0.0, 0.0);

  std::vector<double> breakpoints{0.0};
  double t = p.spectral_radius() > 0.0 ? 1.0 / p.spectral_radius() : *horizon;
  for (; t < *horizon; t *= 2.0)
    breakpoints.push_back(t);
  breakpoints.push_back(*horizon);

  const VectorIntegrand integrand = [&](double time) {
    const auto s = densities_from_amplitudes(h, p.amplitudes_rotating(b0.amplitudes, time), time);
    Eigen::ArrayXd v(4);
    v << s.trapping_density, time * s.trapping_density, s.dissipation_density,
        time * s.total_density();
    return v;
  };
  const auto q = integrate_adaptive(integrand, breakpoints, options.abs_tol, options.rel_tol,
                                    options.max_intervals);
  if (!q.converged)
    return Divergence{"adaptive quadrature did not reach tolerance", 0.0, q.value(0), q.value(2)};

  const double residual = p.amplitudes_rotating(b0.amplitudes, *horizon).squaredNorm();
  if (residual > kResidualPopulationThreshold)
    return residual_divergence(residual, q.value(0), q.value(2));
  return finish(q.value(0), q.value(2), q.value(1), q.value(3), tol);
}

ObservablesResult observables_quadrature(const ConditionalHamiltonian& h,
                                         const AmplitudeState& b0, double tol) {
  QuadratureOptions options;
  options.abs_tol = tol;
  return observables_quadrature(SpectralPropagator(h), b0, options);
}

DecayingReduction split_non_decaying(const ConditionalHamiltonian& h) {
  const Eigen::Index d = h.matrix.rows();
  std::vector<Eigen::Index> silent;
  for (Eigen::Index a = 0; a < d; ++a)
    if (h.decay_rates(a) == 0.0)
      silent.push_back(a);

  DecayingReduction out;
  if (silent.empty()) {
    out.decaying = Eigen::MatrixXcd::Identity(d, d);
    out.dark = Eigen::MatrixXcd::Zero(d, 0);
    return out;
  }

  Eigen::MatrixXcd shifted = h.matrix;
  shifted.diagonal().array() -= shifted.diagonal().real().mean();
  const double tol = 1e-10 * std::max(1.0, shifted.norm());

  // Shrink ker(Lambda) to its largest invariant subspace: keep the vectors
  // that H maps back into the current subspace until nothing more drops out.
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(d, static_cast<Eigen::Index>(silent.size()));
  for (std::size_t k = 0; k < silent.size(); ++k)
    basis(silent[k], static_cast<Eigen::Index>(k)) = 1.0;
  while (basis.cols() > 0) {
    const Eigen::MatrixXcd image = shifted * basis;
    const Eigen::MatrixXcd leak = image - basis * (basis.adjoint() * image);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(leak, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) > tol)
        ++rank;
    if (rank == 0)
      break;
    basis = basis * svd.matrixV().rightCols(basis.cols() - rank);
  }

  const Eigen::Index s = basis.cols();
  out.dark = basis;
  if (s == 0) {
    out.decaying = Eigen::MatrixXcd::Identity(d, d);
    return out;
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(d, d);
  out.decaying = q.rightCols(d - s);
  return out;
}

ObservablesResult observables_exact(const ConditionalHamiltonian& h, const AmplitudeState& b0) {
  if (b0.dimension() != h.dimension())
    throw std::invalid_argument("observables_exact: state dimension mismatch");
  if (!h.matrix.allFinite())
    throw std::invalid_argument("observables_exact: non-finite matrix entry");

  const auto split = split_non_decaying(h);
  const double residual = (split.dark.adjoint() * b0.amplitudes).squaredNorm();
  const Eigen::MatrixXcd& basis = split.decaying;
  if (basis.cols() == 0)
    return residual_divergence(residual, 0.0, 0.0);

  const Eigen::MatrixXcd reduced = basis.adjoint() * h.matrix * basis;
  const ConditionalSylvester sylvester(reduced);
  if (min_decay(sylvester.eigenvalues()) < kNonDecayingThreshold)
    return Divergence{"conditional Hamiltonian has a non-decaying mode", residual, 0.0, 0.0};

  const Eigen::VectorXcd b = basis.adjoint() * b0.amplitudes;
  const Eigen::MatrixXcd rho0 = b * b.adjoint();
  const Eigen::MatrixXcd x = sylvester.solve(-kI * rho0);
  const Eigen::MatrixXcd y = sylvester.solve(-kI * x);

  const Eigen::MatrixXcd trap =
      basis.adjoint() * rate_weights(h, true).cast<cplx>().asDiagonal() * basis;
  const Eigen::MatrixXcd leak =
      basis.adjoint() * rate_weights(h, false).cast<cplx>().asDiagonal() * basis;

  const double efficiency = (trap * x).trace().real();
  const double dissipated = (leak * x).trace().real();
  if (residual > kResidualPopulationThreshold)
    return residual_divergence(residual, efficiency, dissipated);
  const double trap_moment = (trap * y).trace().real();
  const double total_moment = trap_moment + (leak * y).trace().real();
  return finish(efficiency, dissipated, trap_moment, total_moment, kResidualPopulationThreshold);
}

ObservableForms::ObservableForms(const ConditionalHamiltonian& h) {
  const auto split = split_non_decaying(h);
  const Eigen::MatrixXcd& basis = split.decaying;
  const Eigen::Index d = h.matrix.rows();
  dark_projector_ = split.dark * split.dark.adjoint();
  efficiency_ = dissipated_ = trap_moment_ = total_moment_ = Eigen::MatrixXcd::Zero(d, d);
  if (basis.cols() == 0) {
    well_posed_ = false;
    reason_ = "no decaying subspace";
    return;
  }

  const Eigen::MatrixXcd reduced = basis.adjoint() * h.matrix * basis;
  const ConditionalSylvester adjoint(reduced.adjoint());
  if (min_decay(adjoint.eigenvalues()) < kNonDecayingThreshold) {
    well_posed_ = false;
    reason_ = "conditional Hamiltonian has a non-decaying mode";
    return;
  }
  const Eigen::MatrixXcd trap =
      basis.adjoint() * rate_weights(h, true).cast<cplx>().asDiagonal() * basis;
  const Eigen::MatrixXcd leak =
      basis.adjoint() * rate_weights(h, false).cast<cplx>().asDiagonal() * basis;

  const Eigen::MatrixXcd a_trap = adjoint.solve(kI * trap);
  const Eigen::MatrixXcd a_leak = adjoint.solve(kI * leak);
  const Eigen::MatrixXcd m_trap = adjoint.solve(kI * a_trap);
  const Eigen::MatrixXcd m_total = m_trap + adjoint.solve(kI * a_leak);

  efficiency_ = basis * a_trap * basis.adjoint();
  dissipated_ = basis * a_leak * basis.adjoint();
  trap_moment_ = basis * m_trap * basis.adjoint();
  total_moment_ = basis * m_total * basis.adjoint();
}

ObservablesResult ObservableForms::evaluate(const AmplitudeState& b0, double tol) const {
  const Eigen::VectorXcd& b = b0.amplitudes;
  if (b.size() != efficiency_.rows())
    throw std::invalid_argument("ObservableForms::evaluate: state dimension mismatch");
  auto form = [&](const Eigen::MatrixXcd& f) { return b.dot(f * b).real(); };
  const double residual = form(dark_projector_);
  if (!well_posed_)
    return Divergence{reason_, residual, 0.0, 0.0};
  const double efficiency = form(efficiency_);
  const double dissipated = form(dissipated_);
  if (residual > kResidualPopulationThreshold)
    return residual_divergence(residual, efficiency, dissipated);
  return finish(efficiency, dissipated, form(trap_moment_), form(total_moment_), tol);
}

} // namespace lhcoh
