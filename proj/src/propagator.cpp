#include "lhcoh/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace lhcoh {

namespace {

constexpr double kMaxCondition = 1e8;
constexpr double kMaxReconstruction = 1e-11;
constexpr double kLadderHorizon = 1e6; // ps, the quadrature horizon cap
constexpr cplx kMinusI{0.0, -1.0};

} // namespace

SpectralPropagator::SpectralPropagator(const ConditionalHamiltonian& h) : hamiltonian_(h) {
  const Eigen::Index d = h.matrix.rows();
  if (d == 0 || h.matrix.cols() != d)
    throw std::invalid_argument("SpectralPropagator: matrix must be square and non-empty");
  if (!h.matrix.allFinite())
    throw std::invalid_argument("SpectralPropagator: non-finite matrix entry");

  shift_ = h.matrix.diagonal().real().mean();
  shifted_ = h.matrix;
  shifted_.diagonal().array() -= shift_;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(shifted_, true);
  if (solver.info() == Eigen::Success) {
    eigenvalues_ = solver.eigenvalues().array() + shift_;
    eigenvectors_ = solver.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eigenvectors_);
    const auto& sv = svd.singularValues();
    condition_ = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                         : std::numeric_limits<double>::infinity();
    if (condition_ < kMaxCondition) {
      inverse_eigenvectors_ = eigenvectors_.inverse();
      const Eigen::MatrixXcd rebuilt =
          eigenvectors_ * solver.eigenvalues().asDiagonal() * inverse_eigenvectors_;
      const double scale = std::max(1.0, shifted_.norm());
      eigenbasis_ok_ = (rebuilt - shifted_).norm() <= kMaxReconstruction * scale;
    }
  } else {
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(shifted_, false);
    eigenvalues_ = schur.matrixT().diagonal().array() + shift_;
    condition_ = std::numeric_limits<double>::infinity();
  }

  radius_ = 0.0;
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k)
    radius_ = std::max(radius_, std::abs(eigenvalues_(k) - shift_));
  radius_ += h.decay_rates.size() > 0 ? h.decay_rates.maxCoeff() : 0.0;

  if (!eigenbasis_ok_) {
    const double norm = shifted_.cwiseAbs().colwise().sum().maxCoeff();
    base_step_ = norm > 0.0 ? 0.5 / norm : 1.0;
    ladder_.push_back((kMinusI * base_step_ * shifted_).exp());
    for (double span = base_step_; span < kLadderHorizon; span *= 2.0)
      ladder_.push_back(ladder_.back() * ladder_.back());
  }
}

Eigen::VectorXcd SpectralPropagator::ladder_apply(const Eigen::VectorXcd& b0, double t) const {
  double steps = std::floor(t / base_step_);
  const double remainder = t - steps * base_step_;

  // Taylor series for the remainder step; ||H r|| <= 1/2 so 30 terms reach round-off.
  Eigen::VectorXcd out = b0;
  Eigen::VectorXcd term = b0;
  for (int k = 1; k <= 30; ++k) {
    term = (kMinusI * remainder / static_cast<double>(k)) * (shifted_ * term);
    out += term;
    if (term.norm() <= 1e-17 * out.norm())
      break;
  }
  for (std::size_t k = 0; steps >= 1.0; ++k) {
    if (k >= ladder_.size())
      throw std::runtime_error("SpectralPropagator: time beyond cached horizon");
    if (std::fmod(steps, 2.0) == 1.0)
      out = ladder_[k] * out;
    steps = std::floor(steps / 2.0);
  }
  return out;
}

Eigen::VectorXcd SpectralPropagator::amplitudes_rotating(const Eigen::VectorXcd& b0,
                                                         double t) const {
  if (b0.size() != shifted_.rows())
    throw std::invalid_argument("propagate: state dimension does not match Hamiltonian");
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("propagate: time must be finite and >= 0");
  if (t == 0.0)
    return b0;
  if (!eigenbasis_ok_)
    return ladder_apply(b0, t);
  Eigen::VectorXcd modal = inverse_eigenvectors_ * b0;
  for (Eigen::Index k = 0; k < modal.size(); ++k)
    modal(k) *= std::exp(kMinusI * (eigenvalues_(k) - shift_) * t);
  return eigenvectors_ * modal;
}

AmplitudeState SpectralPropagator::propagate(const AmplitudeState& b0, double t) const {
  AmplitudeState out;
  out.amplitudes = amplitudes_rotating(b0.amplitudes, t);
  if (t > 0.0)
    out.amplitudes *= std::exp(kMinusI * shift_ * t);
  out.time_tag = b0.time_tag + t;
  return out;
}

AmplitudeState propagate(const ConditionalHamiltonian& h, const AmplitudeState& b0, double t) {
  return SpectralPropagator(h).propagate(b0, t);
}

JumpDensitySample densities_from_amplitudes(const ConditionalHamiltonian& h,
                                            const Eigen::VectorXcd& b, double t) {
  JumpDensitySample s;
  s.t = t;
  for (Eigen::Index a = 0; a < b.size(); ++a) {
    const double pop = std::norm(b(a));
    s.no_jump_probability += pop;
    const double w = 2.0 * h.decay_rates(a) * pop;
    if (h.roles[static_cast<std::size_t>(a)] == SiteRole::Acceptor)
      s.trapping_density += w;
    else
      s.dissipation_density += w;
  }
  return s;
}

JumpDensitySample jump_densities(const SpectralPropagator& p, const AmplitudeState& b0, double t) {
  return densities_from_amplitudes(p.hamiltonian(), p.amplitudes_rotating(b0.amplitudes, t), t);
}

JumpDensitySample jump_densities(const ConditionalHamiltonian& h, const AmplitudeState& b0,
                                 double t) {
  return jump_densities(SpectralPropagator(h), b0, t);
}

} // namespace lhcoh
