#include "lhcoh/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lhcoh {

namespace {

void require_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols,
                   const char* field) {
  if (m.rows() != rows || m.cols() != cols)
    throw std::invalid_argument(std::string(field) + ": expected " + std::to_string(rows) +
                                "x" + std::to_string(cols) + ", got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (!m.allFinite())
    throw std::invalid_argument(std::string(field) + ": non-finite entry");
}

void require_symmetric(const Eigen::MatrixXd& m, const char* field) {
  if (m.size() == 0)
    return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0)
      throw std::invalid_argument(std::string(field) + ": diagonal must be zero");
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw std::invalid_argument(std::string(field) + ": not symmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
  }
}

} // namespace

SiteRole NetworkSpec::role(std::size_t site) const {
  if (site < donors)
    return SiteRole::Donor;
  if (site < donors + acceptors)
    return SiteRole::Acceptor;
  return SiteRole::Accessory;
}

NetworkSpec NetworkSpec::zeros(std::size_t m, std::size_t n, std::size_t a) {
  NetworkSpec s;
  s.donors = m;
  s.acceptors = n;
  s.accessories = a;
  const auto M = static_cast<Eigen::Index>(m);
  const auto N = static_cast<Eigen::Index>(n);
  const auto A = static_cast<Eigen::Index>(a);
  s.site_energies = Eigen::VectorXd::Zero(M + N + A);
  s.donor_donor = Eigen::MatrixXd::Zero(M, M);
  s.donor_acceptor = Eigen::MatrixXd::Zero(M, N);
  s.acceptor_acceptor = Eigen::MatrixXd::Zero(N, N);
  s.accessory_donor = Eigen::MatrixXd::Zero(A, M);
  s.accessory_acceptor = Eigen::MatrixXd::Zero(A, N);
  s.accessory_accessory = Eigen::MatrixXd::Zero(A, A);
  return s;
}

void validate(const NetworkSpec& spec) {
  if (spec.donors < 1)
    throw std::invalid_argument("donors: need at least one donor");
  if (spec.acceptors < 1)
    throw std::invalid_argument("acceptors: need at least one acceptor");
  const auto M = static_cast<Eigen::Index>(spec.donors);
  const auto N = static_cast<Eigen::Index>(spec.acceptors);
  const auto A = static_cast<Eigen::Index>(spec.accessories);
  if (spec.site_energies.size() != M + N + A)
    throw std::invalid_argument("site_energies: expected length " + std::to_string(M + N + A));
  if (!spec.site_energies.allFinite())
    throw std::invalid_argument("site_energies: non-finite entry");
  require_shape(spec.donor_donor, M, M, "donor_donor");
  require_symmetric(spec.donor_donor, "donor_donor");
  require_shape(spec.donor_acceptor, M, N, "donor_acceptor");
  require_shape(spec.acceptor_acceptor, N, N, "acceptor_acceptor");
  require_symmetric(spec.acceptor_acceptor, "acceptor_acceptor");
  require_shape(spec.accessory_donor, A, M, "accessory_donor");
  require_shape(spec.accessory_acceptor, A, N, "accessory_acceptor");
  require_shape(spec.accessory_accessory, A, A, "accessory_accessory");
  require_symmetric(spec.accessory_accessory, "accessory_accessory");
  if (!(spec.dissipation_rate >= 0.0) || !std::isfinite(spec.dissipation_rate))
    throw std::invalid_argument("dissipation_rate: must be finite and >= 0");
  if (!(spec.trapping_rate >= 0.0) || !std::isfinite(spec.trapping_rate))
    throw std::invalid_argument("trapping_rate: must be finite and >= 0");
}

Eigen::MatrixXd NetworkSpec::hermitian_part() const {
  const auto M = static_cast<Eigen::Index>(donors);
  const auto N = static_cast<Eigen::Index>(acceptors);
  const auto A = static_cast<Eigen::Index>(accessories);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(M + N + A, M + N + A);
  h.diagonal() = site_energies;
  h.block(0, 0, M, M) += donor_donor;
  h.block(0, M, M, N) = donor_acceptor;
  h.block(M, 0, N, M) = donor_acceptor.transpose();
  h.block(M, M, N, N) += acceptor_acceptor;
  if (A > 0) {
    h.block(M + N, 0, A, M) = accessory_donor;
    h.block(0, M + N, M, A) = accessory_donor.transpose();
    h.block(M + N, M, A, N) = accessory_acceptor;
    h.block(M, M + N, N, A) = accessory_acceptor.transpose();
    h.block(M + N, M + N, A, A) += accessory_accessory;
  }
  return h;
}

ConditionalHamiltonian build_conditional_hamiltonian(const NetworkSpec& spec) {
  validate(spec);
  const std::size_t d = spec.dimension();
  ConditionalHamiltonian h;
  h.donors = spec.donors;
  h.matrix = spec.hermitian_part().cast<cplx>();
  h.decay_rates.resize(static_cast<Eigen::Index>(d));
  h.roles.resize(d);
  for (std::size_t a = 0; a < d; ++a) {
    h.roles[a] = spec.role(a);
    const double rate =
        h.roles[a] == SiteRole::Acceptor ? spec.trapping_rate : spec.dissipation_rate;
    const auto i = static_cast<Eigen::Index>(a);
    h.decay_rates(i) = rate;
    h.matrix(i, i) -= cplx(0.0, rate);
  }
  return h;
}

namespace {

AmplitudeState window(std::size_t m, std::size_t offset, std::size_t donors,
                      std::size_t dimension, bool alternate) {
  if (donors < 1)
    throw std::invalid_argument("window state: need at least one donor");
  if (m < 1 || m > donors)
    throw std::invalid_argument("window state: m must lie in [1, " + std::to_string(donors) +
                                "], got " + std::to_string(m));
  if (offset < 1 || offset > donors)
    throw std::invalid_argument("window state: offset must lie in [1, " +
                                std::to_string(donors) + "], got " + std::to_string(offset));
  if (dimension == 0)
    dimension = donors;
  if (dimension < donors)
    throw std::invalid_argument("window state: dimension smaller than donor count");

  AmplitudeState s;
  s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension));
  const double a = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t j = 1; j <= m; ++j) {
    const std::size_t site = (offset - 1 + j - 1) % donors;
    const double sign = alternate && (j % 2 == 1) ? -1.0 : 1.0;
    s.amplitudes(static_cast<Eigen::Index>(site)) = sign * a;
  }
  return s;
}

} // namespace

AmplitudeState symmetric_state(std::size_t m, std::size_t offset, std::size_t donors,
                               std::size_t dimension) {
  return window(m, offset, donors, dimension, false);
}

AmplitudeState asymmetric_state(std::size_t m, std::size_t offset, std::size_t donors,
                                std::size_t dimension) {
  return window(m, offset, donors, dimension, true);
}

AmplitudeState window_state(WindowKind kind, std::size_t m, std::size_t offset,
                            std::size_t donors, std::size_t dimension) {
  return window(m, offset, donors, dimension, kind == WindowKind::Asymmetric);
}

cplx collective_amplitude(const AmplitudeState& state, std::size_t donors) {
  if (state.dimension() < donors)
    throw std::invalid_argument("collective_amplitude: state shorter than donor count");
  return state.amplitudes.head(static_cast<Eigen::Index>(donors)).sum();
}

} // namespace lhcoh
