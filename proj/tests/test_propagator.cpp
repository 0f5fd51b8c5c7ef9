#include "lhcoh/propagator.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

using namespace lhcoh;

namespace {

Eigen::VectorXcd expm_oracle(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& b0, double t) {
  const Eigen::MatrixXcd a = (cplx(0.0, -t) * h).eval();
  return a.exp() * b0;
}

ConditionalHamiltonian random_network(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  NetworkSpec s = NetworkSpec::zeros(m, n);
  for (Eigen::Index i = 0; i < s.site_energies.size(); ++i)
    s.site_energies(i) = 2.0 * nd(rng);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      s.donor_donor(i, j) = s.donor_donor(j, i) = nd(rng);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < n; ++c)
      s.donor_acceptor(i, c) = 0.5 * nd(rng);
  s.dissipation_rate = 0.01;
  s.trapping_rate = 2.0;
  return build_conditional_hamiltonian(s);
}

// Dimer at its exceptional point: gamma = kappa / 2 with no dissipation.
ConditionalHamiltonian exceptional_dimer(double kappa) {
  NetworkSpec s = NetworkSpec::zeros(1, 1);
  s.donor_acceptor(0, 0) = kappa / 2.0;
  s.trapping_rate = kappa;
  return build_conditional_hamiltonian(s);
}

} // namespace

TEST_CASE("eigenbasis propagation matches the matrix exponential") {
  const auto h = random_network(6, 2, 3);
  const SpectralPropagator p(h);
  CHECK(p.uses_eigenbasis());
  const AmplitudeState b0 = symmetric_state(3, 2, 6, 8);
  for (double t : {0.0, 0.1, 1.0, 7.5}) {
    const auto b = p.propagate(b0, t);
    CHECK((b.amplitudes - expm_oracle(h.matrix, b0.amplitudes, t)).norm() < 1e-11);
    CHECK(b.time_tag == t);
  }
}

TEST_CASE("defective matrices fall back to the squaring ladder") {
  ConditionalHamiltonian h;
  h.matrix = Eigen::MatrixXcd(2, 2);
  h.matrix << cplx(0, -1), 1.0, 0.0, cplx(0, -1);
  h.decay_rates = Eigen::Vector2d(1.0, 1.0);
  h.roles = {SiteRole::Donor, SiteRole::Acceptor};
  h.donors = 1;
  const SpectralPropagator p(h);
  CHECK_FALSE(p.uses_eigenbasis());
  AmplitudeState b0;
  b0.amplitudes = Eigen::Vector2cd(0.3, 0.8);
  for (double t : {0.25, 3.0, 40.0}) {
    // exp(-i H t) = e^{-t} [[1, -i t], [0, 1]]
    const Eigen::Vector2cd expected =
        std::exp(-t) * Eigen::Vector2cd(cplx(0.3, 0) + cplx(0, -t) * 0.8, 0.8);
    CHECK((p.propagate(b0, t).amplitudes - expected).norm() < 1e-12);
  }
}

TEST_CASE("exceptional point dimer propagates accurately") {
  const auto h = exceptional_dimer(4.0);
  const SpectralPropagator p(h);
  AmplitudeState b0;
  b0.amplitudes = Eigen::Vector2cd(1.0, 0.0);
  for (double t : {0.1, 1.0, 5.0}) {
    // b1 = e^{-kt/2}(1 + kt/2), b2 = -i (k/2) t e^{-kt/2}
    const double k = 4.0, e = std::exp(-k * t / 2.0);
    const Eigen::Vector2cd expected(e * (1.0 + k * t / 2.0), cplx(0.0, -k * t / 2.0 * e));
    CHECK((p.propagate(b0, t).amplitudes - expected).norm() < 1e-9);
  }
}

TEST_CASE("jump densities account for the loss of norm") {
  const auto h = random_network(5, 1, 9);
  const SpectralPropagator p(h);
  const AmplitudeState b0 = asymmetric_state(3, 1, 5, 6);
  double previous = 1.0;
  for (double t = 0.0; t < 20.0; t += 0.37) {
    const auto s = jump_densities(p, b0, t);
    CHECK(s.no_jump_probability <= previous + 1e-14);
    previous = s.no_jump_probability;
    const double step = 1e-4;
    const double slope = (jump_densities(p, b0, t + step).no_jump_probability -
                          jump_densities(p, b0, std::max(0.0, t - step)).no_jump_probability) /
                         (t + step - std::max(0.0, t - step));
    CHECK(-slope == doctest::Approx(s.total_density()).epsilon(1e-6).scale(1e-6));
  }
}

TEST_CASE("free-function propagate agrees with the prepared propagator") {
  const auto h = random_network(4, 1, 21);
  const AmplitudeState b0 = symmetric_state(4, 1, 4, 5);
  CHECK((propagate(h, b0, 2.0).amplitudes - SpectralPropagator(h).propagate(b0, 2.0).amplitudes)
            .norm() < 1e-13);
}
