#include "lhcoh/observables.hpp"
#include "lhcoh/toy.hpp"
#include "lhcoh/units.hpp"

#include <doctest.h>

#include <boost/numeric/odeint.hpp>

#include <random>

using namespace lhcoh;

namespace {

ToyParams reference(Mechanism m) {
  const double scale = m == Mechanism::Nearest    ? mev(100.0)
                       : m == Mechanism::Pairwise ? mev(10.0)
                                                  : dipole_scale_for_mean_coupling(mev(10.0), 32);
  return ToyParams::make(32, mev(1.0), per_ns(1.0), 4.0, m, scale);
}

AmplitudeState random_toy_state(std::size_t donors, std::uint64_t seed, bool acceptor) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  AmplitudeState b;
  b.amplitudes.resize(static_cast<Eigen::Index>(donors + 1));
  for (auto& x : b.amplitudes)
    x = cplx(nd(rng), nd(rng));
  if (!acceptor)
    b.amplitudes(static_cast<Eigen::Index>(donors)) = 0.0;
  b.amplitudes.normalize();
  return b;
}

// Second-order residual of b'' + X b' + Y b by central differences of step h.
cplx residual(const ToyParams& p, const AmplitudeState& b0, double t, double h, cplx y) {
  const cplx x(p.trapping + p.dissipation, p.delta);
  const cplx bm = acceptor_amplitude(t - h, p, b0);
  const cplx b = acceptor_amplitude(t, p, b0);
  const cplx bp = acceptor_amplitude(t + h, p, b0);
  return (bp - 2.0 * b + bm) / (h * h) + x * (bp - bm) / (2.0 * h) + y * b;
}

} // namespace

TEST_CASE("mechanism couplings give the stated effective interaction") {
  CHECK(effective_delta(Mechanism::Nearest, 3.0, 32) == doctest::Approx(3.0));
  CHECK(effective_delta(Mechanism::Nearest, 3.0, 2) == doctest::Approx(3.0));
  CHECK(effective_delta(Mechanism::Pairwise, 3.0, 32) == doctest::Approx(93.0));
  CHECK(ring_chord(0, 1, 32) == doctest::Approx(1.0));
  CHECK(ring_chord(3, 19, 32) == doctest::Approx(1.0 / std::sin(std::numbers::pi / 32)));
  const double j = dipole_scale_for_mean_coupling(2.0, 32);
  double sum = 0.0;
  for (std::size_t a = 0; a < 32; ++a)
    for (std::size_t b = a + 1; b < 32; ++b)
      sum += mechanism_coupling(Mechanism::Dipole, j, a, b, 32);
  CHECK(sum / (32.0 * 31.0 / 2.0) == doctest::Approx(2.0).epsilon(1e-13));
  for (std::size_t a = 0; a < 32; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < 32; ++b)
      row += mechanism_coupling(Mechanism::Dipole, j, a, b, 32);
    CHECK(row == doctest::Approx(effective_delta(Mechanism::Dipole, j, 32)).epsilon(1e-13));
  }
  CHECK(parse_mechanism("dipole") == Mechanism::Dipole);
  CHECK_THROWS_AS(parse_mechanism("ring"), std::invalid_argument);
}

TEST_CASE("closed-form efficiency and transfer time match the exact route") {
  for (Mechanism mech : {Mechanism::Nearest, Mechanism::Pairwise, Mechanism::Dipole}) {
    const ToyParams p = reference(mech);
    const auto h = build_conditional_hamiltonian(toy_network(p));
    for (std::size_t m : {1u, 5u, 32u}) {
      const auto b0 = symmetric_state(m, 3, 32, 33);
      const auto exact = observables_exact(h, b0);
      REQUIRE(exact);
      CHECK(toy_efficiency(p, collective_amplitude(b0, 32)) ==
            doctest::Approx(exact->efficiency).epsilon(1e-10));
      CHECK(toy_transfer_time(p) == doctest::Approx(*exact->transfer_time).epsilon(1e-10));
    }
  }
}

TEST_CASE("closed forms survive a vanishing frequency") {
  // Delta = 0 and 4 M gamma^2 = (kappa - Gamma)^2 makes Omega = 0.
  const double kappa = 4.0, diss = 0.5;
  const double gamma = (kappa - diss) / (2.0 * std::sqrt(8.0));
  const ToyParams p = ToyParams::make(8, gamma, diss, kappa, Mechanism::Nearest, 0.0);
  CHECK(std::abs(complex_frequency(p)) < 1e-7);
  const auto h = build_conditional_hamiltonian(toy_network(p));
  const auto b0 = symmetric_state(8, 1, 8, 9);
  const auto exact = observables_exact(h, b0);
  REQUIRE(exact);
  CHECK(toy_efficiency(p, collective_amplitude(b0, 8)) ==
        doctest::Approx(exact->efficiency).epsilon(1e-8));
  CHECK(toy_transfer_time(p) == doctest::Approx(*exact->transfer_time).epsilon(1e-8));
}

TEST_CASE("near-singular decay margin switches to quadrature") {
  // a - |Im Omega| ~ 3e-9 a.
  const ToyParams p = ToyParams::make(4, 1e-5, 1e-9, 1.0, Mechanism::Nearest, 0.0);
  const auto h = build_conditional_hamiltonian(toy_network(p));
  const auto b0 = symmetric_state(4, 1, 4, 5);
  const auto exact = observables_exact(h, b0);
  REQUIRE(exact);
  const double eta = toy_efficiency(p, collective_amplitude(b0, 4));
  CHECK(std::isfinite(eta));
  CHECK(eta == doctest::Approx(exact->efficiency).epsilon(1e-7));
  CHECK(toy_transfer_time(p) == doctest::Approx(*exact->transfer_time).epsilon(1e-7));
}

TEST_CASE("non-decaying bright pair is a domain error") {
  const ToyParams p = ToyParams::make(4, 0.0, 0.0, 2.0, Mechanism::Nearest, 1.0);
  CHECK_THROWS_AS(toy_efficiency(p, cplx(1.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(toy_transfer_time(p), std::domain_error);
  CHECK(toy_efficiency(p, cplx(0.0, 0.0)) == 0.0);
}

TEST_CASE("response functions do not depend on the square-root branch") {
  const ToyParams p = reference(Mechanism::Dipole);
  const cplx omega = complex_frequency(p);
  for (double t : {0.001, 0.05, 1.0, 30.0}) {
    const auto a = toy_response(t, p, omega);
    const auto b = toy_response(t, p, -omega);
    CHECK(std::abs(a.f - b.f) <= 1e-14 * (1.0 + std::abs(a.f)));
    CHECK(std::abs(a.g - b.g) <= 1e-14 * (1.0 + std::abs(a.g)));
  }
}

TEST_CASE("acceptor amplitude solves the second-order equation at O(h^2)") {
  const ToyParams p = ToyParams::make(8, 1.0, 0.3, 2.0, Mechanism::Nearest, 3.0);
  const auto b0 = random_toy_state(8, 5, true);
  const double m = 8.0;
  const cplx y = m * p.gamma * p.gamma + p.trapping * cplx(p.dissipation, p.delta);
  const cplx y_printed = 4.0 * m * p.gamma * p.gamma + p.trapping * cplx(p.dissipation, p.delta);
  for (double t : {0.3, 1.1, 2.5}) {
    double previous = 0.0;
    for (double h : {0.02, 0.01, 0.005, 0.0025}) {
      const double r = std::abs(residual(p, b0, t, h, y));
      if (previous > 0.0)
        CHECK(previous / r == doctest::Approx(4.0).epsilon(0.02));
      previous = r;
    }
    CHECK(previous < 1e-4);
    // The coefficient 4 M gamma^2 leaves an O(1) residual that does not refine away.
    CHECK(std::abs(residual(p, b0, t, 0.0025, y_printed)) > 1e-2);
  }
  // Initial data: b(0) = b_{M+1}(0), b'(0) = -i gamma B0 - kappa b_{M+1}(0).
  const cplx b_acc = b0.amplitudes(8);
  CHECK(std::abs(acceptor_amplitude(0.0, p, b0) - b_acc) < 1e-15);
  const double h = 1e-6;
  const cplx slope = (acceptor_amplitude(h, p, b0) - acceptor_amplitude(-h, p, b0)) / (2.0 * h);
  const cplx expected = cplx(0.0, -p.gamma) * collective_amplitude(b0, 8) - p.trapping * b_acc;
  CHECK(std::abs(slope - expected) < 1e-7);
}

TEST_CASE("direct integration of the amplitude equations matches the closed form") {
  using State = std::vector<cplx>;
  namespace odeint = boost::numeric::odeint;
  for (Mechanism mech : {Mechanism::Nearest, Mechanism::Pairwise, Mechanism::Dipole}) {
    const ToyParams p = reference(mech);
    const auto spec = toy_network(p);
    const std::size_t M = p.donors;
    const auto b0 = random_toy_state(M, 17, true);
    // b_j' = -i gamma b_{M+1} - i sum_k J_jk b_k - Gamma b_j,  b_{M+1}' = -i gamma sum_j b_j - kappa b_{M+1}
    auto rhs = [&](const State& b, State& db, double) {
      cplx total = 0.0;
      for (std::size_t j = 0; j < M; ++j) {
        cplx ring = 0.0;
        for (std::size_t k = 0; k < M; ++k)
          ring += spec.donor_donor(j, k) * b[k];
        db[j] = cplx(0, -p.gamma) * b[M] - cplx(0, 1) * ring - p.dissipation * b[j];
        total += b[j];
      }
      db[M] = cplx(0, -p.gamma) * total - p.trapping * b[M];
    };
    State b(b0.amplitudes.data(), b0.amplitudes.data() + M + 1);
    auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_fehlberg78<State>());
    double t = 0.0;
    for (double target : {0.01, 0.1, 0.5, 2.0}) {
      odeint::integrate_adaptive(stepper, rhs, b, t, target, 1e-4);
      t = target;
      CHECK(std::abs(b[M] - acceptor_amplitude(t, p, b0)) < 1e-9);
    }
  }
}

TEST_CASE("without dissipation only the bright fraction is trapped") {
  for (double gamma : {0.2, 1.0, 3.0})
    for (double kappa : {0.5, 4.0})
      for (double scale : {0.0, 0.7, 40.0}) {
        const ToyParams p = ToyParams::make(12, gamma, 0.0, kappa, Mechanism::Pairwise, scale);
        for (std::size_t m : {1u, 4u, 12u}) {
          const auto b0 = symmetric_state(m, 2, 12);
          const cplx b = collective_amplitude(b0, 12);
          CHECK(toy_efficiency(p, b) == doctest::Approx(std::norm(b) / 12.0).epsilon(1e-8));
        }
      }
}
