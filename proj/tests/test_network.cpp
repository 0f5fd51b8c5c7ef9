#include "lhcoh/network.hpp"

#include <doctest.h>

#include <cmath>

using namespace lhcoh;

namespace {

NetworkSpec small_network() {
  NetworkSpec s = NetworkSpec::zeros(3, 1, 1);
  s.site_energies << 0.1, 0.2, 0.3, -0.4, 0.5;
  s.donor_donor << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  s.donor_acceptor << 0.5, 0.6, 0.7;
  s.accessory_donor << 0.1, 0.2, 0.3;
  s.accessory_acceptor << 0.9;
  s.dissipation_rate = 0.001;
  s.trapping_rate = 4.0;
  return s;
}

} // namespace

TEST_CASE("conditional Hamiltonian places rates by role") {
  const auto h = build_conditional_hamiltonian(small_network());
  REQUIRE(h.dimension() == 5);
  CHECK(h.roles[0] == SiteRole::Donor);
  CHECK(h.roles[3] == SiteRole::Acceptor);
  CHECK(h.roles[4] == SiteRole::Accessory);
  CHECK(h.matrix(3, 3) == cplx(-0.4, -4.0));
  CHECK(h.matrix(4, 4) == cplx(0.5, -0.001));
  CHECK(h.matrix(0, 3) == cplx(0.5, 0.0));
  CHECK(h.matrix(4, 3) == cplx(0.9, 0.0));
  CHECK(h.matrix(1, 4) == cplx(0.2, 0.0));
  const Eigen::MatrixXcd herm = h.matrix + Eigen::MatrixXcd(h.decay_rates.cast<cplx>().asDiagonal()) * cplx(0, 1);
  CHECK((herm - herm.adjoint()).norm() < 1e-15);
}

TEST_CASE("validate names the offending field") {
  auto s = small_network();
  s.donor_donor(0, 1) = 5.0;
  CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("donor_donor"), std::invalid_argument);
  s = small_network();
  s.donor_acceptor = Eigen::MatrixXd::Zero(2, 1);
  CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("donor_acceptor"), std::invalid_argument);
  s = small_network();
  s.trapping_rate = -1.0;
  CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("trapping_rate"), std::invalid_argument);
  s = small_network();
  s.donor_donor(2, 2) = 1.0;
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s = small_network();
  s.site_energies.resize(4);
  CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("site_energies"), std::invalid_argument);
}

TEST_CASE("window states are normalized with the expected collective amplitude") {
  for (std::size_t m = 1; m <= 32; ++m) {
    const auto s = symmetric_state(m, 1, 32);
    const auto a = asymmetric_state(m, 7, 32, 36);
    CHECK(s.norm_squared() == doctest::Approx(1.0));
    CHECK(a.norm_squared() == doctest::Approx(1.0));
    CHECK(a.dimension() == 36);
    CHECK(std::norm(collective_amplitude(s, 32)) == doctest::Approx(double(m)));
    const double expected = m % 2 == 0 ? 0.0 : 1.0 / double(m);
    CHECK(std::norm(collective_amplitude(a, 32)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("window wraps cyclically and the sign counts from the window start") {
  const auto a = asymmetric_state(4, 31, 32);
  const double x = 0.5;
  CHECK(a.amplitudes(30) == cplx(-x, 0));
  CHECK(a.amplitudes(31) == cplx(x, 0));
  CHECK(a.amplitudes(0) == cplx(-x, 0));
  CHECK(a.amplitudes(1) == cplx(x, 0));
  CHECK(a.amplitudes(2) == cplx(0, 0));
}

TEST_CASE("window parameters are checked") {
  CHECK_THROWS_AS(symmetric_state(0, 1, 32), std::invalid_argument);
  CHECK_THROWS_AS(symmetric_state(33, 1, 32), std::invalid_argument);
  CHECK_THROWS_AS(symmetric_state(3, 0, 32), std::invalid_argument);
  CHECK_THROWS_AS(symmetric_state(3, 1, 32, 10), std::invalid_argument);
}
