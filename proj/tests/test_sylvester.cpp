#include "lhcoh/sylvester.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <random>

using namespace lhcoh;

namespace {

// Dense oracle: vec(G X - X G^dagger) = (I (x) G - conj(G) (x) I) vec(X).
Eigen::MatrixXcd kronecker_solve(const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& c) {
  const Eigen::Index n = g.rows();
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j)
        big.block(i * n, j * n, n, n) += g;
      big.block(i * n, j * n, n, n) -= std::conj(g(j, i)) * Eigen::MatrixXcd::Identity(n, n);
    }
  const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(c.data(), n * n);
  const Eigen::VectorXcd x = big.fullPivLu().solve(rhs);
  return Eigen::Map<const Eigen::MatrixXcd>(x.data(), n, n);
}

Eigen::MatrixXcd random_conditional(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = nd(rng);
  Eigen::MatrixXcd h = ((a + a.transpose()) / 2.0).cast<std::complex<double>>();
  for (int i = 0; i < n; ++i)
    h(i, i) -= std::complex<double>(0.0, 0.1 + std::abs(nd(rng)));
  return h;
}

} // namespace

TEST_CASE("Bartels-Stewart agrees with the Kronecker oracle") {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 5, 8}) {
    const Eigen::MatrixXcd g = random_conditional(n, rng);
    const Eigen::MatrixXcd c = Eigen::MatrixXcd::Random(n, n);
    const ConditionalSylvester solver(g);
    const Eigen::MatrixXcd x = solver.solve(c);
    CHECK((g * x - x * g.adjoint() - c).norm() < 1e-12 * (1.0 + c.norm()));
    CHECK((x - kronecker_solve(g, c)).norm() < 1e-10 * (1.0 + x.norm()));
    CHECK(solver.separation() > 0.0);
  }
}

TEST_CASE("anti-Hermitian right-hand sides give Hermitian solutions") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXcd g = random_conditional(6, rng);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Random(6, 6);
  c = (c - c.adjoint()).eval();
  const Eigen::MatrixXcd x = ConditionalSylvester(g).solve(c);
  CHECK((x - x.adjoint()).norm() < 1e-12 * x.norm());
}

TEST_CASE("a non-decaying mode makes the equation singular") {
  Eigen::MatrixXcd g(2, 2);
  g << 1.0, 0.0, 0.0, std::complex<double>(0.0, -1.0);
  const ConditionalSylvester solver(g);
  CHECK(solver.separation() < 1e-14);
  CHECK_THROWS(solver.solve(Eigen::MatrixXcd::Identity(2, 2)));
}
