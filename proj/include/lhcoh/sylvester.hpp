#pragma once

#include <Eigen/Dense>

namespace lhcoh {

/// Solves G X - X G^dagger = C for small dense complex G by the Bartels-Stewart
/// method on the complex Schur form G = Q T Q^dagger. The Schur factorization
/// is computed once and reused for every right-hand side. Solvable iff no
/// eigenvalue pair satisfies lambda_i = conj(lambda_j); for a conditional
/// Hamiltonian with every mode decaying this always holds.
class ConditionalSylvester {
public:
  explicit ConditionalSylvester(const Eigen::MatrixXcd& g);

  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;

  /// Eigenvalues of G (diagonal of the triangular factor).
  Eigen::VectorXcd eigenvalues() const { return triangular_.diagonal(); }

  /// min_{i,j} |lambda_i - conj(lambda_j)|; zero means singular.
  double separation() const;

private:
  Eigen::MatrixXcd unitary_;
  Eigen::MatrixXcd triangular_;
};

} // namespace lhcoh
