#include "lhcoh/sylvester.hpp"

#include <Eigen/Eigenvalues>

#include <limits>
#include <stdexcept>

namespace lhcoh {

ConditionalSylvester::ConditionalSylvester(const Eigen::MatrixXcd& g) {
  if (g.rows() != g.cols())
    throw std::invalid_argument("ConditionalSylvester: matrix must be square");
  if (!g.allFinite())
    throw std::invalid_argument("ConditionalSylvester: non-finite matrix entry");
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(g);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("ConditionalSylvester: Schur decomposition failed");
  unitary_ = schur.matrixU();
  triangular_ = schur.matrixT();
}

double ConditionalSylvester::separation() const {
  double sep = std::numeric_limits<double>::infinity();
  const auto d = triangular_.diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    for (Eigen::Index j = 0; j < d.size(); ++j)
      sep = std::min(sep, std::abs(d(i) - std::conj(d(j))));
  return sep;
}

Eigen::MatrixXcd ConditionalSylvester::solve(const Eigen::MatrixXcd& rhs) const {
  const Eigen::Index n = triangular_.rows();
  if (rhs.rows() != n || rhs.cols() != n)
    throw std::invalid_argument("ConditionalSylvester::solve: dimension mismatch");

  // T Y - Y T^dagger = F with F = Q^dagger C Q. Column j of Y T^dagger is
  // sum_{k>=j} conj(T(j,k)) y_k, so columns are resolved from last to first,
  // each by back substitution with the shifted upper triangle T - conj(T_jj).
  const Eigen::MatrixXcd f = unitary_.adjoint() * rhs * unitary_;
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd col(n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    col = f.col(j);
    for (Eigen::Index k = j + 1; k < n; ++k)
      col += std::conj(triangular_(j, k)) * y.col(k);
    const std::complex<double> shift = std::conj(triangular_(j, j));
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      std::complex<double> acc = col(i);
      for (Eigen::Index k = i + 1; k < n; ++k)
        acc -= triangular_(i, k) * y(k, j);
      const std::complex<double> pivot = triangular_(i, i) - shift;
      if (pivot == std::complex<double>(0.0, 0.0))
        throw std::runtime_error("ConditionalSylvester::solve: singular equation");
      y(i, j) = acc / pivot;
    }
  }
  return unitary_ * y * unitary_.adjoint();
}

} // namespace lhcoh
