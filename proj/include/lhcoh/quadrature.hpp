#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>

namespace lhcoh {

struct QuadratureResult {
  Eigen::ArrayXd value;
  Eigen::ArrayXd error;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using VectorIntegrand = std::function<Eigen::ArrayXd(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature of a vector-valued
/// integrand over [breakpoints.front(), breakpoints.back()]. The interval with
/// the largest normalized error is bisected until every component satisfies
/// error <= max(abs_tol, rel_tol * |value|), or `max_intervals` is reached.
QuadratureResult integrate_adaptive(const VectorIntegrand& f, std::span<const double> breakpoints,
                                    double abs_tol, double rel_tol,
                                    std::size_t max_intervals = 200000);

} // namespace lhcoh
