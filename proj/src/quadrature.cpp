#include "lhcoh/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace lhcoh {

namespace {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd entries are Gauss nodes.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  Eigen::ArrayXd value;
  Eigen::ArrayXd error;
  double priority = 0.0;
};

Panel gauss_kronrod(const VectorIntegrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Eigen::ArrayXd fc = f(center);
  Eigen::ArrayXd kronrod = kWgk[7] * fc;
  Eigen::ArrayXd gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    Eigen::ArrayXd sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[i] * sum;
    if (i % 2 == 1)
      gauss += kWg[i / 2] * sum;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.error = ((kronrod - gauss) * half).abs();
  return p;
}

struct ByPriority {
  bool operator()(const Panel& x, const Panel& y) const { return x.priority < y.priority; }
};

} // namespace

QuadratureResult integrate_adaptive(const VectorIntegrand& f, std::span<const double> breakpoints,
                                    double abs_tol, double rel_tol, std::size_t max_intervals) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
  if (!(abs_tol > 0.0) && !(rel_tol > 0.0))
    throw std::invalid_argument("integrate_adaptive: need a positive tolerance");

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i]))
      throw std::invalid_argument("integrate_adaptive: breakpoints must increase");
    panels.push_back(gauss_kronrod(f, breakpoints[i], breakpoints[i + 1]));
  }

  QuadratureResult result;
  result.value = Eigen::ArrayXd::Zero(panels.front().value.size());
  result.error = Eigen::ArrayXd::Zero(panels.front().value.size());
  for (const auto& p : panels) {
    result.value += p.value;
    result.error += p.error;
  }

  auto targets = [&] { return (rel_tol * result.value.abs()).max(abs_tol); };
  auto priority = [&](const Panel& p, const Eigen::ArrayXd& target) {
    return (p.error / target).maxCoeff();
  };

  std::priority_queue<Panel, std::vector<Panel>, ByPriority> queue;
  {
    const Eigen::ArrayXd target = targets();
    for (auto& p : panels) {
      p.priority = priority(p, target);
      queue.push(std::move(p));
    }
  }

  std::size_t count = queue.size();
  while (true) {
    const Eigen::ArrayXd target = targets();
    if ((result.error <= target).all()) {
      result.converged = true;
      break;
    }
    if (count >= max_intervals)
      break;
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      break; // interval no longer divisible in floating point
    Panel left = gauss_kronrod(f, worst.a, mid);
    Panel right = gauss_kronrod(f, mid, worst.b);
    result.value += left.value + right.value - worst.value;
    result.error += left.error + right.error - worst.error;
    // Running sums drift; clamp so a tiny negative error never stalls the loop.
    result.error = result.error.max(0.0);
    left.priority = priority(left, target);
    right.priority = priority(right, target);
    queue.push(std::move(left));
    queue.push(std::move(right));
    ++count;
  }

  // Re-sum from the surviving panels to remove drift accumulated by updates.
  result.value.setZero();
  result.error.setZero();
  result.intervals = queue.size();
  while (!queue.empty()) {
    result.value += queue.top().value;
    result.error += queue.top().error;
    queue.pop();
  }
  result.evaluations = 15 * (panels.size() + 2 * (count - panels.size()));
  return result;
}

} // namespace lhcoh
