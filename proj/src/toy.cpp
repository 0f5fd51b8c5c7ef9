#include "lhcoh/toy.hpp"

#include "lhcoh/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lhcoh {

namespace {

constexpr double kDegenerateOmega = 1e-10;
// Relative decay margin (a - |Im Omega|) / a below which the closed form loses
// too many digits and F is integrated numerically instead.
constexpr double kNearSingularMargin = 1e-6;

struct DecayTerms {
  double a;  // Gamma + kappa
  double re; // Re Omega
  double im; // |Im Omega|
};

DecayTerms decay_terms(const ToyParams& p) {
  const cplx omega = complex_frequency(p);
  DecayTerms d{p.dissipation + p.trapping, omega.real(), std::abs(omega.imag())};
  if (!(d.a - d.im > 1e-12 * std::max(d.a, 1e-300)))
    throw std::domain_error("toy model: bright modes do not decay (Gamma + kappa <= |Im Omega|)");
  return d;
}

// int_0^inf t^n F(t) dt, n = 0, 1, by adaptive quadrature of the envelope.
std::array<double, 2> envelope_moments_numeric(const ToyParams& p, const DecayTerms& d) {
  const double slow = 0.5 * (d.a - d.im);
  const double horizon = (std::log(1e16) + 4.0) / slow;
  std::vector<double> breakpoints{0.0};
  for (double t = 1.0 / (d.a + std::abs(d.re) + d.im); t < horizon; t *= 2.0)
    breakpoints.push_back(t);
  breakpoints.push_back(horizon);
  const auto q = integrate_adaptive(
      [&](double t) {
        Eigen::ArrayXd v(2);
        const double f = toy_population_envelope(t, p);
        v << f, t * f;
        return v;
      },
      breakpoints, 0.0, 1e-13);
  return {q.value(0), q.value(1)};
}

} // namespace

Mechanism parse_mechanism(std::string_view name) {
  if (name == "nearest")
    return Mechanism::Nearest;
  if (name == "pairwise")
    return Mechanism::Pairwise;
  if (name == "dipole")
    return Mechanism::Dipole;
  throw std::invalid_argument("unknown mechanism '" + std::string(name) +
                              "' (expected nearest, pairwise or dipole)");
}

std::string_view mechanism_name(Mechanism m) {
  switch (m) {
  case Mechanism::Nearest:
    return "nearest";
  case Mechanism::Pairwise:
    return "pairwise";
  case Mechanism::Dipole:
    return "dipole";
  }
  return "?";
}

double ring_chord(std::size_t j, std::size_t k, std::size_t donors) {
  const double sep = static_cast<double>(j > k ? j - k : k - j);
  const double n = static_cast<double>(donors);
  return std::sin(std::numbers::pi * sep / n) / std::sin(std::numbers::pi / n);
}

double mechanism_coupling(Mechanism mechanism, double scale, std::size_t j, std::size_t k,
                          std::size_t donors) {
  if (j == k)
    return 0.0;
  switch (mechanism) {
  case Mechanism::Nearest: {
    const std::size_t sep = j > k ? j - k : k - j;
    if (donors == 2)
      return scale;
    return (sep == 1 || sep == donors - 1) ? 0.5 * scale : 0.0;
  }
  case Mechanism::Pairwise:
    return scale;
  case Mechanism::Dipole: {
    const double r = ring_chord(j, k, donors);
    return scale / (r * r * r);
  }
  }
  return 0.0;
}

double effective_delta(Mechanism mechanism, double scale, std::size_t donors) {
  if (donors <= 1)
    return 0.0;
  double delta = 0.0;
  for (std::size_t k = 1; k < donors; ++k)
    delta += mechanism_coupling(mechanism, scale, 0, k, donors);
  return delta;
}

double dipole_scale_for_mean_coupling(double mean_pair, std::size_t donors) {
  if (donors < 2)
    throw std::invalid_argument("dipole_scale_for_mean_coupling: need at least two donors");
  // Every donor of a ring sees the same neighbourhood, so the pair mean is Delta / (M - 1).
  const double unit_delta = effective_delta(Mechanism::Dipole, 1.0, donors);
  return mean_pair * static_cast<double>(donors - 1) / unit_delta;
}

ToyParams ToyParams::make(std::size_t donors, double gamma, double dissipation, double trapping,
                          Mechanism mechanism, double scale) {
  ToyParams p;
  p.donors = donors;
  p.gamma = gamma;
  p.dissipation = dissipation;
  p.trapping = trapping;
  p.mechanism = mechanism;
  p.scale = scale;
  p.delta = effective_delta(mechanism, scale, donors);
  validate(p);
  return p;
}

void validate(const ToyParams& p) {
  if (p.donors < 1)
    throw std::invalid_argument("toy: need at least one donor");
  if (!(p.dissipation >= 0.0) || !(p.trapping >= 0.0))
    throw std::invalid_argument("toy: rates must be >= 0");
  if (!std::isfinite(p.gamma) || !std::isfinite(p.scale) || !std::isfinite(p.dissipation) ||
      !std::isfinite(p.trapping))
    throw std::invalid_argument("toy: non-finite parameter");
  if (p.delta != effective_delta(p.mechanism, p.scale, p.donors))
    throw std::invalid_argument("toy: delta inconsistent with mechanism and scale");
}

NetworkSpec toy_network(const ToyParams& p) {
  validate(p);
  NetworkSpec s = NetworkSpec::zeros(p.donors, 1, 0);
  for (std::size_t j = 0; j < p.donors; ++j) {
    s.donor_acceptor(static_cast<Eigen::Index>(j), 0) = p.gamma;
    for (std::size_t k = 0; k < p.donors; ++k)
      s.donor_donor(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          mechanism_coupling(p.mechanism, p.scale, j, k, p.donors);
  }
  s.dissipation_rate = p.dissipation;
  s.trapping_rate = p.trapping;
  return s;
}

cplx complex_frequency(const ToyParams& p) {
  const cplx detuning(p.dissipation - p.trapping, p.delta);
  const double m = static_cast<double>(p.donors);
  return std::sqrt(4.0 * m * p.gamma * p.gamma - detuning * detuning);
}

ToyResponse toy_response(double t, const ToyParams& p) {
  return toy_response(t, p, complex_frequency(p));
}

ToyResponse toy_response(double t, const ToyParams& p, cplx omega) {
  const cplx x(p.trapping + p.dissipation, p.delta);
  const cplx detuning(p.dissipation - p.trapping, p.delta);
  const cplx envelope = std::exp(-x * t / 2.0);
  cplx sinc_half; // sin(Omega t / 2) / Omega
  if (std::abs(omega) < kDegenerateOmega)
    sinc_half = t / 2.0;
  else
    sinc_half = std::sin(omega * t / 2.0) / omega;
  ToyResponse r;
  r.f = cplx(0.0, -2.0 * p.gamma) * envelope * sinc_half;
  r.g = envelope * (detuning * sinc_half + std::cos(omega * t / 2.0));
  return r;
}

cplx acceptor_amplitude(double t, const ToyParams& p, const AmplitudeState& b0) {
  if (b0.dimension() != p.donors + 1)
    throw std::invalid_argument("acceptor_amplitude: state must have dimension M + 1");
  const auto r = toy_response(t, p);
  return r.f * collective_amplitude(b0, p.donors) +
         r.g * b0.amplitudes(static_cast<Eigen::Index>(p.donors));
}

double toy_population_envelope(double t, const ToyParams& p) {
  const cplx omega = complex_frequency(p);
  const double a = p.dissipation + p.trapping;
  double damped; // e^{-a t} |sin(Omega t / 2)|^2 / |Omega|^2
  if (std::abs(omega) < kDegenerateOmega) {
    damped = std::exp(-a * t) * t * t / 4.0;
  } else if (std::abs(omega) * t < 1.0) {
    const double s = std::abs(std::sin(omega * t / 2.0));
    damped = std::exp(-a * t) * s * s / std::norm(omega);
  } else {
    // |sin(x + iy)|^2 = (cosh 2y - cos 2x) / 2, with e^{-a t} folded into cosh.
    const double c = std::abs(omega.imag());
    const double folded = 0.5 * (std::exp(-(a - c) * t) + std::exp(-(a + c) * t)) -
                          std::exp(-a * t) * std::cos(omega.real() * t);
    damped = 0.5 * folded / std::norm(omega);
  }
  return 4.0 * p.gamma * p.gamma * damped;
}

double toy_efficiency(const ToyParams& p, cplx collective) {
  if (collective == cplx(0.0, 0.0))
    return 0.0;
  const auto d = decay_terms(p);
  const double weight = 2.0 * p.trapping * std::norm(collective);
  if ((d.a - d.im) / d.a < kNearSingularMargin)
    return weight * envelope_moments_numeric(p, d)[0];
  // int F = 2 gamma^2 a / ((a^2 - Im^2)(a^2 + Re^2)); |sin|^2 split into cosh and cos parts.
  const double a2 = d.a * d.a;
  const double integral =
      2.0 * p.gamma * p.gamma * d.a / ((a2 - d.im * d.im) * (a2 + d.re * d.re));
  return weight * integral;
}

double toy_transfer_time(const ToyParams& p) {
  if (p.gamma == 0.0)
    throw std::domain_error("toy model: no donor-acceptor coupling, transfer time undefined");
  const auto d = decay_terms(p);
  if ((d.a - d.im) / d.a < kNearSingularMargin) {
    const auto moments = envelope_moments_numeric(p, d);
    return moments[1] / moments[0];
  }
  const double a2 = d.a * d.a;
  const double c2 = d.im * d.im;
  const double r2 = d.re * d.re;
  return (3.0 * a2 * a2 + a2 * (r2 - c2) + c2 * r2) / (d.a * (a2 - c2) * (a2 + r2));
}

} // namespace lhcoh
