#pragma once

#include "lhcoh/network.hpp"

#include <optional>
#include <string_view>

namespace lhcoh {

enum class Mechanism { Nearest, Pairwise, Dipole };

Mechanism parse_mechanism(std::string_view name);
std::string_view mechanism_name(Mechanism m);

/// Distance between donors j and k on a regular M-ring, in units of the
/// nearest-neighbour spacing: sin(pi |j-k| / M) / sin(pi / M).
double ring_chord(std::size_t j, std::size_t k, std::size_t donors);

/// Donor-donor coupling J_jk (0-based j != k) for a mechanism of scale J.
/// Nearest: J/2 per bond (for M = 2 both bonds join the same pair, giving J).
double mechanism_coupling(Mechanism mechanism, double scale, std::size_t j, std::size_t k,
                          std::size_t donors);

/// Delta = sum_k J_jk, identical for every donor of the ring.
double effective_delta(Mechanism mechanism, double scale, std::size_t donors);

/// Scale J for which the mean pair coupling over all donor pairs equals `mean_pair`.
double dipole_scale_for_mean_coupling(double mean_pair, std::size_t donors);

// Exchange-invariant toy model: M resonant donors around one acceptor.
struct ToyParams {
  std::size_t donors = 32;
  double gamma = 0.0;        // donor-acceptor coupling
  double dissipation = 0.0;  // Gamma
  double trapping = 0.0;     // kappa
  Mechanism mechanism = Mechanism::Nearest;
  double scale = 0.0;        // J
  double delta = 0.0;        // derived, effective_delta(mechanism, J, M)

  static ToyParams make(std::size_t donors, double gamma, double dissipation, double trapping,
                        Mechanism mechanism, double scale);
};

void validate(const ToyParams& p);

NetworkSpec toy_network(const ToyParams& p);

/// Omega = sqrt(4 M gamma^2 - (Gamma - kappa + i Delta)^2), principal branch.
cplx complex_frequency(const ToyParams& p);

struct ToyResponse {
  cplx f; // multiplies B0
  cplx g; // multiplies b_{M+1}(0)
};

/// Response functions of the closed-form acceptor amplitude. An optional
/// explicit Omega exists so tests can evaluate the other branch.
ToyResponse toy_response(double t, const ToyParams& p);
ToyResponse toy_response(double t, const ToyParams& p, cplx omega);

/// b_{M+1}(t) = f(t) B0 + g(t) b_{M+1}(0); b0 has dimension M + 1.
cplx acceptor_amplitude(double t, const ToyParams& p, const AmplitudeState& b0);

/// F(t) with |b_{M+1}(t)|^2 = F(t) |B0|^2 when the acceptor starts empty.
double toy_population_envelope(double t, const ToyParams& p);

/// eta = 2 kappa |B0|^2 int_0^inf F dt in closed form. Throws std::domain_error
/// when the bright pair does not decay (Gamma + kappa <= |Im Omega|).
double toy_efficiency(const ToyParams& p, cplx collective);

/// t_f = int t F / int F, independent of the initial donor amplitudes.
double toy_transfer_time(const ToyParams& p);

} // namespace lhcoh
