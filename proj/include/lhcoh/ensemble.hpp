#pragma once

#include "lhcoh/network.hpp"
#include "lhcoh/observables.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lhcoh {

struct DisorderModel {
  double sigma_cm1 = 0.0;
  std::uint64_t master_seed = 0;
  std::size_t realizations = 1;
  bool donors_only = false;
};

/// Adds an independent Gaussian shift of width `sigma` (ps^-1) to every site
/// energy (donors only if requested). Draw for site a of realization r is
/// keyed_normal(seed, r, a): a pure function of the keys.
NetworkSpec sample_disorder(const NetworkSpec& spec, double sigma, std::uint64_t realization,
                            std::uint64_t master_seed, bool donors_only = false);

struct WindowAverage {
  double efficiency = 0.0;
  std::optional<double> transfer_time; // mean over windows where t_f is defined
  double lifetime = 0.0;
  std::size_t windows = 0;             // converged windows
  std::size_t undefined_tf = 0;
  std::size_t diverged = 0;
};

/// Average over the given 1-based window offsets (all M offsets by default).
WindowAverage window_average(const ObservableForms& forms, std::size_t donors,
                             std::size_t dimension, WindowKind kind, std::size_t m,
                             const std::vector<std::size_t>& offsets = {}, double tol = 1e-9);
WindowAverage window_average(const NetworkSpec& spec, WindowKind kind, std::size_t m);

enum class WindowMode { AllOffsets, OnePerRealization };

struct SweepOptions {
  unsigned workers = 1;
  WindowMode window_mode = WindowMode::AllOffsets;
  double tol = 1e-9;
};

struct SweepRow {
  std::size_t m = 0;
  double sigma_cm1 = 0.0;
  double eta_mean = 0.0;
  double eta_stderr = 0.0;
  std::optional<double> tf_mean;
  std::optional<double> tf_stderr;
  double tau_mean = 0.0;
  std::size_t windows = 0;       // windows evaluated per realization
  std::size_t realizations = 0;  // realizations contributing to the means
  std::size_t undefined_tf = 0;  // windows without a defined t_f, summed over realizations
  std::size_t diverged = 0;      // realizations excluded because a window diverged
  // Range of the per-realization samples behind eta_mean.
  double eta_min = 0.0;
  double eta_max = 0.0;
};

struct SweepResult {
  WindowKind kind = WindowKind::Symmetric;
  std::vector<SweepRow> rows; // sigma-major, then m in the order given
  std::size_t total_diverged() const;
};

/// Disorder-ensemble sweep over sigma values (cm^-1) and delocalization
/// lengths. Work is split over realizations; results depend only on the
/// arguments, never on the worker count or scheduling.
SweepResult ensemble_sweep(const NetworkSpec& spec, WindowKind kind,
                           const std::vector<std::size_t>& m_values,
                           const std::vector<double>& sigma_list_cm1, const DisorderModel& disorder,
                           const SweepOptions& options = {});

} // namespace lhcoh
