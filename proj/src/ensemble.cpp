#include "lhcoh/ensemble.hpp"

#include "lhcoh/philox.hpp"
#include "lhcoh/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace lhcoh {

namespace {

// Welford accumulation in a fixed order; identical samples give zero spread exactly.
struct Running {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  void add(double x) {
    ++n;
    if (n == 1) {
      lo = hi = x;
    } else {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double value() const { return std::clamp(mean, lo, hi); }
  double stderr_of_mean() const {
    if (n < 2)
      return 0.0;
    const double var = std::max(m2, 0.0) / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
  }
};

} // namespace

NetworkSpec sample_disorder(const NetworkSpec& spec, double sigma, std::uint64_t realization,
                            std::uint64_t master_seed, bool donors_only) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("sample_disorder: sigma must be finite and >= 0");
  NetworkSpec out = spec;
  if (sigma == 0.0)
    return out;
  const std::size_t sites = donors_only ? spec.donors : spec.dimension();
  for (std::size_t a = 0; a < sites; ++a)
    out.site_energies(static_cast<Eigen::Index>(a)) +=
        sigma * keyed_normal(master_seed, realization, a);
  return out;
}

WindowAverage window_average(const ObservableForms& forms, std::size_t donors,
                             std::size_t dimension, WindowKind kind, std::size_t m,
                             const std::vector<std::size_t>& offsets, double tol) {
  if (m < 1 || m > donors)
    throw std::invalid_argument("window_average: m must lie in [1, M]");
  std::vector<std::size_t> all;
  const std::vector<std::size_t>* use = &offsets;
  if (offsets.empty()) {
    all.resize(donors);
    std::iota(all.begin(), all.end(), std::size_t{1});
    use = &all;
  }

  WindowAverage out;
  Running eta, tf, tau;
  for (std::size_t offset : *use) {
    const auto result = forms.evaluate(window_state(kind, m, offset, donors, dimension), tol);
    if (!result) {
      ++out.diverged;
      continue;
    }
    ++out.windows;
    eta.add(result->efficiency);
    tau.add(result->lifetime);
    if (result->transfer_time)
      tf.add(*result->transfer_time);
    else
      ++out.undefined_tf;
  }
  out.efficiency = eta.value();
  out.lifetime = tau.value();
  if (tf.n > 0)
    out.transfer_time = tf.value();
  return out;
}

WindowAverage window_average(const NetworkSpec& spec, WindowKind kind, std::size_t m) {
  const ObservableForms forms(build_conditional_hamiltonian(spec));
  return window_average(forms, spec.donors, spec.dimension(), kind, m);
}

std::size_t SweepResult::total_diverged() const {
  std::size_t n = 0;
  for (const auto& r : rows)
    n += r.diverged;
  return n;
}

SweepResult ensemble_sweep(const NetworkSpec& spec, WindowKind kind,
                           const std::vector<std::size_t>& m_values,
                           const std::vector<double>& sigma_list_cm1, const DisorderModel& disorder,
                           const SweepOptions& options) {
  validate(spec);
  if (disorder.realizations < 1)
    throw std::invalid_argument("ensemble_sweep: need at least one realization");
  if (m_values.empty() || sigma_list_cm1.empty())
    throw std::invalid_argument("ensemble_sweep: empty m or sigma list");
  for (std::size_t m : m_values)
    if (m < 1 || m > spec.donors)
      throw std::invalid_argument("ensemble_sweep: m = " + std::to_string(m) +
                                  " outside [1, " + std::to_string(spec.donors) + "]");
  for (double s : sigma_list_cm1)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("ensemble_sweep: sigma must be finite and >= 0");

  const std::size_t n_sigma = sigma_list_cm1.size();
  const std::size_t n_real = disorder.realizations;
  const std::size_t n_m = m_values.size();
  // samples[(s * n_real + r) * n_m + k]
  std::vector<WindowAverage> samples(n_sigma * n_real * n_m);

  auto run_task = [&](std::size_t task) {
    const std::size_t s = task / n_real;
    const std::size_t r = task % n_real;
    const NetworkSpec disordered = sample_disorder(spec, cm1(sigma_list_cm1[s]), r,
                                                   disorder.master_seed, disorder.donors_only);
    const ObservableForms forms(build_conditional_hamiltonian(disordered));
    for (std::size_t k = 0; k < n_m; ++k) {
      std::vector<std::size_t> offsets;
      if (options.window_mode == WindowMode::OnePerRealization)
        offsets.push_back(1 + keyed_index(disorder.master_seed, r, m_values[k], spec.donors));
      samples[task * n_m + k] = window_average(forms, spec.donors, spec.dimension(), kind,
                                               m_values[k], offsets, options.tol);
    }
  };

  const std::size_t tasks = n_sigma * n_real;
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(options.workers, 1, tasks));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      try {
        run_task(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }
  if (failure)
    std::rethrow_exception(failure);

  SweepResult result;
  result.kind = kind;
  for (std::size_t s = 0; s < n_sigma; ++s) {
    for (std::size_t k = 0; k < n_m; ++k) {
      SweepRow row;
      row.m = m_values[k];
      row.sigma_cm1 = sigma_list_cm1[s];
      row.windows = options.window_mode == WindowMode::AllOffsets ? spec.donors : 1;
      Running eta, tf, tau;
      for (std::size_t r = 0; r < n_real; ++r) {
        const auto& w = samples[(s * n_real + r) * n_m + k];
        if (w.diverged > 0) {
          ++row.diverged;
          continue;
        }
        eta.add(w.efficiency);
        tau.add(w.lifetime);
        row.undefined_tf += w.undefined_tf;
        if (w.transfer_time)
          tf.add(*w.transfer_time);
      }
      row.realizations = eta.n;
      if (eta.n > 0) {
        row.eta_mean = eta.value();
        row.eta_stderr = eta.stderr_of_mean();
        row.eta_min = eta.lo;
        row.eta_max = eta.hi;
        row.tau_mean = tau.value();
      }
      if (tf.n > 0) {
        row.tf_mean = tf.value();
        row.tf_stderr = tf.stderr_of_mean();
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

} // namespace lhcoh
