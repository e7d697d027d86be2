#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "fpemd/classical_emd.hpp"
#include "fpemd/decomposition.hpp"
#include "fpemd/error.hpp"
#include "fpemd/heat_solver.hpp"
#include "fpemd/numeric.hpp"
#include "fpemd/pde_params.hpp"
#include "fpemd/signal.hpp"

// Forward-PDE sifting. The mean curve of h is its heat evolution to time T;
// each sifting step replaces h by h - mean_curve(h). On a Fourier mode of
// angular frequency ω one step multiplies the amplitude by 1 - exp(-a ω^2 T),
// so N steps act as the high-pass gain (1 - exp(-a ω^2 T))^N.
namespace fpemd {

struct PdeParams {
  double a = 1.0;       // diffusivity, s^2
  double T = 10.0;      // evolution time
  int N = 100;          // sifting iterations per IMF
  double delta = 0.5;   // suppression threshold
  BoundaryCondition bc = BoundaryCondition::periodic;
  int fd_time_steps = 1000;     // Crank-Nicolson steps for non-periodic boundaries
  bool imf_early_exit = false;  // stop sifting once imf_check passes

  void validate() const {
    detail::require(std::isfinite(a) && a > 0.0, "a must be > 0");
    detail::require(std::isfinite(T) && T > 0.0, "T must be > 0");
    detail::require(N >= 1, "N must be >= 1");
    detail::require(std::isfinite(delta) && delta > 0.0 && delta < 1.0, "delta must be in (0, 1)");
    detail::require(fd_time_steps >= 1, "fd_time_steps must be >= 1");
  }
};

/// Per-mode gain after N sifting steps, (1 - e^{-a ω^2 T})^N.
inline double attenuation(double omega, double a, double T, int N) {
  detail::require(std::isfinite(omega) && omega >= 0.0, "omega must be >= 0");
  detail::require(a > 0.0 && T > 0.0 && N >= 1, "attenuation needs a > 0, T > 0, N >= 1");
  return std::pow(-std::expm1(-a * omega * omega * T), N);
}

inline std::vector<double> mean_curve(const Signal& signal, const PdeParams& params) {
  params.validate();
  return evolve(signal, HeatEvolution{params.a, params.T, params.bc}, params.fd_time_steps);
}

/// Applies h <- h - mean_curve(h) exactly N times (or until imf_check passes
/// when imf_early_exit is set).
inline SiftResult sift_pde(const Signal& signal, const PdeParams& params) {
  params.validate();
  detail::require(signal.size() >= 2, "sift_pde needs at least 2 samples");
  std::vector<double> h(signal.values());
  int iterations = 0;
  while (iterations < params.N) {
    const auto m = mean_curve(signal.with_samples(h), params);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] -= m[i];
    ++iterations;
    if (params.imf_early_exit && h.size() >= 3 && imf_check(signal.with_samples(h), SiftConfig{}).pass) break;
  }
  return {signal.with_samples(std::move(h)), iterations};
}

struct PdeDecomposeOptions {
  int max_imfs = 10;
  // Re-estimate a from the residual before every stage after the first.
  bool reestimate_diffusivity = true;
  ZeroCrossingOptions zero_crossings{};
};

/// Copy of `params` with a estimated from the signal's zero-crossing rate.
inline PdeParams with_estimated_diffusivity(PdeParams params, const Signal& signal,
                                            ZeroCrossingOptions options = {}) {
  params.a = a_from_zero_crossings(signal, options);
  return params;
}

/// Extracts IMFs with sift_pde, subtracting each from the residual. Stage one
/// uses params.a; later stages re-estimate a from the residual's zero-crossing
/// rate. Stops when the residual's dominant frequency is below one cycle per
/// window (fewer than two crossings) or max_imfs is reached.
inline Decomposition decompose_pde(const Signal& signal, const PdeParams& params,
                                   const PdeDecomposeOptions& options = {}) {
  params.validate();
  detail::require(options.max_imfs >= 1, "max_imfs must be >= 1");
  Decomposition d{.imfs = {}, .residual = signal, .method = Method::forward_pde};
  std::vector<double> residual(signal.values());
  PdeParams stage = params;
  while (static_cast<int>(d.imfs.size()) < options.max_imfs) {
    const Signal current = signal.with_samples(residual);
    if (count_zero_crossings(current.samples(), options.zero_crossings.hysteresis) < 2) break;
    if (!d.imfs.empty() && options.reestimate_diffusivity)
      stage.a = a_from_zero_crossings(current, options.zero_crossings);
    auto [imf, iterations] = sift_pde(current, stage);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= imf[i];
    d.imfs.push_back(std::move(imf));
    d.iterations_per_imf.push_back(iterations);
    d.diffusivity_per_imf.push_back(stage.a);
  }
  d.residual = signal.with_samples(std::move(residual));
  return d;
}

inline Decomposition decompose_pde(const Signal& signal, const PdeParams& params, int max_imfs) {
  return decompose_pde(signal, params, PdeDecomposeOptions{.max_imfs = max_imfs});
}

}  // namespace fpemd
