#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "fpemd/error.hpp"
#include "fpemd/fft.hpp"
#include "fpemd/numeric.hpp"
#include "fpemd/signal.hpp"

// Choosing the diffusivity a and the (T, N, delta, f0) relations.
//
// With a = 1/ω_max^2 a tone at frequency ratio f = ω/ω_max survives N sifting
// iterations with gain (1 - exp(-f^2 T))^N. The cutoff ratio f0 is the ratio
// at which the lower tone's gain relative to the top tone's falls to delta:
//
//     [(1 - exp(-f0^2 T)) / (1 - exp(-T))]^N = delta.
namespace fpemd {

/// a = 1 / (4 pi^2 fs^2): never exceeds 1/ω^2 for any resolvable ω.
inline double a_default(double sample_rate) {
  detail::require(std::isfinite(sample_rate) && sample_rate > 0.0, "sample_rate must be positive");
  const double w = 2.0 * std::numbers::pi * sample_rate;
  return 1.0 / (w * w);
}

/// Schmitt-trigger zero-crossing count. A crossing is a transition from above
/// +h to below -h or back, where h = hysteresis * max|x|. With hysteresis 0
/// this is a plain sign-change count (exact zeros keep the previous sign).
inline std::size_t count_zero_crossings(std::span<const double> x, double hysteresis) {
  detail::require(hysteresis >= 0.0 && hysteresis < 1.0, "hysteresis must be in [0, 1)");
  const double h = hysteresis * max_abs(x);
  std::size_t count = 0;
  int state = 0;
  for (double v : x) {
    int s = 0;
    if (v > h) s = 1;
    else if (v < -h) s = -1;
    if (s == 0) continue;
    if (state != 0 && s != state) ++count;
    state = s;
  }
  return count;
}

struct ZeroCrossingOptions {
  // Fraction of the peak magnitude treated as zero. Keeps low-level ripple
  // (noise, numerical leftovers in a residual) from dominating the estimate.
  double hysteresis = 0.05;
};

/// Dominant frequency in Hz: crossings / (2 * duration).
inline double dominant_frequency_zcr(const Signal& signal, ZeroCrossingOptions options = {}) {
  const auto crossings = count_zero_crossings(signal.samples(), options.hysteresis);
  if (crossings < 2)
    throw numeric_domain_error("zero-crossing estimator needs at least 2 crossings, found " +
                               std::to_string(crossings));
  return static_cast<double>(crossings) / (2.0 * signal.duration());
}

/// a = 1 / ω^2 with ω = 2 pi f and f from the zero-crossing rate.
inline double a_from_zero_crossings(const Signal& signal, ZeroCrossingOptions options = {}) {
  const double w = 2.0 * std::numbers::pi * dominant_frequency_zcr(signal, options);
  return 1.0 / (w * w);
}

struct AutocorrelationOptions {
  double min_peak = 0.2;  // normalized correlation a peak must exceed
};

/// Biased, mean-removed sample autocorrelation normalized to r[0] = 1.
inline std::vector<double> autocorrelation(std::span<const double> x) {
  const std::size_t n = x.size();
  detail::require(n >= 2, "autocorrelation needs at least 2 samples");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> padded(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) padded[i] = x[i] - mean;
  auto bins = fft::rfft(padded);
  for (auto& b : bins) b = std::norm(b);
  auto r = fft::irfft(bins, padded.size());
  r.resize(n);
  if (!(r[0] > 0.0)) throw numeric_domain_error("autocorrelation of a constant signal is undefined");
  const double r0 = r[0];
  for (double& v : r) v /= r0;
  return r;
}

/// a = 1 / ω^2 with ω = 2 pi / tau*, tau* the first positive lag at which the
/// autocorrelation has a strict local maximum above min_peak.
inline double a_from_autocorrelation(const Signal& signal, AutocorrelationOptions options = {}) {
  const auto r = autocorrelation(signal.samples());
  for (std::size_t lag = 1; lag + 1 < r.size(); ++lag) {
    if (r[lag] > r[lag - 1] && r[lag] > r[lag + 1] && r[lag] > options.min_peak) {
      const double tau = static_cast<double>(lag) / signal.sample_rate();
      const double w = 2.0 * std::numbers::pi / tau;
      return 1.0 / (w * w);
    }
  }
  throw numeric_domain_error("no autocorrelation peak above " + std::to_string(options.min_peak));
}

namespace detail {

inline void require_cutoff_args(int N, double delta) {
  require(N >= 1, "N must be >= 1");
  require(std::isfinite(delta) && delta > 0.0 && delta < 1.0, "delta must be in (0, 1)");
}

// 1 - exp(-x) without cancellation for small x.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

// Bisection on an increasing function to full double resolution.
template <typename F>
double bisect_increasing(F f, double lo, double hi) {
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, max_iter);
  return 0.5 * (a + b);
}

}  // namespace detail

/// Left-hand side of the cutoff relation, [(1 - e^{-f^2 T}) / (1 - e^{-T})]^N.
inline double cutoff_ratio(double f0, int N, double T) {
  return std::pow(detail::one_minus_exp_neg(f0 * f0 * T) / detail::one_minus_exp_neg(T), N);
}

/// The f0 in (0, 1) solving cutoff_ratio(f0, N, T) = delta, by bisection.
inline double cutoff_frequency(int N, double T, double delta) {
  detail::require_cutoff_args(N, delta);
  detail::require(std::isfinite(T) && T > 0.0, "T must be > 0");
  return detail::bisect_increasing([&](double f) { return cutoff_ratio(f, N, T) - delta; }, 0.0, 1.0);
}

/// T solving (1 - e^{-T})^N = 1 - delta, by bisection.
inline double solve_T(int N, double delta) {
  detail::require_cutoff_args(N, delta);
  auto g = [&](double T) { return std::pow(detail::one_minus_exp_neg(T), N) - (1.0 - delta); };
  double hi = 1.0;
  while (g(hi) <= 0.0) hi *= 2.0;
  return detail::bisect_increasing(g, 0.0, hi);
}

/// Closed form f0 = sqrt( log(1 - (delta/alpha)^{1/N} (1 - epsilon)) / log(epsilon) ),
/// evaluated exactly as written, epsilon = e^{-T}. With alpha = 1 it coincides
/// with cutoff_frequency; alpha rescales delta.
inline double cutoff_frequency_closed_form(int N, double epsilon, double delta, double alpha) {
  detail::require(N >= 1, "N must be >= 1");
  detail::require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon < 1.0, "epsilon must be in (0, 1)");
  detail::require(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
  detail::require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
  const double inner = std::pow(delta / alpha, 1.0 / N) * (1.0 - epsilon);
  if (!(inner > 0.0 && inner < 1.0))
    throw numeric_domain_error("closed-form cutoff: (delta/alpha)^(1/N) (1 - epsilon) = " +
                               std::to_string(inner) + " is outside (0, 1)");
  return std::sqrt(std::log1p(-inner) / std::log(epsilon));
}

/// f0 together with the parameters it satisfies.
struct CutoffSolution {
  double f0;
  double T;
  int N;
  double delta;
};

inline CutoffSolution solve_cutoff(int N, double T, double delta) {
  return {cutoff_frequency(N, T, delta), T, N, delta};
}

/// One cell of the (N, T) cutoff table, bisection next to the closed form.
struct CutoffGridRow {
  int N;
  double T;
  double delta;
  double f0_bisection;
  double f0_closed_form;  // NaN when outside the closed form's domain
};

inline std::vector<CutoffGridRow> cutoff_grid(std::span<const int> Ns, std::span<const double> Ts,
                                              double delta, double alpha = 1.0) {
  std::vector<CutoffGridRow> rows;
  for (int N : Ns) {
    for (double T : Ts) {
      CutoffGridRow row{N, T, delta, cutoff_frequency(N, T, delta), std::nan("")};
      try {
        row.f0_closed_form = cutoff_frequency_closed_form(N, std::exp(-T), delta, alpha);
      } catch (const numeric_domain_error&) {
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace fpemd
