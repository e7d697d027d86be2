#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "fpemd/decomposition.hpp"
#include "fpemd/error.hpp"
#include "fpemd/fft.hpp"
#include "fpemd/signal.hpp"

namespace fpemd {

struct AnalyticSignal {
  std::vector<double> real_part;
  std::vector<double> imag_part;
  double sample_rate;

  std::size_t size() const noexcept { return real_part.size(); }
  double magnitude(std::size_t i) const noexcept { return std::hypot(real_part[i], imag_part[i]); }
};

/// One-sided spectrum construction: keep DC (and Nyquist for even n), double
/// the positive frequencies, zero the negative ones, transform back.
inline AnalyticSignal analytic_signal(const Signal& signal) {
  const std::size_t n = signal.size();
  detail::require(n >= 4, "analytic_signal needs at least 4 samples");
  std::vector<std::complex<double>> x(signal.values().begin(), signal.values().end());
  auto spectrum = fft::dft(x);
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < n; ++k) {
    if (k < half || (k == half && n % 2 == 1)) spectrum[k] *= 2.0;
    else if (k > half) spectrum[k] = 0.0;
  }
  const auto z = fft::dft(spectrum, /*inverse=*/true);
  AnalyticSignal out{std::vector<double>(n), std::vector<double>(n), signal.sample_rate()};
  for (std::size_t i = 0; i < n; ++i) {
    out.real_part[i] = z[i].real();
    out.imag_part[i] = z[i].imag();
  }
  return out;
}

struct InstantaneousFrequency {
  std::vector<double> hz;
  std::size_t undefined = 0;
};

/// Instantaneous frequency in Hz from the unwrapped phase, differentiated by
/// central differences (one-sided at the ends). NaN where the analytic
/// magnitude at the sample or at a neighbour used by the difference is below
/// `min_magnitude`.
inline InstantaneousFrequency instantaneous_frequency(const AnalyticSignal& analytic,
                                                      double min_magnitude = 1e-12) {
  const std::size_t n = analytic.size();
  detail::require(n >= 2, "instantaneous_frequency needs at least 2 samples");
  std::vector<double> phase(n);
  for (std::size_t i = 0; i < n; ++i) phase[i] = std::atan2(analytic.imag_part[i], analytic.real_part[i]);
  for (std::size_t i = 1; i < n; ++i) {
    double step = phase[i] - phase[i - 1];
    step -= 2.0 * std::numbers::pi * std::round(step / (2.0 * std::numbers::pi));
    phase[i] = phase[i - 1] + step;
  }

  const double scale = analytic.sample_rate / (2.0 * std::numbers::pi);
  InstantaneousFrequency out{std::vector<double>(n), 0};
  auto ok = [&](std::size_t i) { return analytic.magnitude(i) >= min_magnitude; };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    if (!ok(i) || !ok(lo) || !ok(hi)) {
      out.hz[i] = std::numeric_limits<double>::quiet_NaN();
      ++out.undefined;
      continue;
    }
    out.hz[i] = (phase[hi] - phase[lo]) / static_cast<double>(hi - lo) * scale;
  }
  return out;
}

/// Time x frequency amplitude grid, row-major by time bin.
struct HilbertSpectrum {
  std::vector<double> time_bins;  // bin centers, s
  std::vector<double> freq_bins;  // bin centers, Hz
  std::vector<double> amplitude;
  std::size_t clipped_count = 0;  // samples whose frequency fell outside [0, freq_max)
  double clipped_mass = 0.0;      // amplitude those samples carried into edge bins
  std::size_t undefined_count = 0;  // samples with undefined frequency (not deposited)
  double undefined_mass = 0.0;
  bool empty_input = false;  // no IMFs: the grid is all zeros

  double& at(std::size_t t, std::size_t f) { return amplitude[t * freq_bins.size() + f]; }
  double at(std::size_t t, std::size_t f) const { return amplitude[t * freq_bins.size() + f]; }
  double total() const {
    double s = 0.0;
    for (double v : amplitude) s += v;
    return s;
  }
};

/// Deposits |analytic| of every IMF sample into its (time, instantaneous
/// frequency) bin. Frequencies outside [0, freq_max) go to the edge bins and
/// are counted in the clip statistics.
inline HilbertSpectrum hh_spectrum(const Decomposition& decomposition, std::size_t time_bin_count,
                                   std::size_t freq_bin_count, double freq_max) {
  detail::require(time_bin_count >= 1 && freq_bin_count >= 1, "bin counts must be positive");
  detail::require(std::isfinite(freq_max) && freq_max > 0.0, "freq_max must be positive");
  const Signal& ref = decomposition.residual;
  const std::size_t n = ref.size();
  const double fs = ref.sample_rate();

  HilbertSpectrum hs;
  hs.time_bins.resize(time_bin_count);
  hs.freq_bins.resize(freq_bin_count);
  const double window = ref.duration();
  for (std::size_t t = 0; t < time_bin_count; ++t)
    hs.time_bins[t] = ref.start_time() + (static_cast<double>(t) + 0.5) * window / time_bin_count;
  const double df = freq_max / static_cast<double>(freq_bin_count);
  for (std::size_t f = 0; f < freq_bin_count; ++f) hs.freq_bins[f] = (static_cast<double>(f) + 0.5) * df;
  hs.amplitude.assign(time_bin_count * freq_bin_count, 0.0);

  if (decomposition.imfs.empty()) {
    hs.empty_input = true;
    return hs;
  }

  for (const auto& imf : decomposition.imfs) {
    const auto z = analytic_signal(imf);
    const auto inst = instantaneous_frequency(z);
    for (std::size_t i = 0; i < n; ++i) {
      const double amp = z.magnitude(i);
      const double freq = inst.hz[i];
      if (std::isnan(freq)) {
        ++hs.undefined_count;
        hs.undefined_mass += amp;
        continue;
      }
      const auto tb = std::min(time_bin_count - 1, static_cast<std::size_t>(
                                                      static_cast<double>(i) / fs / window * time_bin_count));
      std::size_t fb;
      if (freq < 0.0) {
        fb = 0;
        ++hs.clipped_count;
        hs.clipped_mass += amp;
      } else if (freq >= freq_max) {
        fb = freq_bin_count - 1;
        ++hs.clipped_count;
        hs.clipped_mass += amp;
      } else {
        fb = std::min(freq_bin_count - 1, static_cast<std::size_t>(freq / df));
      }
      hs.at(tb, fb) += amp;
    }
  }
  return hs;
}

}  // namespace fpemd
