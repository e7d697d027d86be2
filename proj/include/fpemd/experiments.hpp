#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "fpemd/classical_emd.hpp"
#include "fpemd/decomposition.hpp"
#include "fpemd/fft.hpp"
#include "fpemd/hilbert_spectrum.hpp"
#include "fpemd/numeric.hpp"
#include "fpemd/pde_emd.hpp"
#include "fpemd/signal.hpp"

// Separation experiments: two-tone performance sweep, concatenated-tone mode
// mixing and the noise comparison.
namespace fpemd {

/// Fraction of the window kept when scoring (boundary samples are excluded).
inline constexpr double kScoringInterior = 0.8;

/// ||imf1 - reference|| / ||reference|| over the interior 80% of the window.
inline double performance_measure(const Signal& imf1, const Signal& reference,
                                  double interior_fraction = kScoringInterior) {
  detail::require(imf1.size() == reference.size(), "performance_measure: length mismatch");
  const auto r = interior(reference.size(), interior_fraction);
  const auto ref = slice(reference.samples(), r);
  const double norm = l2_norm(ref);
  if (!(norm > 0.0)) throw numeric_domain_error("performance_measure: reference has zero norm");
  return relative_l2(slice(imf1.samples(), r), ref);
}

/// Everything needed to run either decomposition method.
struct MethodConfig {
  SiftConfig sift{};
  PdeParams pde{};
  bool estimate_a = true;  // forward-PDE: estimate a by zero crossings instead of pde.a
  int max_imfs = 10;
  ZeroCrossingOptions zero_crossings{};
};

inline Decomposition run_method(Method method, const Signal& signal, const MethodConfig& config) {
  if (method == Method::classical) return decompose_classical(signal, config.sift, config.max_imfs);
  PdeParams params = config.pde;
  if (config.estimate_a) params = with_estimated_diffusivity(params, signal, config.zero_crossings);
  return decompose_pde(signal, params,
                       PdeDecomposeOptions{.max_imfs = config.max_imfs, .zero_crossings = config.zero_crossings});
}

/// IMF 1, or a zero signal when nothing was extracted.
inline Signal first_imf(const Decomposition& d) {
  if (!d.imfs.empty()) return d.imfs.front();
  return d.residual.with_samples(std::vector<double>(d.residual.size(), 0.0));
}

/// Sampling of the two-tone test signal cos(2 pi x) + alpha cos(2 pi f x).
struct TwoToneGrid {
  double sample_rate = 25.0;
  double duration = 40.0;
};

inline Signal two_tone(double alpha, double f, const TwoToneGrid& grid) {
  return synth_cosine_sum({{1.0, 1.0, 0.0}, {alpha, f, 0.0}}, 0.0, grid.sample_rate, grid.duration);
}

inline Signal high_tone(const TwoToneGrid& grid) {
  return synth_cosine_sum({{1.0, 1.0, 0.0}}, 0.0, grid.sample_rate, grid.duration);
}

/// PM over an (alpha x f) grid, row-major by alpha. Failed cells hold +inf.
struct PerformanceGrid {
  std::vector<double> alpha_values;
  std::vector<double> f_values;
  std::vector<double> pm;
  Method method = Method::classical;
  std::size_t failed_cells = 0;

  double at(std::size_t ia, std::size_t jf) const { return pm[ia * f_values.size() + jf]; }
  double& at(std::size_t ia, std::size_t jf) { return pm[ia * f_values.size() + jf]; }
  bool all_finite() const {
    return std::all_of(pm.begin(), pm.end(), [](double v) { return std::isfinite(v); });
  }
};

inline PerformanceGrid pm_sweep(Method method, std::span<const double> alpha_values,
                                std::span<const double> f_values, const MethodConfig& config,
                                const TwoToneGrid& grid = {}) {
  for (double a : alpha_values) detail::require(std::isfinite(a) && a > 0.0, "alpha values must be > 0");
  for (double f : f_values) detail::require(f > 0.0 && f < 1.0, "f values must be in (0, 1)");
  PerformanceGrid out{{alpha_values.begin(), alpha_values.end()}, {f_values.begin(), f_values.end()},
                      std::vector<double>(alpha_values.size() * f_values.size()), method, 0};
  const Signal reference = high_tone(grid);
  // Cells are independent and written to fixed slots, so any evaluation order
  // yields the same grid.
  for (std::size_t i = 0; i < alpha_values.size(); ++i) {
    for (std::size_t j = 0; j < f_values.size(); ++j) {
      try {
        const auto d = run_method(method, two_tone(alpha_values[i], f_values[j], grid), config);
        out.at(i, j) = performance_measure(first_imf(d), reference);
      } catch (const std::exception&) {
        out.at(i, j) = std::numeric_limits<double>::infinity();
        ++out.failed_cells;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mode mixing

struct ModeMixConfig {
  double f1 = 10.0;
  double f2 = 20.0;
  double t_switch = 0.5;
  double sample_rate = 1000.0;
  double duration = 1.0;
  double band_halfwidth = 0.25;  // band = tone * (1 +- halfwidth)
  double threshold = 0.8;        // required in-band energy fraction
};

/// Energy fraction of x (Hann-windowed) inside [lo, hi] Hz.
inline double band_energy_fraction(std::span<const double> x, double sample_rate, double lo, double hi) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = x[i] * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
  const auto bins = fft::rfft(w);
  double total = 0.0, band = 0.0;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const double e = std::norm(bins[k]);
    const double freq = static_cast<double>(k) * sample_rate / static_cast<double>(n);
    total += e;
    if (freq >= lo && freq <= hi) band += e;
  }
  return total > 0.0 ? band / total : 0.0;
}

/// Per-method outcome. Segment 0 is t < t_switch (tone f1), segment 1 the rest.
struct MethodMixResult {
  Method method = Method::classical;
  std::size_t imf_count = 0;
  // band_fractions[k][s]: share of IMF k's energy in segment s lying in that
  // segment's tone band.
  std::vector<std::array<double, 2>> band_fractions;
  // energy_shares[k][s]: IMF k's share of the summed IMF energy in segment s.
  std::vector<std::array<double, 2>> energy_shares;
  std::array<std::size_t, 2> owner{0, 0};  // IMF holding most energy per segment
  bool separated = false;
};

struct ModeMixReport {
  ModeMixConfig config;
  MethodMixResult classical;
  MethodMixResult forward_pde;
};

/// A method separates the modes when each segment's tone is carried by a
/// different IMF (the one with the most energy in that segment) and that IMF
/// has at least `threshold` of its segment energy in the tone band. When both
/// tones share a band the single owning IMF only has to meet the threshold.
inline MethodMixResult evaluate_mode_mixing(const Decomposition& d, const ModeMixConfig& cfg) {
  MethodMixResult r;
  r.method = d.method;
  r.imf_count = d.imfs.size();
  if (d.imfs.empty()) return r;
  const std::size_t n = d.residual.size();
  const auto split = std::min(n, static_cast<std::size_t>(std::ceil(cfg.t_switch * cfg.sample_rate)));
  const std::array<IndexRange, 2> segs{IndexRange{0, split}, IndexRange{split, n}};
  const std::array<double, 2> tones{cfg.f1, cfg.f2};

  std::array<double, 2> seg_total{0.0, 0.0};
  std::vector<std::array<double, 2>> energy(d.imfs.size());
  for (std::size_t k = 0; k < d.imfs.size(); ++k) {
    std::array<double, 2> frac{};
    for (std::size_t s = 0; s < 2; ++s) {
      const auto x = slice(d.imfs[k].samples(), segs[s]);
      double e = 0.0;
      for (double v : x) e += v * v;
      energy[k][s] = e;
      seg_total[s] += e;
      frac[s] = band_energy_fraction(x, cfg.sample_rate, tones[s] * (1.0 - cfg.band_halfwidth),
                                     tones[s] * (1.0 + cfg.band_halfwidth));
    }
    r.band_fractions.push_back(frac);
  }
  for (std::size_t s = 0; s < 2; ++s) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < energy.size(); ++k)
      if (energy[k][s] > energy[best][s]) best = k;
    r.owner[s] = best;
  }
  for (const auto& e : energy)
    r.energy_shares.push_back({seg_total[0] > 0 ? e[0] / seg_total[0] : 0.0,
                               seg_total[1] > 0 ? e[1] / seg_total[1] : 0.0});

  const bool bands_overlap = std::abs(cfg.f2 - cfg.f1) <= cfg.band_halfwidth * (cfg.f1 + cfg.f2);
  const bool in_band = r.band_fractions[r.owner[0]][0] >= cfg.threshold &&
                       r.band_fractions[r.owner[1]][1] >= cfg.threshold;
  r.separated = in_band && (bands_overlap || r.owner[0] != r.owner[1]);
  return r;
}

inline ModeMixReport mode_mixing_experiment(const ModeMixConfig& cfg, const MethodConfig& methods = {}) {
  detail::require(cfg.threshold > 0.0 && cfg.threshold <= 1.0, "threshold must be in (0, 1]");
  detail::require(cfg.band_halfwidth > 0.0 && cfg.band_halfwidth < 1.0, "band_halfwidth must be in (0, 1)");
  const Signal s = synth_mode_mixing(cfg.f1, cfg.f2, cfg.t_switch, cfg.sample_rate, cfg.duration);
  return {cfg, evaluate_mode_mixing(run_method(Method::classical, s, methods), cfg),
          evaluate_mode_mixing(run_method(Method::forward_pde, s, methods), cfg)};
}

/// Share of the spectrum's amplitude in time bins centered within
/// [t_begin, t_end) that falls in frequency bins centered within [f_lo, f_hi].
inline double spectrum_band_fraction(const HilbertSpectrum& hs, double t_begin, double t_end, double f_lo,
                                     double f_hi) {
  double total = 0.0, band = 0.0;
  for (std::size_t t = 0; t < hs.time_bins.size(); ++t) {
    if (hs.time_bins[t] < t_begin || hs.time_bins[t] >= t_end) continue;
    for (std::size_t f = 0; f < hs.freq_bins.size(); ++f) {
      total += hs.at(t, f);
      if (hs.freq_bins[f] >= f_lo && hs.freq_bins[f] <= f_hi) band += hs.at(t, f);
    }
  }
  return total > 0.0 ? band / total : 0.0;
}

// ---------------------------------------------------------------------------
// Noise robustness

struct NoiseConfig {
  double alpha = 1.0;
  double f = 0.4;
  TwoToneGrid grid{};
};

struct NoiseRow {
  Method method;
  double sigma;
  std::uint64_t seed;
  double pm;  // +inf when the decomposition failed
};

struct NoiseTable {
  std::vector<NoiseRow> rows;

  double mean_pm(Method m, double sigma) const {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : rows)
      if (r.method == m && r.sigma == sigma) {
        sum += r.pm;
        ++count;
      }
    return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
  }
};

/// For each sigma and each seed in [seed, seed + seed_count), adds noise to the
/// two-tone signal, decomposes with every method and scores IMF 1 against the
/// clean high tone.
inline NoiseTable noise_robustness(std::span<const Method> methods, std::span<const double> sigma_values,
                                   std::uint64_t seed, int seed_count, const NoiseConfig& cfg,
                                   const MethodConfig& config = {}) {
  detail::require(seed_count >= 1, "seed_count must be >= 1");
  for (double s : sigma_values) detail::require(std::isfinite(s) && s >= 0.0, "sigma values must be >= 0");
  const Signal clean = two_tone(cfg.alpha, cfg.f, cfg.grid);
  const Signal reference = high_tone(cfg.grid);
  NoiseTable table;
  for (double sigma : sigma_values) {
    for (int k = 0; k < seed_count; ++k) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
      const Signal noisy = add_white_noise(clean, sigma, s);
      for (Method m : methods) {
        double pm = std::numeric_limits<double>::infinity();
        try {
          pm = performance_measure(first_imf(run_method(m, noisy, config)), reference);
        } catch (const std::exception&) {
        }
        table.rows.push_back({m, sigma, s, pm});
      }
    }
  }
  return table;
}

}  // namespace fpemd
