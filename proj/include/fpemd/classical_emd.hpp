#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fpemd/decomposition.hpp"
#include "fpemd/error.hpp"
#include "fpemd/numeric.hpp"
#include "fpemd/signal.hpp"

// Classical EMD: extrema, cubic-spline envelopes, mean subtraction, sifting.
namespace fpemd {

struct Extremum {
  std::ptrdiff_t index;
  double value;
  friend bool operator==(const Extremum&, const Extremum&) = default;
};

struct ExtremaSet {
  std::vector<Extremum> maxima;
  std::vector<Extremum> minima;
  std::size_t count() const noexcept { return maxima.size() + minima.size(); }
};

struct SiftConfig {
  double sd_threshold = 0.2;
  int max_sift_iterations = 100;
  double imf_mean_tolerance = 0.05;  // fraction of max |candidate|

  void validate() const {
    detail::require(sd_threshold > 0.0 && sd_threshold < 1.0, "sd_threshold must be in (0, 1)");
    detail::require(max_sift_iterations >= 1, "max_sift_iterations must be >= 1");
    detail::require(std::isfinite(imf_mean_tolerance) && imf_mean_tolerance > 0.0,
                    "imf_mean_tolerance must be > 0");
  }
};

/// Strict interior extrema by three-point comparison. A flat run that is
/// strictly above (below) both neighbours is reported once, at its midpoint.
/// Endpoints are never extrema.
inline ExtremaSet find_extrema(std::span<const double> x) {
  detail::require(x.size() >= 3, "find_extrema needs at least 3 samples");
  ExtremaSet out;
  const std::size_t n = x.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    // Extend over a plateau [i, j].
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    if (j + 1 >= n) break;  // plateau reaches the end
    const double left = x[i - 1];
    const double right = x[j + 1];
    const auto mid = static_cast<std::ptrdiff_t>((i + j) / 2);
    if (x[i] > left && x[i] > right) out.maxima.push_back({mid, x[i]});
    else if (x[i] < left && x[i] < right) out.minima.push_back({mid, x[i]});
    i = j + 1;
  }
  return out;
}

inline ExtremaSet find_extrema(const Signal& s) { return find_extrema(s.samples()); }

/// Number of sign changes. An exact zero takes the sign of the sample before it.
inline std::size_t count_sign_changes(std::span<const double> x) {
  std::size_t count = 0;
  int prev = 0;
  for (double v : x) {
    int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : prev);
    if (prev != 0 && sign != 0 && sign != prev) ++count;
    if (sign != 0) prev = sign;
  }
  return count;
}

/// Natural cubic spline through `knots` (positions in samples, strictly
/// increasing, may lie outside the domain), evaluated at samples
/// 0..domain_length-1. Positions are converted to seconds with sample_rate;
/// the curve itself does not depend on that scale.
inline std::vector<double> spline_envelope(std::span<const Extremum> knots, std::size_t domain_length,
                                           double sample_rate) {
  detail::require(knots.size() >= 2, "spline_envelope needs at least 2 knots");
  detail::require(sample_rate > 0.0, "sample_rate must be positive");
  const std::size_t m = knots.size();
  std::vector<double> x(m), y(m);
  for (std::size_t k = 0; k < m; ++k) {
    x[k] = static_cast<double>(knots[k].index) / sample_rate;
    y[k] = knots[k].value;
    if (k > 0) detail::require(x[k] > x[k - 1], "spline knots must be strictly increasing");
  }

  // Second derivatives; natural ends have M_0 = M_{m-1} = 0.
  std::vector<double> second(m, 0.0);
  if (m > 2) {
    const std::size_t inner = m - 2;
    std::vector<double> diag(inner), upper(inner), rhs(inner);
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const double h0 = x[k] - x[k - 1];
      const double h1 = x[k + 1] - x[k];
      diag[k - 1] = 2.0 * (h0 + h1);
      upper[k - 1] = h1;
      rhs[k - 1] = 6.0 * ((y[k + 1] - y[k]) / h1 - (y[k] - y[k - 1]) / h0);
    }
    // Symmetric tridiagonal: sub-diagonal of row r equals upper of row r-1.
    for (std::size_t r = 1; r < inner; ++r) {
      const double w = upper[r - 1] / diag[r - 1];
      diag[r] -= w * upper[r - 1];
      rhs[r] -= w * rhs[r - 1];
    }
    second[inner] = rhs[inner - 1] / diag[inner - 1];
    for (std::size_t r = inner - 1; r-- > 0;)
      second[r + 1] = (rhs[r] - upper[r] * second[r + 2]) / diag[r];
  }

  std::vector<double> out(domain_length);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < domain_length; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    while (seg + 2 < m && t > x[seg + 1]) ++seg;
    const double h = x[seg + 1] - x[seg];
    const double A = (x[seg + 1] - t) / h;
    const double B = (t - x[seg]) / h;
    out[i] = A * y[seg] + B * y[seg + 1] +
             ((A * A * A - A) * second[seg] + (B * B * B - B) * second[seg + 1]) * h * h / 6.0;
    // Exact at knots.
    if (static_cast<std::ptrdiff_t>(i) == knots[seg].index) out[i] = y[seg];
    else if (static_cast<std::ptrdiff_t>(i) == knots[seg + 1].index) out[i] = y[seg + 1];
  }
  return out;
}

/// Pointwise (upper + lower) / 2.
inline std::vector<double> local_mean(std::span<const double> upper, std::span<const double> lower) {
  detail::require(upper.size() == lower.size(), "local_mean: envelope length mismatch");
  std::vector<double> m(upper.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (upper[i] + lower[i]);
  return m;
}

namespace detail {

// Mirrors the two extrema nearest each endpoint across that endpoint sample.
inline std::vector<Extremum> mirror_extend(const std::vector<Extremum>& knots, std::size_t n) {
  std::vector<Extremum> out;
  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  const std::size_t take = std::min<std::size_t>(2, knots.size());
  for (std::size_t k = take; k-- > 0;) out.push_back({-knots[k].index, knots[k].value});
  out.insert(out.end(), knots.begin(), knots.end());
  for (std::size_t k = 0; k < take; ++k) {
    const auto& e = knots[knots.size() - 1 - k];
    out.push_back({2 * last - e.index, e.value});
  }
  return out;
}

struct Envelopes {
  std::vector<double> upper;
  std::vector<double> lower;
};

inline Envelopes envelopes(std::span<const double> x, const ExtremaSet& ext, double sample_rate) {
  if (ext.maxima.empty() || ext.minima.empty())
    throw insufficient_extrema("envelopes need at least one maximum and one minimum");
  const auto up = mirror_extend(ext.maxima, x.size());
  const auto lo = mirror_extend(ext.minima, x.size());
  return {spline_envelope(up, x.size(), sample_rate), spline_envelope(lo, x.size(), sample_rate)};
}

}  // namespace detail

struct ImfVerdict {
  enum class Reason { none, count_mismatch, mean_too_large, insufficient_extrema };
  bool pass = false;
  Reason reason = Reason::none;
  std::size_t extrema = 0;
  std::size_t zero_crossings = 0;
  double mean_ratio = 0.0;  // max |envelope mean| / max |candidate|
};

inline std::string to_string(ImfVerdict::Reason r) {
  switch (r) {
    case ImfVerdict::Reason::none: return "none";
    case ImfVerdict::Reason::count_mismatch: return "extrema and zero-crossing counts differ by more than one";
    case ImfVerdict::Reason::mean_too_large: return "envelope mean exceeds tolerance";
    case ImfVerdict::Reason::insufficient_extrema: return "insufficient extrema for envelopes";
  }
  return "unknown";
}

/// IMF test: |#extrema - #zero crossings| <= 1 and the envelope mean is small
/// relative to the candidate's peak magnitude.
inline ImfVerdict imf_check(const Signal& candidate, const SiftConfig& config) {
  detail::require(candidate.size() >= 3, "imf_check needs at least 3 samples");
  config.validate();
  ImfVerdict v;
  const auto x = candidate.samples();
  const auto ext = find_extrema(x);
  v.extrema = ext.count();
  v.zero_crossings = count_sign_changes(x);
  const auto diff = static_cast<std::ptrdiff_t>(v.extrema) - static_cast<std::ptrdiff_t>(v.zero_crossings);
  if (std::abs(diff) > 1) {
    v.reason = ImfVerdict::Reason::count_mismatch;
    return v;
  }
  if (ext.maxima.empty() || ext.minima.empty()) {
    v.reason = ImfVerdict::Reason::insufficient_extrema;
    return v;
  }
  const auto env = detail::envelopes(x, ext, candidate.sample_rate());
  const auto mean = local_mean(env.upper, env.lower);
  const double peak = max_abs(x);
  v.mean_ratio = peak > 0.0 ? max_abs(mean) / peak : 0.0;
  if (v.mean_ratio > config.imf_mean_tolerance) {
    v.reason = ImfVerdict::Reason::mean_too_large;
    return v;
  }
  v.pass = true;
  return v;
}

struct SiftResult {
  Signal imf;
  int iterations;
};

/// Repeated envelope-mean subtraction. Stops when the candidate passes
/// imf_check, when the SD statistic sum (h_prev - h)^2 / sum h_prev^2 drops
/// below sd_threshold, or after max_sift_iterations.
inline SiftResult sift_classical(const Signal& signal, const SiftConfig& config = {}) {
  config.validate();
  detail::require(signal.size() >= 3, "sift_classical needs at least 3 samples");
  const auto first = find_extrema(signal);
  if (first.maxima.size() < 2 || first.minima.size() < 2)
    throw insufficient_extrema("sifting needs at least 2 maxima and 2 minima");

  std::vector<double> h(signal.values());
  int iterations = 0;
  while (iterations < config.max_sift_iterations) {
    const auto ext = iterations == 0 ? first : find_extrema(h);
    if (ext.maxima.empty() || ext.minima.empty()) break;
    const auto env = detail::envelopes(h, ext, signal.sample_rate());
    const auto mean = local_mean(env.upper, env.lower);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      num += mean[i] * mean[i];
      den += h[i] * h[i];
      h[i] -= mean[i];
    }
    ++iterations;
    if (den == 0.0 || num / den < config.sd_threshold) break;
    if (imf_check(signal.with_samples(h), config).pass) break;
  }
  return {signal.with_samples(std::move(h)), iterations};
}

/// Extracts IMFs until the residual has fewer than 3 extrema or max_imfs is
/// reached.
inline Decomposition decompose_classical(const Signal& signal, const SiftConfig& config = {},
                                         int max_imfs = 10) {
  config.validate();
  detail::require(max_imfs >= 1, "max_imfs must be >= 1");
  Decomposition d{.imfs = {}, .residual = signal, .method = Method::classical};
  if (signal.size() < 3) return d;
  std::vector<double> residual(signal.values());
  while (static_cast<int>(d.imfs.size()) < max_imfs) {
    if (find_extrema(residual).count() < 3) break;
    try {
      auto [imf, iterations] = sift_classical(signal.with_samples(residual), config);
      for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= imf[i];
      d.imfs.push_back(std::move(imf));
      d.iterations_per_imf.push_back(iterations);
    } catch (const insufficient_extrema&) {
      break;
    }
  }
  d.residual = signal.with_samples(std::move(residual));
  return d;
}

}  // namespace fpemd
