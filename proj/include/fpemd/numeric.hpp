#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/statistics/bivariate_statistics.hpp>

#include "fpemd/error.hpp"

namespace fpemd {

inline double l2_norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

/// ||a - b|| / ||b||.
inline double relative_l2(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size(), "relative_l2: length mismatch");
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) num += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(num) / l2_norm(b);
}

inline double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

/// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
};

/// Central part of an n-sample window that keeps `fraction` of it, trimming
/// equally from both ends.
inline IndexRange interior(std::size_t n, double fraction) {
  detail::require(fraction > 0.0 && fraction <= 1.0, "interior fraction must be in (0, 1]");
  // the epsilon keeps exact products like 0.1 * 100 from flooring to 9
  const auto trim = static_cast<std::size_t>(std::floor(0.5 * (1.0 - fraction) * static_cast<double>(n) + 1e-9));
  return {trim, n - trim};
}

inline std::span<const double> slice(std::span<const double> x, IndexRange r) {
  return x.subspan(r.begin, r.size());
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size() && x.size() >= 2, "pearson: need two equal-length samples");
  return boost::math::statistics::correlation_coefficient(x, y);
}

/// Fractional ranks (1-based, ties receive their average rank).
inline std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

}  // namespace fpemd
