#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "fpemd/error.hpp"

// Thin RAII layer over FFTW. Planning is serialized because the FFTW planner
// is not thread-safe; plan execution on distinct arrays is.
namespace fpemd::fft {

namespace detail {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const noexcept {
    if (p == nullptr) return;
    std::scoped_lock lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

template <typename MakePlan>
Plan make_plan(MakePlan&& make) {
  std::scoped_lock lock(planner_mutex());
  Plan p(make());
  if (!p) throw std::runtime_error("FFTW failed to create a plan");
  return p;
}

inline fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace detail

/// Forward real-to-complex transform, bins 0..n/2, unnormalized.
inline std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  fpemd::detail::require(n >= 1, "rfft: empty input");
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size() / 2 + 1);
  auto plan = detail::make_plan([&] {
    return fftw_plan_dft_r2c_1d(n, in.data(), detail::as_fftw(out.data()), FFTW_ESTIMATE);
  });
  fftw_execute(plan.get());
  return out;
}

/// Inverse of rfft for an n-point real signal, normalized by 1/n.
inline std::vector<double> irfft(std::span<const std::complex<double>> bins, std::size_t n) {
  fpemd::detail::require(n >= 1 && bins.size() == n / 2 + 1, "irfft: bin count must be n/2 + 1");
  // c2r overwrites its input.
  std::vector<std::complex<double>> in(bins.begin(), bins.end());
  std::vector<double> out(n);
  auto plan = detail::make_plan([&] {
    return fftw_plan_dft_c2r_1d(static_cast<int>(n), detail::as_fftw(in.data()), out.data(),
                                FFTW_ESTIMATE);
  });
  fftw_execute(plan.get());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

/// Complex transform; `inverse` applies the 1/n normalization.
inline std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, bool inverse = false) {
  const int n = static_cast<int>(x.size());
  fpemd::detail::require(n >= 1, "dft: empty input");
  std::vector<std::complex<double>> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size());
  auto plan = detail::make_plan([&] {
    return fftw_plan_dft_1d(n, detail::as_fftw(in.data()), detail::as_fftw(out.data()),
                            inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  });
  fftw_execute(plan.get());
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= scale;
  }
  return out;
}

inline const char* library_version() { return fftw_version; }

}  // namespace fpemd::fft
