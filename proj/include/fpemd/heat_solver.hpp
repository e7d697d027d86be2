#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "fpemd/error.hpp"
#include "fpemd/fft.hpp"
#include "fpemd/signal.hpp"

// Forward heat equation  dh/dt = a d2h/dx2,  h(x, 0) = S(x).
//
// The spatial variable is time in seconds, so ω is angular frequency in rad/s
// and the diffusivity a carries s^2. The evolution time T is dimensionless.
// A Fourier mode of angular frequency ω decays as exp(-a ω^2 T).
namespace fpemd {

enum class BoundaryCondition { periodic, fixed_ends, reflective };

inline std::string_view to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::periodic: return "periodic";
    case BoundaryCondition::fixed_ends: return "fixed";
    case BoundaryCondition::reflective: return "reflective";
  }
  return "unknown";
}

inline BoundaryCondition parse_boundary_condition(std::string_view name) {
  if (name == "periodic") return BoundaryCondition::periodic;
  if (name == "fixed" || name == "fixed_ends") return BoundaryCondition::fixed_ends;
  if (name == "reflective") return BoundaryCondition::reflective;
  throw precondition_error("unknown boundary condition: " + std::string(name));
}

/// Parameters of one forward evolution. Negative diffusivity (the backward
/// equation) is rejected.
struct HeatEvolution {
  double diffusivity;
  double time;
  BoundaryCondition bc = BoundaryCondition::periodic;

  void validate() const {
    detail::require(std::isfinite(diffusivity) && diffusivity > 0.0, "diffusivity a must be > 0");
    detail::require(std::isfinite(time) && time > 0.0, "evolution time T must be > 0");
  }
};

namespace detail {

inline void require_evolvable(const Signal& s, double a, double T) {
  require(s.size() >= 2, "heat evolution needs at least 2 samples");
  require(std::isfinite(a) && a > 0.0, "diffusivity a must be > 0");
  require(std::isfinite(T) && T >= 0.0, "evolution time T must be >= 0");
}

}  // namespace detail

/// Exact periodic solution: DFT mode k (ω_k = 2πk/L, L = n/fs) is scaled by
/// exp(-a ω_k^2 T).
inline std::vector<double> evolve_spectral(const Signal& signal, double a, double T) {
  detail::require_evolvable(signal, a, T);
  const std::size_t n = signal.size();
  auto bins = fft::rfft(signal.samples());
  const double length = signal.duration();
  for (std::size_t k = 1; k < bins.size(); ++k) {
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) / length;
    bins[k] *= std::exp(-a * omega * omega * T);
  }
  return fft::irfft(bins, n);
}

namespace detail {

// Tridiagonal system with constant interior coefficients, factored once and
// reused for every time step (Thomas algorithm).
class TridiagonalFactor {
 public:
  TridiagonalFactor(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)), inv_pivot_(diag.size()), c_(diag.size()) {
    const std::size_t n = diag.size();
    double pivot = diag[0];
    inv_pivot_[0] = 1.0 / pivot;
    c_[0] = n > 1 ? upper_[0] * inv_pivot_[0] : 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      pivot = diag[i] - lower_[i] * c_[i - 1];
      inv_pivot_[i] = 1.0 / pivot;
      c_[i] = i + 1 < n ? upper_[i] * inv_pivot_[i] : 0.0;
    }
  }

  void solve_in_place(std::vector<double>& d) const {
    const std::size_t n = d.size();
    d[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) d[i] = (d[i] - lower_[i] * d[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c_[i] * d[i + 1];
  }

 private:
  std::vector<double> lower_, upper_, inv_pivot_, c_;
};

// Cyclic tridiagonal solve via Sherman-Morrison on top of TridiagonalFactor.
class CyclicTridiagonalFactor {
 public:
  CyclicTridiagonalFactor(double off, double diag, std::size_t n)
      : gamma_(-diag), corner_(off), off_(off), base_(make_base(off, diag, n, gamma_)) {
    std::vector<double> u(n, 0.0);
    u[0] = gamma_;
    u[n - 1] = corner_;
    base_.solve_in_place(u);
    z_ = std::move(u);
    denom_ = 1.0 + z_[0] + corner_ * z_[n - 1] / gamma_;
  }

  void solve_in_place(std::vector<double>& d) const {
    const std::size_t n = d.size();
    base_.solve_in_place(d);
    const double factor = (d[0] + off_ * d[n - 1] / gamma_) / denom_;
    for (std::size_t i = 0; i < n; ++i) d[i] -= factor * z_[i];
  }

 private:
  static TridiagonalFactor make_base(double off, double diag, std::size_t n, double gamma) {
    std::vector<double> lower(n, off), d(n, diag), upper(n, off);
    d[0] = diag - gamma;
    d[n - 1] = diag - off * off / gamma;
    return TridiagonalFactor(std::move(lower), std::move(d), std::move(upper));
  }

  double gamma_, corner_, off_;
  TridiagonalFactor base_;
  std::vector<double> z_;
  double denom_ = 1.0;
};

}  // namespace detail

/// Crank-Nicolson time stepping with second-order central differences in x.
/// fixed_ends pins both endpoint values, reflective imposes zero normal
/// derivative through a mirrored ghost node, periodic wraps the stencil.
inline std::vector<double> evolve_fd(const Signal& signal, double a, double T, BoundaryCondition bc,
                                     int time_steps = 1000) {
  detail::require_evolvable(signal, a, T);
  detail::require(time_steps >= 1, "time_steps must be >= 1");
  const std::size_t n = signal.size();
  std::vector<double> u(signal.values());
  if (T == 0.0) return u;

  const double dx = signal.dt();
  const double r = a * (T / time_steps) / (dx * dx);
  const double half = 0.5 * r;

  // Operator applied to the known level: (I + r/2 D2) u.
  auto explicit_half = [&](const std::vector<double>& v, std::vector<double>& out) {
    switch (bc) {
      case BoundaryCondition::periodic:
        for (std::size_t i = 0; i < n; ++i) {
          const double left = v[i == 0 ? n - 1 : i - 1];
          const double right = v[i + 1 == n ? 0 : i + 1];
          out[i] = v[i] + half * (left - 2.0 * v[i] + right);
        }
        break;
      case BoundaryCondition::fixed_ends:
        out[0] = v[0];
        out[n - 1] = v[n - 1];
        for (std::size_t i = 1; i + 1 < n; ++i) out[i] = v[i] + half * (v[i - 1] - 2.0 * v[i] + v[i + 1]);
        break;
      case BoundaryCondition::reflective:
        out[0] = v[0] + half * (2.0 * v[1] - 2.0 * v[0]);
        out[n - 1] = v[n - 1] + half * (2.0 * v[n - 2] - 2.0 * v[n - 1]);
        for (std::size_t i = 1; i + 1 < n; ++i) out[i] = v[i] + half * (v[i - 1] - 2.0 * v[i] + v[i + 1]);
        break;
    }
  };

  std::vector<double> rhs(n);
  if (bc == BoundaryCondition::periodic) {
    if (n == 2) {
      // Both neighbours of each node are the other node.
      for (int step = 0; step < time_steps; ++step) {
        const double mean = 0.5 * (u[0] + u[1]);
        const double diff = 0.5 * (u[0] - u[1]);
        const double g = (1.0 - 2.0 * r) / (1.0 + 2.0 * r);
        u[0] = mean + g * diff;
        u[1] = mean - g * diff;
      }
      return u;
    }
    const detail::CyclicTridiagonalFactor solver(-half, 1.0 + r, n);
    for (int step = 0; step < time_steps; ++step) {
      explicit_half(u, rhs);
      solver.solve_in_place(rhs);
      u.swap(rhs);
    }
    return u;
  }

  std::vector<double> lower(n, -half), diag(n, 1.0 + r), upper(n, -half);
  if (bc == BoundaryCondition::fixed_ends) {
    diag[0] = diag[n - 1] = 1.0;
    upper[0] = 0.0;
    lower[n - 1] = 0.0;
  } else {
    upper[0] = -r;
    lower[n - 1] = -r;
  }
  lower[0] = 0.0;
  upper[n - 1] = 0.0;
  const detail::TridiagonalFactor solver(std::move(lower), std::move(diag), std::move(upper));
  for (int step = 0; step < time_steps; ++step) {
    explicit_half(u, rhs);
    solver.solve_in_place(rhs);
    u.swap(rhs);
  }
  if (bc == BoundaryCondition::fixed_ends) {
    u.front() = signal[0];
    u.back() = signal[n - 1];
  }
  return u;
}

/// Circular convolution with a sampled Gaussian of standard deviation
/// sqrt(2 a T) seconds, periodized over the window and normalized to unit sum.
/// Direct O(n^2) summation; intended as an independent check on the solvers.
inline std::vector<double> gaussian_convolve_oracle(const Signal& signal, double a, double T) {
  detail::require_evolvable(signal, a, T);
  const std::size_t n = signal.size();
  const double sigma = std::sqrt(2.0 * a * T) * signal.sample_rate();  // in samples
  std::vector<double> kernel(n, 0.0);
  if (sigma * 40.0 < 1.0) {
    kernel[0] = 1.0;
  } else {
    const auto nd = static_cast<double>(n);
    const int images = static_cast<int>(std::ceil(10.0 * sigma / nd)) + 1;
    for (std::size_t d = 0; d < n; ++d) {
      double acc = 0.0;
      for (int m = -images; m <= images; ++m) {
        const double x = static_cast<double>(d) + m * nd;
        acc += std::exp(-0.5 * x * x / (sigma * sigma));
      }
      kernel[d] = acc;
    }
    double total = 0.0;
    for (double k : kernel) total += k;
    for (double& k : kernel) k /= total;
  }

  std::vector<double> out(n, 0.0);
  const auto& x = signal.values();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < n; ++d) acc += kernel[d] * x[(i + n - d) % n];
    out[i] = acc;
  }
  return out;
}

/// Dispatch: spectral for periodic signals, Crank-Nicolson otherwise.
inline std::vector<double> evolve(const Signal& signal, const HeatEvolution& evolution, int fd_time_steps = 1000) {
  evolution.validate();
  if (evolution.bc == BoundaryCondition::periodic)
    return evolve_spectral(signal, evolution.diffusivity, evolution.time);
  return evolve_fd(signal, evolution.diffusivity, evolution.time, evolution.bc, fd_time_steps);
}

}  // namespace fpemd
