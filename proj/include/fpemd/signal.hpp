#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "fpemd/error.hpp"

namespace fpemd {

/// Uniformly sampled real time series. Samples are finite and the spacing is
/// 1/sample_rate by construction; instances are immutable.
class Signal {
 public:
  Signal(std::vector<double> samples, double sample_rate, double start_time = 0.0)
      : samples_(std::move(samples)), sample_rate_(sample_rate), start_time_(start_time) {
    detail::require(std::isfinite(sample_rate_) && sample_rate_ > 0.0,
                    "sample_rate must be positive and finite");
    detail::require(std::isfinite(start_time_), "start_time must be finite");
    detail::require(std::all_of(samples_.begin(), samples_.end(),
                                [](double v) { return std::isfinite(v); }),
                    "signal samples must be finite");
  }

  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& values() const noexcept { return samples_; }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate() const noexcept { return sample_rate_; }
  double start_time() const noexcept { return start_time_; }
  double dt() const noexcept { return 1.0 / sample_rate_; }
  /// Length of the sampled window, n/fs seconds.
  double duration() const noexcept { return static_cast<double>(samples_.size()) / sample_rate_; }
  double time_at(std::size_t i) const noexcept {
    return start_time_ + static_cast<double>(i) / sample_rate_;
  }

  /// Same grid, new values.
  Signal with_samples(std::vector<double> samples) const {
    detail::require(samples.size() == samples_.size(), "replacement samples must keep the length");
    return Signal(std::move(samples), sample_rate_, start_time_);
  }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  double sample_rate_;
  double start_time_;
};

/// A * cos(2 pi f t + phase).
struct CosineComponent {
  double amplitude = 1.0;
  double frequency = 1.0;  // Hz
  double phase = 0.0;      // rad
};

namespace detail {

inline std::size_t sample_count(double sample_rate, double duration) {
  require(std::isfinite(sample_rate) && sample_rate > 0.0, "sample_rate must be positive");
  require(std::isfinite(duration) && duration > 0.0, "duration must be positive");
  const double n = std::round(duration * sample_rate);
  require(n >= 1.0, "duration * sample_rate rounds to an empty signal");
  return static_cast<std::size_t>(n);
}

inline void require_below_nyquist(double frequency, double sample_rate) {
  require(std::isfinite(frequency) && frequency > 0.0, "component frequency must be positive");
  require(sample_rate > 2.0 * frequency, "sample_rate must exceed twice every component frequency");
}

}  // namespace detail

/// Samples sum_k A_k cos(2 pi f_k n/fs + phi_k) + offset for n in [0, round(duration*fs)).
inline Signal synth_cosine_sum(std::span<const CosineComponent> components, double offset,
                               double sample_rate, double duration) {
  const std::size_t n = detail::sample_count(sample_rate, duration);
  for (const auto& c : components) {
    detail::require_below_nyquist(c.frequency, sample_rate);
    detail::require(std::isfinite(c.amplitude) && std::isfinite(c.phase),
                    "component amplitude and phase must be finite");
  }
  detail::require(std::isfinite(offset), "offset must be finite");

  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double acc = 0.0;
    for (const auto& c : components)
      acc += c.amplitude * std::cos(2.0 * std::numbers::pi * c.frequency * t + c.phase);
    out[i] = acc + offset;
  }
  return Signal(std::move(out), sample_rate);
}

inline Signal synth_cosine_sum(std::initializer_list<CosineComponent> components, double offset,
                               double sample_rate, double duration) {
  return synth_cosine_sum(std::span<const CosineComponent>(components.begin(), components.size()),
                          offset, sample_rate, duration);
}

/// cos(2 pi f1 t) for t < t_switch, cos(2 pi f2 t) afterwards. Phases are not
/// matched at the switch.
inline Signal synth_mode_mixing(double f1, double f2, double t_switch, double sample_rate,
                                double duration) {
  const std::size_t n = detail::sample_count(sample_rate, duration);
  detail::require_below_nyquist(f1, sample_rate);
  detail::require_below_nyquist(f2, sample_rate);
  detail::require(t_switch > 0.0 && t_switch < duration, "t_switch must lie in (0, duration)");

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double f = t < t_switch ? f1 : f2;
    out[i] = std::cos(2.0 * std::numbers::pi * f * t);
  }
  return Signal(std::move(out), sample_rate);
}

/// Adds i.i.d. N(0, sigma^2) samples drawn from a 64-bit Mersenne Twister
/// (boost::random::mt19937_64) through boost's ziggurat normal distribution.
/// Both are fully specified by Boost, so a seed replays identically on every
/// platform.
inline Signal add_white_noise(const Signal& signal, double sigma, std::uint64_t seed) {
  detail::require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be non-negative");
  if (sigma == 0.0) return signal;
  boost::random::mt19937_64 engine(seed);
  boost::random::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> out(signal.values());
  for (double& v : out) v += normal(engine);
  return signal.with_samples(std::move(out));
}

}  // namespace fpemd
