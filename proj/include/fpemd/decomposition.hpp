#pragma once

#include <string_view>
#include <vector>

#include "fpemd/error.hpp"
#include "fpemd/signal.hpp"

namespace fpemd {

enum class Method { classical, forward_pde };

inline std::string_view to_string(Method m) {
  return m == Method::classical ? "classical" : "forward-pde";
}

inline Method parse_method(std::string_view name) {
  if (name == "classical") return Method::classical;
  if (name == "forward-pde" || name == "forward_pde" || name == "pde") return Method::forward_pde;
  throw precondition_error("unknown method: " + std::string(name));
}

/// Ordered IMFs (highest frequency first) and the residual. Every member
/// shares the input's length and sample rate; the residual is obtained by
/// successive subtraction, so imfs + residual reconstructs the input.
struct Decomposition {
  std::vector<Signal> imfs;
  Signal residual;
  Method method = Method::classical;
  std::vector<int> iterations_per_imf{};
  /// Diffusivity used for each forward-PDE stage; empty for classical runs.
  std::vector<double> diffusivity_per_imf{};

  std::size_t size() const noexcept { return imfs.size(); }

  Signal reconstruct() const {
    std::vector<double> sum(residual.values());
    for (const auto& imf : imfs)
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += imf[i];
    return residual.with_samples(std::move(sum));
  }
};

}  // namespace fpemd
