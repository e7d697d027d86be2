// Decomposes cos(2 pi x) + alpha cos(2 pi f x) with both methods and prints the
// performance measure of the first IMF.
//
//   demo_two_tone_separation [alpha] [f]
#include <cstdio>
#include <cstdlib>

#include "fpemd/fpemd.hpp"

int main(int argc, char** argv) {
  const double alpha = argc > 1 ? std::atof(argv[1]) : 1.0;
  const double f = argc > 2 ? std::atof(argv[2]) : 0.4;
  const fpemd::TwoToneGrid grid;
  const auto signal = fpemd::two_tone(alpha, f, grid);
  const auto reference = fpemd::high_tone(grid);

  std::printf("alpha = %g, f = %g, %zu samples at %g Hz\n", alpha, f, signal.size(), grid.sample_rate);
  for (auto method : {fpemd::Method::classical, fpemd::Method::forward_pde}) {
    const auto d = fpemd::run_method(method, signal, fpemd::MethodConfig{});
    const double pm = fpemd::performance_measure(fpemd::first_imf(d), reference);
    std::printf("%-12s IMFs = %zu  PM = %.4f\n", std::string(fpemd::to_string(method)).c_str(), d.size(), pm);
  }
  std::printf("theoretical cutoff ratio for N = 100, T = 10, delta = 0.5: %.4f\n",
              fpemd::cutoff_frequency(100, 10.0, 0.5));
}
