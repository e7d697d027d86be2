// Cutoff ratio f0 over (N, T) at delta = 0.5, with the T needed to keep the
// top tone above 1 - delta.
#include <cstdio>
#include <vector>

#include "fpemd/fpemd.hpp"

int main() {
  const std::vector<int> Ns{1, 10, 100, 1000};
  const std::vector<double> Ts{1, 2, 5, 10, 20};
  const double delta = 0.5;
  std::printf("%6s", "N\\T");
  for (double T : Ts) std::printf("%9g", T);
  std::printf("%12s\n", "solve_T");
  for (int N : Ns) {
    std::printf("%6d", N);
    for (double T : Ts) std::printf("%9.4f", fpemd::cutoff_frequency(N, T, delta));
    std::printf("%12.4f\n", fpemd::solve_T(N, 0.01));
  }
}
