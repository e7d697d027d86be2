// Release acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fpemd/fpemd.hpp"
#include "oracles.hpp"

using namespace fpemd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

// 1. Per-mode gain of forward-PDE sifting on a periodic cosine.
void attenuation_law(Outcome& o) {
  const double f = 5.0, w = 2 * kPi * f;
  const auto s = synth_cosine_sum({{1.0, f, 0.0}}, 0.0, 1000.0, 1.0);
  double worst = 0.0;
  for (double T : {1.0, 10.0})
    for (int N : {1, 10, 100}) {
      const auto start = std::chrono::steady_clock::now();
      PdeParams p;
      p.a = 1.0 / (w * w);
      p.T = T;
      p.N = N;
      const auto imf = sift_pde(s, p).imf.values();
      const double measured = oracle::tone_amplitude(imf, 5);
      const double expected = std::pow(1.0 - std::exp(-T), N);
      const double rel = std::abs(measured - expected) / expected;
      worst = std::max(worst, rel);
      const std::string tag = "T=" + std::to_string(T) + " N=" + std::to_string(N);
      o.check(rel <= 1e-9, tag);
      o.check(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 1.0,
              tag + " under 1 s");
    }
  o.detail << "max relative error " << worst;
}

// 2. Cutoff ratio for (N, T, delta) = (100, 10, 0.5) and its empirical effect.
void cutoff(Outcome& o) {
  const double f0 = cutoff_frequency(100, 10.0, 0.5);
  o.check(f0 >= 0.70 && f0 <= 0.71, "f0 in [0.70, 0.71]");
  o.check(std::abs(f0 - oracle::cutoff_closed(100, 10.0, 0.5)) < 1e-12, "f0 matches closed form");
  // Diffusivity tuned to the top tone (a = 1/ω_max^2), as the cutoff relation assumes.
  MethodConfig cfg;
  cfg.estimate_a = false;
  cfg.pde.a = 1.0 / std::pow(2 * kPi * 1.0, 2);
  const std::vector<double> alpha{1.0}, fs{0.5, 0.9};
  const auto g = pm_sweep(Method::forward_pde, alpha, fs, cfg);
  o.check(g.at(0, 0) < 0.15, "PM(f=0.5) < 0.15");
  o.check(g.at(0, 1) > 0.5, "PM(f=0.9) > 0.5");
  o.detail << "f0 = " << f0 << ", PM(f=0.5) = " << g.at(0, 0) << ", PM(f=0.9) = " << g.at(0, 1);
}

// 3. Mode mixing: forward-PDE separates the concatenated tones, classical does not.
void mode_mixing(Outcome& o) {
  const auto rep = mode_mixing_experiment(ModeMixConfig{});
  o.check(rep.forward_pde.separated, "forward-PDE separated");
  o.check(!rep.classical.separated, "classical not separated");
  o.detail << "forward-PDE owners IMF" << rep.forward_pde.owner[0] + 1 << "/IMF" << rep.forward_pde.owner[1] + 1
           << ", classical owners IMF" << rep.classical.owner[0] + 1 << "/IMF" << rep.classical.owner[1] + 1;
}

// 4. Spectral, Crank-Nicolson and Gaussian-convolution solvers agree; invariants hold.
void heat_trio(Outcome& o) {
  const auto s = synth_cosine_sum({{1.0, 2.0, 0.3}, {0.5, 5.0, 1.1}, {0.25, 9.0, -0.7}}, 0.4, 1000.0, 1.0);
  const double a = 1.0 / std::pow(2 * kPi * 5.0, 2), T = 1.0;
  const auto sp = evolve_spectral(s, a, T);
  const auto fd = evolve_fd(s, a, T, BoundaryCondition::periodic, 1000);
  const auto gc = gaussian_convolve_oracle(s, a, T);
  const double e1 = oracle::rel_l2(fd, sp), e2 = oracle::rel_l2(gc, sp), e3 = oracle::rel_l2(fd, gc);
  o.check(e1 < 1e-4 && e2 < 1e-4 && e3 < 1e-4, "pairwise agreement");

  const auto semi = evolve_spectral(s.with_samples(evolve_spectral(s, a, 0.4)), a, 0.6);
  double semi_err = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) semi_err = std::max(semi_err, std::abs(semi[i] - sp[i]));
  o.check(semi_err < 1e-12, "semigroup");

  const auto s2 = synth_cosine_sum({{0.8, 3.0, 0.0}, {0.1, 20.0, 0.5}}, -0.2, 1000.0, 1.0);
  std::vector<double> combo(s.size());
  for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 1.5 * s[i] - 2.0 * s2[i];
  const auto lhs = evolve_spectral(s.with_samples(combo), a, T);
  const auto e_s2 = evolve_spectral(s2, a, T);
  std::vector<double> rhs(combo.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = 1.5 * sp[i] - 2.0 * e_s2[i];
  o.check(oracle::rel_l2(lhs, rhs) < 1e-12, "linearity");

  const auto [lo_it, hi_it] = std::minmax_element(s.values().begin(), s.values().end());
  const double eps = 1e-12 * (*hi_it - *lo_it);
  bool bounded = true;
  for (const auto* v : {&sp, &gc})
    for (double x : *v) bounded = bounded && x >= *lo_it - eps && x <= *hi_it + eps;
  o.check(bounded, "maximum principle");

  double m_in = 0.0, m_out = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    m_in += s[i];
    m_out += sp[i];
  }
  o.check(std::abs(m_in - m_out) / static_cast<double>(s.size()) < 1e-12, "mean conservation");
  o.detail << "fd-spectral " << e1 << ", gauss-spectral " << e2 << ", fd-gauss " << e3 << ", semigroup " << semi_err;
}

// 5. Sum of IMFs plus residual reproduces the input for every corpus signal.
void reconstruction(Outcome& o) {
  const TwoToneGrid grid;
  std::vector<std::pair<std::string, Signal>> corpus;
  corpus.emplace_back("pure tone", high_tone(grid));
  for (double f : {0.1, 0.3, 0.5, 0.7, 0.9, 0.95}) corpus.emplace_back("two-tone f=" + std::to_string(f), two_tone(1.0, f, grid));
  const ModeMixConfig mm;
  corpus.emplace_back("mode-mix", synth_mode_mixing(mm.f1, mm.f2, mm.t_switch, mm.sample_rate, mm.duration));
  for (std::uint64_t seed : {1, 2, 3})
    corpus.emplace_back("noisy seed " + std::to_string(seed), add_white_noise(two_tone(1.0, 0.4, grid), 0.1, seed));
  double worst = 0.0;
  for (const auto& [name, sig] : corpus)
    for (Method m : {Method::classical, Method::forward_pde}) {
      const auto d = run_method(m, sig, MethodConfig{});
      const double err = oracle::rel_l2(d.reconstruct().values(), sig.values());
      worst = std::max(worst, err);
      o.check(err <= 1e-9, name + " " + std::string(to_string(m)));
    }
  o.detail << corpus.size() << " signals x 2 methods, max relative error " << worst;
}

// 6. solve_T and cutoff_frequency against their defining relations.
void parameter_solvers(Outcome& o) {
  for (double d : {0.1, 0.5, 0.9}) o.check(std::abs(solve_T(1, d) + std::log(d)) <= 1e-12, "solve_T(1, delta)");
  const double t100 = solve_T(100, 0.01);
  o.check(std::abs(t100 - 9.2054) <= 1e-3, "solve_T(100, 0.01)");
  double worst = 0.0;
  for (int N : {1, 5, 20, 100, 1000})
    for (double T : {0.5, 1.0, 5.0, 10.0, 20.0})
      for (double delta : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        const double f0 = cutoff_frequency(N, T, delta);
        worst = std::max(worst, std::abs(oracle::cutoff_lhs(f0, N, T) - delta));
      }
  o.check(worst < 1e-9, "back-substitution");
  o.detail << "solve_T(100, 0.01) = " << t100 << ", max back-substitution residual " << worst;
}

// 7. Instantaneous frequency of a tone; HH spectrum of the forward-PDE mode-mix decomposition.
void hilbert_pipeline(Outcome& o) {
  const auto tone = synth_cosine_sum({{1.0, 5.0, 0.0}}, 0.0, 1000.0, 2.0);
  const auto inst = instantaneous_frequency(analytic_signal(tone));
  const auto in = interior(tone.size(), 0.8);
  double worst = 0.0;
  for (std::size_t i = in.begin; i < in.end; ++i) worst = std::max(worst, std::abs(inst.hz[i] - 5.0) / 5.0);
  o.check(worst <= 0.01, "IF within 1%");

  const ModeMixConfig mm;
  const auto s = synth_mode_mixing(mm.f1, mm.f2, mm.t_switch, mm.sample_rate, mm.duration);
  const auto d = run_method(Method::forward_pde, s, MethodConfig{});
  const auto hs = hh_spectrum(d, 100, 100, 2.5 * mm.f2);
  const double edge = 0.02 * mm.duration;
  const double first = spectrum_band_fraction(hs, edge, mm.t_switch, 0.75 * mm.f1, 1.25 * mm.f1);
  const double second = spectrum_band_fraction(hs, mm.t_switch, mm.duration - edge, 0.75 * mm.f2, 1.25 * mm.f2);
  o.check(first >= 0.8 && second >= 0.8, "HH band fractions >= 0.8");
  o.detail << "max IF error " << worst * 100 << "%, HH band fractions " << first << " / " << second;
}

// 8. Structural comparison of the (alpha, f) performance grids.
void separation_sweep(Outcome& o) {
  const std::vector<double> alpha{0.01, 0.1, 1.0, 10.0, 100.0};
  const std::vector<double> f{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const MethodConfig cfg;
  const auto gc = pm_sweep(Method::classical, alpha, f, cfg);
  const auto gp = pm_sweep(Method::forward_pde, alpha, f, cfg);
  o.check(gc.all_finite() && gp.all_finite(), "finite grids");
  const double rho = spearman(gc.pm, gp.pm);
  o.check(rho > 0.7, "Spearman > 0.7");
  // Trend over f in {0.3, ..., 0.9} at alpha = 1 (row 2).
  const std::vector<double> f_tail(f.begin() + 2, f.end());
  for (const auto* g : {&gc, &gp}) {
    std::vector<double> row;
    for (std::size_t j = 2; j < f.size(); ++j) row.push_back(g->at(2, j));
    const double trend = spearman(f_tail, row);
    const std::string tag = std::string(to_string(g->method));
    o.check(trend > 0.0, tag + " trend over f");
    o.check(row.back() > row.front(), tag + " PM(0.9) > PM(0.3)");
    o.check(row.back() > 0.5, tag + " PM(0.9) > 0.5");
    o.detail << tag << " trend rho " << trend << " (PM " << row.front() << " -> " << row.back() << "), ";
  }
  o.detail << "grid Spearman " << rho;
}

// 9. Mean PM under noise: forward-PDE no worse than classical.
void noise_robustness_check(Outcome& o) {
  const std::vector<Method> methods{Method::classical, Method::forward_pde};
  const std::vector<double> sigma{0.1};
  const auto t = noise_robustness(methods, sigma, 1, 10, NoiseConfig{});
  const double c = t.mean_pm(Method::classical, 0.1), p = t.mean_pm(Method::forward_pde, 0.1);
  o.check(p <= c, "forward-PDE mean PM <= classical");
  o.detail << "mean PM classical " << c << ", forward-PDE " << p;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "attenuation law", 6.0, attenuation_law},
      {2, "cutoff frequency", 10.0, cutoff},
      {3, "mode-mixing separation", 30.0, mode_mixing},
      {4, "heat-solver agreement and invariants", 5.0, heat_trio},
      {5, "reconstruction identity", 60.0, reconstruction},
      {6, "parameter solvers", 5.0, parameter_solvers},
      {7, "Hilbert pipeline", 10.0, hilbert_pipeline},
      {8, "separation-capability sweep", 300.0, separation_sweep},
      {9, "noise robustness", 120.0, noise_robustness_check},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(secs <= c.budget_seconds, "runtime budget " + std::to_string(c.budget_seconds) + " s");
    if (!o.pass) ++failures;
    std::printf("%s  %d. %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.str().c_str(),
                secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
