#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fpemd/experiments.hpp"
#include "fpemd/numeric.hpp"
#include "fpemd/pde_emd.hpp"
#include "fpemd/signal.hpp"
#include "oracles.hpp"

using namespace fpemd;

namespace {
constexpr double kPi = std::numbers::pi;

PdeParams params_for(double f_top, double T, int N) {
  PdeParams p;
  const double w = 2 * kPi * f_top;
  p.a = 1.0 / (w * w);
  p.T = T;
  p.N = N;
  return p;
}
}  // namespace

TEST(PdeParams, Validation) {
  PdeParams p;
  EXPECT_NO_THROW(p.validate());
  for (auto mutate : std::vector<void (*)(PdeParams&)>{
           [](PdeParams& q) { q.a = 0; }, [](PdeParams& q) { q.a = -1; }, [](PdeParams& q) { q.T = 0; },
           [](PdeParams& q) { q.N = 0; }, [](PdeParams& q) { q.delta = 1; }, [](PdeParams& q) { q.delta = 0; },
           [](PdeParams& q) { q.fd_time_steps = 0; }}) {
    PdeParams q;
    mutate(q);
    EXPECT_THROW(q.validate(), precondition_error);
  }
}

TEST(Attenuation, Examples) {
  EXPECT_EQ(attenuation(0.0, 1.0, 1.0, 1), 0.0);
  EXPECT_NEAR(attenuation(std::sqrt(std::log(2.0)), 1.0, 1.0, 1), 0.5, 1e-15);
  const double w = 2 * kPi;
  EXPECT_NEAR(attenuation(w, 1.0 / (w * w), 10.0, 100), std::pow(1 - std::exp(-10.0), 100), 1e-15);
  EXPECT_NEAR(attenuation(w, 1.0 / (w * w), 10.0, 100), 0.99547, 1e-5);
  EXPECT_THROW(attenuation(-1.0, 1.0, 1.0, 1), precondition_error);
}

TEST(Attenuation, Monotone) {
  for (double w = 0.1; w < 5; w += 0.3) {
    EXPECT_LT(attenuation(w, 0.2, 1.0, 3), attenuation(w + 0.1, 0.2, 1.0, 3));
    EXPECT_LT(attenuation(w, 0.2, 1.0, 3), attenuation(w, 0.3, 1.0, 3));
    EXPECT_LT(attenuation(w, 0.2, 1.0, 3), attenuation(w, 0.2, 1.5, 3));
    EXPECT_GT(attenuation(w, 0.2, 1.0, 3), attenuation(w, 0.2, 1.0, 4));
  }
}

TEST(MeanCurve, Examples) {
  const auto c = synth_cosine_sum({}, 1.7, 100, 1);
  for (double v : mean_curve(c, PdeParams{})) EXPECT_NEAR(v, 1.7, 1e-12);
  const auto z = synth_cosine_sum({}, 0.0, 100, 1);
  for (double v : mean_curve(z, PdeParams{})) EXPECT_EQ(v, 0.0);
  const auto tone = synth_cosine_sum({{1, 4, 0}}, 0, 100, 1);
  const auto m = mean_curve(tone, params_for(4.0, 1.0, 1));
  EXPECT_NEAR(oracle::tone_amplitude(m, 4), 0.367879441171442, 1e-12);
}

TEST(SiftPde, CosineAttenuationLaw) {
  const auto s = synth_cosine_sum({{2.5, 5, 0.4}}, 0, 1000, 1);
  for (double T : {1.0, 10.0})
    for (int N : {1, 10, 100}) {
      const auto r = sift_pde(s, params_for(5.0, T, N));
      EXPECT_EQ(r.iterations, N);
      const double expected = 2.5 * std::pow(1 - std::exp(-T), N);
      EXPECT_NEAR(oracle::tone_amplitude(r.imf.values(), 5) / expected, 1.0, 1e-9) << T << ' ' << N;
    }
}

TEST(SiftPde, ConstantAbsorbedInOneStep) {
  const auto s = synth_cosine_sum({}, 3.0, 50, 2);
  PdeParams p;
  p.N = 1;
  const auto step = sift_pde(s, p);
  for (double v : step.imf.values()) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(SiftPde, TwoToneRatioMatchesPrediction) {
  const double fs = 64, T = 2.0;
  const int N = 5;
  const auto s = synth_cosine_sum({{1, 8, 0}, {1, 4, 0}}, 0, fs, 1);
  const auto p = params_for(8.0, T, N);
  const auto r = sift_pde(s, p);
  const double hi = oracle::tone_amplitude(r.imf.values(), 8), lo = oracle::tone_amplitude(r.imf.values(), 4);
  const double predicted = std::pow((1 - std::exp(-0.25 * T)) / (1 - std::exp(-T)), N);
  EXPECT_NEAR(lo / hi, predicted, 1e-9);
  EXPECT_NEAR(lo / hi, cutoff_ratio(0.5, N, T), 1e-9);
}

TEST(SiftPde, EarlyExitStopsSooner) {
  const auto s = synth_cosine_sum({{1, 5, 0}}, 0, 1000, 1);
  auto p = params_for(5.0, 10.0, 100);
  p.imf_early_exit = true;
  const auto r = sift_pde(s, p);
  EXPECT_EQ(r.iterations, 1);
}

TEST(SiftPde, NonPeriodicBoundariesRun) {
  const auto s = synth_cosine_sum({{1, 5, 0.3}}, 0.2, 200, 1);
  for (auto bc : {BoundaryCondition::fixed_ends, BoundaryCondition::reflective}) {
    // Short evolution keeps the boundary layer (width ~ sqrt(2aT) = 0.06 s)
    // out of the interior; there the tone carries the periodic gain.
    auto p = params_for(5.0, 2.0, 3);
    p.bc = bc;
    p.fd_time_steps = 100;
    const auto r = sift_pde(s, p);
    EXPECT_EQ(r.iterations, 3);
    const auto in = interior(s.size(), 0.6);
    const double gain = std::pow(1 - std::exp(-2.0), 3);
    auto tone = synth_cosine_sum({{gain, 5, 0.3}}, 0, 200, 1);
    EXPECT_LT(relative_l2(slice(r.imf.samples(), in), slice(tone.samples(), in)), 0.05);
  }
}

TEST(DecomposePde, TenAndThreeHertz) {
  const auto s = synth_cosine_sum({{1, 10, 0}, {1, 3, 0}}, 0, 1000, 2);
  const auto d = decompose_pde(s, with_estimated_diffusivity(PdeParams{}, s));
  ASSERT_GE(d.size(), 1u);
  const auto ten = synth_cosine_sum({{1, 10, 0}}, 0, 1000, 2);
  const auto in = interior(s.size(), 0.8);
  EXPECT_LT(relative_l2(slice(d.imfs[0].samples(), in), slice(ten.samples(), in)), 0.1);
  EXPECT_EQ(d.method, Method::forward_pde);
  EXPECT_EQ(d.diffusivity_per_imf.size(), d.size());
}

TEST(DecomposePde, PureToneHasOneSubstantiveImf) {
  const auto s = synth_cosine_sum({{1, 2, 0}}, 0, 100, 5);
  const auto d = decompose_pde(s, with_estimated_diffusivity(PdeParams{}, s));
  const double norm = l2_norm(s.samples());
  ASSERT_GE(d.size(), 1u);
  EXPECT_GT(l2_norm(d.imfs[0].samples()), 0.99 * norm);
  for (std::size_t k = 1; k < d.size(); ++k) EXPECT_LT(l2_norm(d.imfs[k].samples()), 0.01 * norm);
  EXPECT_LT(l2_norm(d.residual.samples()), 0.01 * norm);
}

TEST(DecomposePde, StopsWithoutOscillation) {
  const auto s = synth_cosine_sum({}, 1.0, 100, 1);
  const auto d = decompose_pde(s, PdeParams{});
  EXPECT_EQ(d.size(), 0u);
  EXPECT_EQ(d.residual, s);
}

TEST(DecomposePde, MaxImfsAndReconstruction) {
  const auto s = add_white_noise(synth_cosine_sum({{1, 1, 0}, {1, 0.4, 0}}, 0, 25, 40), 0.1, 3);
  const auto d = decompose_pde(s, with_estimated_diffusivity(PdeParams{}, s), 3);
  EXPECT_LE(d.size(), 3u);
  EXPECT_LT(oracle::rel_l2(d.reconstruct().values(), s.values()), 1e-9);
  EXPECT_THROW(decompose_pde(s, PdeParams{}, 0), precondition_error);
}

TEST(DecomposePde, ModeMixSeparates) {
  const ModeMixConfig cfg;
  const auto s = synth_mode_mixing(cfg.f1, cfg.f2, cfg.t_switch, cfg.sample_rate, cfg.duration);
  const auto d = decompose_pde(s, with_estimated_diffusivity(PdeParams{}, s));
  const auto r = evaluate_mode_mixing(d, cfg);
  EXPECT_NE(r.owner[0], r.owner[1]);
  EXPECT_TRUE(r.separated);
}
