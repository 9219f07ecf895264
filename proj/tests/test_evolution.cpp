#include <gtest/gtest.h>

#include <chrono>

#include "support.hpp"

namespace qrtw {
namespace {

using testing::C;
using testing::kPi;

TEST(Lattice, InitialPlaneWave) {
  const auto cfg = testing::hadamard_cavity_config(3);
  const auto s = init_lattice(cfg, {-20, 23});
  EXPECT_EQ(s.n, 0);
  EXPECT_EQ(s.amplitudes.right(-5), C(1));
  EXPECT_EQ(s.amplitudes.right(2), C(0));
  for (int x = -20; x <= 23; ++x) EXPECT_EQ(s.amplitudes.left(x), C(0));
  EXPECT_NEAR(s.amplitudes.amplitudes().squaredNorm(), 20.0, 1e-12);

  TunnelingConfig<double> quarter{0.0, kPi / 2, hadamard<double>(), 3, 0.0};
  EXPECT_LT(std::abs(init_lattice(quarter, {-5, 6}).amplitudes.right(-1) - C(0, -1)), 1e-15);
}

TEST(Lattice, WindowTooSmall) {
  const auto cfg = testing::hadamard_cavity_config(3);
  try {
    init_lattice(cfg, {-1, 10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WindowTooSmall);
  }
  EXPECT_THROW(init_lattice(cfg, {-5, 4}), Error);
}

TEST(Step, FirstStepHadamardCavity) {
  const auto s = step(init_lattice(testing::hadamard_cavity_config(3), {-20, 23}));
  EXPECT_EQ(s.n, 1);
  EXPECT_EQ(s.amplitudes.left(-1), C(0));
  EXPECT_LT(std::abs(s.amplitudes.right(0) - C(1)), 1e-15);
  EXPECT_EQ(s.amplitudes.right(1), C(0));
}

TEST(Step, FreeTransportRightMover) {
  const double p = 0.37, q = 1.91;
  TunnelingConfig<double> cfg{p, q, free_coin(p, q), 4, 0.0};
  AmplitudeProfile<double> start({-30, 30});
  start.right(0) = 1.0;
  auto s = init_from_profile(cfg, start);
  for (int n = 1; n <= 25; ++n) {
    advance(s);
    for (int x = -30; x <= 30; ++x) {
      const C expect_r = x == n ? std::polar(1.0, q * n) : C(0);
      EXPECT_LT(std::abs(s.amplitudes.right(x) - expect_r), 1e-14);
      EXPECT_EQ(s.amplitudes.left(x), C(0));
    }
  }
}

TEST(Step, FreeTransportLeftMover) {
  const double p = -0.8, q = 0.2;
  TunnelingConfig<double> cfg{p, q, free_coin(p, q), 4, 0.0};
  AmplitudeProfile<double> start({-30, 30});
  start.left(0) = 1.0;
  auto s = init_from_profile(cfg, start);
  for (int n = 1; n <= 25; ++n) advance(s);
  EXPECT_LT(std::abs(s.amplitudes.left(-25) - std::polar(1.0, 25 * p)), 1e-14);
  EXPECT_NEAR(s.amplitudes.amplitudes().squaredNorm(), 1.0, 1e-14);
}

TEST(Step, FreeFrontAdvancesOneSitePerStep) {
  TunnelingConfig<double> cfg{0.0, 0.0, free_coin(0.0, 0.0), 3, 0.0};
  auto s = init_lattice(cfg, {-10, 40});
  for (int n = 1; n <= 30; ++n) {
    advance(s);
    EXPECT_EQ(s.amplitudes.right(n - 1), C(1));
    EXPECT_EQ(s.amplitudes.right(n), C(0));
  }
}

TEST(Step, InflowRegionStaysPlaneWave) {
  testing::Generator gen(3);
  const auto cfg = gen.config(0.1, 0.9, 6, true);
  auto s = init_lattice(cfg, default_window<double>(cfg.m));
  for (int n = 1; n <= 200; ++n) {
    advance(s);
    for (int x = s.window().lo + 1; x < 0; ++x) {
      const C expected = std::polar(1.0, (cfg.q - cfg.delta) * x + cfg.delta * n);
      EXPECT_LT(std::abs(s.amplitudes.right(x) - expected), 1e-12);
    }
    EXPECT_LT(std::abs(s.injection_phase - std::polar(1.0, cfg.delta * n)), 1e-15);
  }
}

TEST(Convergence, HadamardCavityAgainstClosedForm) {
  const auto cfg = testing::hadamard_cavity_config(3);
  const auto run = run_to_convergence(init_lattice(cfg, {-30, 33}), 1e-8, 100000L);
  EXPECT_TRUE(run.report.converged);
  const auto closed = build_profile(solve_closed_form(cfg), cfg, {-30, 33});
  EXPECT_LT(sup_distance(run.profile, closed, {-10, 13}), 1e-6);
}

TEST(Convergence, ReflectionlessIsImmediate) {
  TunnelingConfig<double> cfg{0.3, 0.9, free_coin(0.5, 0.9), 4, 0.0};
  const Window w{-20, 30};
  const auto run = run_to_convergence(init_lattice(cfg, w), 1e-12, 10000L);
  EXPECT_LE(run.report.steps, w.size());
  const auto closed = build_profile(solve_closed_form(cfg), cfg, w);
  EXPECT_LT(sup_distance(run.profile, closed, {w.lo + 2, w.hi - 2}), 1e-12);
}

TEST(Convergence, FullReflectorSettles) {
  TunnelingConfig<double> cfg{0.2, 0.6, make_coin<double>(0, 1, 1, 0), 3, 0.0};
  const Window w{-25, 20};
  const auto run = run_to_convergence(init_lattice(cfg, w), 1e-12, 5000L);
  EXPECT_TRUE(run.report.converged);
  for (int x = cfg.m + 1; x <= w.hi; ++x) EXPECT_EQ(run.profile.right(x), C(0));
  for (int x = w.lo + 2; x < 0; ++x) EXPECT_NEAR(std::abs(run.profile.left(x)), 1.0, 1e-12);
}

TEST(Convergence, NoConvergenceReported) {
  const auto cfg = testing::hadamard_cavity_config(3);
  try {
    run_to_convergence(init_lattice(cfg, {-30, 33}), 1e-8, 20L);
    FAIL();
  } catch (const NoConvergenceError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoConvergence);
    EXPECT_EQ(e.steps(), 20);
    EXPECT_GT(e.residual(), 1e-8);
  }
}

TEST(Convergence, RandomConfigsMatchClosedForm) {
  testing::Generator gen(0xE70);
  for (int i = 0; i < 50; ++i) {
    const auto cfg = gen.config(0.01, 0.9, 10, false);
    const Window w = default_window<double>(cfg.m);
    const auto run = run_to_convergence(init_lattice(cfg, w), 1e-8, default_max_steps(cfg));
    const auto closed = build_profile(solve_closed_form(cfg), cfg, w);
    EXPECT_LT(sup_distance(run.profile, closed, {w.lo + 2, w.hi - 2}), 1e-6) << "case " << i;
  }
}

TEST(Convergence, EigenphaseCompensated) {
  testing::Generator gen(0xD17);
  for (int i = 0; i < 10; ++i) {
    const auto cfg = gen.config(0.05, 0.8, 6, true);
    const Window w = default_window<double>(cfg.m);
    const auto run = run_to_convergence(init_lattice(cfg, w), 1e-9, default_max_steps(cfg));
    const auto closed = build_profile(solve_closed_form(cfg), cfg, w);
    EXPECT_LT(sup_distance(run.profile, closed, {w.lo + 2, w.hi - 2}), 1e-6) << "case " << i;
  }
}

TEST(Convergence, RoundTripDecayRate) {
  // One round trip between the barriers takes 2m steps and multiplies the
  // cavity amplitude by bc G.
  for (double theta : {0.3, 0.5, 0.65}) {
    for (int m : {1, 2, 4, 6}) {
      TunnelingConfig<double> cfg{0.4, 1.0, half_wave_plate(theta), m, 0.0};
      const double bc = std::abs(cfg.barrier.b() * cfg.barrier.c());
      const auto run = run_to_convergence(init_lattice(cfg, default_window<double>(m)), 1e-11,
                                          default_max_steps(cfg));
      ASSERT_GT(run.report.rate, 0.0);
      EXPECT_NEAR(run.report.rate, bc, 0.2 * bc) << "theta=" << theta << " m=" << m;
    }
  }
}

TEST(Stationarity, ClosedFormProfileIsFixedPoint) {
  testing::Generator gen(17);
  for (int i = 0; i < 100; ++i) {
    const auto cfg = gen.config(1e-6, 1 - 1e-6, 20, true);
    const Window w{-4, cfg.m + 4};
    const auto prof = build_profile(solve_closed_form(cfg), cfg, w);
    auto s = init_lattice(cfg, w);
    s.amplitudes = prof;
    const auto next = step(s);
    const C lambda = std::polar(1.0, cfg.delta);
    for (int x = w.lo + 1; x < w.hi; ++x) {
      EXPECT_LT(std::abs(next.amplitudes.at(x)(0) - lambda * prof.left(x)), 1e-12);
      EXPECT_LT(std::abs(next.amplitudes.at(x)(1) - lambda * prof.right(x)), 1e-12);
    }
  }
}

TEST(NormCheck, FreeAndTransient) {
  TunnelingConfig<double> free_cfg{0.1, 0.2, free_coin(0.1, 0.2), 3, 0.0};
  auto s = init_lattice(free_cfg, {-10, 15});
  for (int n = 0; n < 40; ++n) {
    EXPECT_NEAR(norm_check(s), 0.0, 1e-12);
    advance(s);
  }
  testing::Generator gen(4);
  const auto cfg = gen.config(0.2, 0.8, 5, true);
  auto t = init_lattice(cfg, default_window<double>(cfg.m));
  for (int n = 0; n < 300; ++n) {
    EXPECT_NEAR(norm_check(t), 0.0, 1e-10);
    advance(t);
  }
}

TEST(NormCheck, CorruptedBoundaryDetected) {
  const auto cfg = testing::hadamard_cavity_config(3);
  auto s = init_lattice(cfg, {-10, 15});
  for (int n = 0; n < 12; ++n) advance(s);
  auto next = step(s);
  next.amplitudes.right(-10) *= 0.5;
  EXPECT_GT(std::abs(norm_check(s, next)), 0.1);
}

TEST(Flux, TransientProfileIsNotBalanced) {
  const auto cfg = testing::half_pi_config();
  auto s = init_lattice(cfg, {-30, 30});
  for (int n = 0; n < 3; ++n) advance(s);
  const auto f = flux_balance(s.amplitudes, {-1, cfg.m + 1});
  EXPECT_GT(std::abs(f.inflow - f.outflow), 1e-3);
}

TEST(Convergence, RuntimePerConfigUnderOneSecond) {
  TunnelingConfig<double> cfg{0.3, 1.7, half_wave_plate(0.62), 20, 0.0};
  ASSERT_LE(std::abs(cfg.barrier.b() * cfg.barrier.c()), 0.9);
  const auto t0 = std::chrono::steady_clock::now();
  run_to_convergence(init_lattice(cfg, default_window<double>(cfg.m)), 1e-8,
                     default_max_steps(cfg));
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  EXPECT_LT(dt.count(), 1.0);
}

}  // namespace
}  // namespace qrtw
