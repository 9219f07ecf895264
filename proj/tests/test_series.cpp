#include <gtest/gtest.h>

#include "support.hpp"

namespace qrtw {
namespace {

using testing::C;
using testing::kPi;

TEST(Series, FirstTermOnly) {
  const auto res = t_series(testing::hadamard_cavity_config(3), 0);
  EXPECT_EQ(res.terms_used, 1);
  EXPECT_LT(std::abs(res.partial_sum - C(0.5)), 1e-15);
  // |d^2 bc| / (1 - |bc|) = (1/4) / (1/2)
  EXPECT_NEAR(res.remainder_bound, 0.5, 1e-15);
}

TEST(Series, FiftyTermsReachTheLimit) {
  const auto cfg = testing::hadamard_cavity_config(3);
  const auto res = t_series(cfg, 50);
  EXPECT_LT(std::abs(transmitted_amplitude(res.partial_sum, cfg) - C(1)), 1e-15);
  EXPECT_LT(res.remainder_bound, 1e-15);
}

TEST(Series, ReflectionlessHasSingleTerm) {
  TunnelingConfig<double> cfg{0.3, 0.8, free_coin(1.2, 0.4), 5, 0.0};
  const auto res = t_series(cfg, 0);
  EXPECT_EQ(res.remainder_bound, 0.0);
  const auto t = transmitted_amplitude(res.partial_sum, cfg);
  EXPECT_LT(std::abs(t - cfg.barrier.d() * cfg.barrier.d() * std::polar(1.0, -2 * cfg.q)), 1e-15);
  EXPECT_EQ(t_series(cfg, 40).partial_sum, res.partial_sum);
}

TEST(Series, LimitExamples) {
  EXPECT_LT(std::abs(t_series_limit(testing::hadamard_cavity_config(3)) - C(1)), 1e-15);
  EXPECT_LT(std::abs(t_series_limit(testing::half_pi_config()) - C(0, 1.0 / 3.0)), 1e-15);
}

TEST(Series, FullReflectorDiverges) {
  TunnelingConfig<double> cfg{0.0, 0.0, make_coin<double>(0, 1, 1, 0), 3, 0.0};
  try {
    t_series_limit(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivergentSeries);
  }
  EXPECT_THROW(t_series(cfg, 3), Error);
}

TEST(Series, TermCountIsCapped) {
  const auto res = t_series(testing::hadamard_cavity_config(2), 5'000'000);
  EXPECT_EQ(res.terms_used, kMaxSeriesTerms + 1);
  EXPECT_THROW(t_series(testing::hadamard_cavity_config(2), -1), Error);
}

TEST(SeriesProperties, RemainderBoundHonored) {
  testing::Generator gen(0x5E1);
  for (int i = 0; i < 100; ++i) {
    const auto cfg = gen.config(1e-3, 0.95, 20, i % 3 == 0);
    const C limit = t_series_limit(cfg);
    for (long k : {0L, 1L, 2L, 5L, 10L, 40L, 200L}) {
      const auto res = t_series(cfg, k);
      EXPECT_LE(std::abs(res.partial_sum - limit), res.remainder_bound + 1e-15)
          << "case " << i << " K=" << k;
    }
  }
}

TEST(SeriesProperties, LimitMatchesClosedForm) {
  testing::Generator gen(0x5E2);
  for (int i = 0; i < 100; ++i) {
    const auto cfg = gen.config(1e-6, 1 - 1e-6, 20, i % 2 == 0);
    const C t = transmitted_amplitude(t_series_limit(cfg), cfg);
    EXPECT_LT(std::abs(t - solve_closed_form(cfg).t), 1e-12);
  }
}

}  // namespace
}  // namespace qrtw
