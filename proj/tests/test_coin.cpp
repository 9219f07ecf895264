#include <gtest/gtest.h>

#include "support.hpp"

namespace qrtw {
namespace {

using testing::C;
using testing::kPi;

double max_entry_distance(const Matrix2c<double>& a, const Matrix2c<double>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

TEST(Coin, IdentityAccepted) {
  const auto u = make_coin<double>(1, 0, 0, 1);
  EXPECT_EQ(u.matrix(), Matrix2c<double>::Identity());
}

TEST(Coin, HadamardAcceptedAndStoredExactly) {
  const double h = 1 / std::sqrt(2.0);
  const auto u = make_coin<double>(h, h, h, -h);
  EXPECT_EQ(u.a(), C(h));
  EXPECT_EQ(u.d(), C(-h));
  EXPECT_EQ(u, hadamard<double>());
}

TEST(Coin, NonUnitaryRejectedWithDeviation) {
  try {
    make_coin<double>(1, 1, 0, 1);
    FAIL() << "expected NotUnitary";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotUnitary);
    EXPECT_NE(std::string(e.what()).find("= 1"), std::string::npos) << e.what();
  }
}

TEST(Coin, RoundedDecimalsWithinAcceptanceTolerance) {
  EXPECT_NO_THROW(make_coin<double>(0.70710678118654, 0.70710678118655, 0.70710678118655,
                                    -0.70710678118654));
  EXPECT_THROW(make_coin<double>(0.7071067, 0.7071067, 0.7071067, -0.7071067), Error);
}

TEST(Coin, FreeCoin) {
  EXPECT_LT(max_entry_distance(free_coin(0.0, 0.0).matrix(), Matrix2c<double>::Identity()), 1e-15);
  const auto half = free_coin(kPi / 2, kPi / 2);
  EXPECT_NEAR(std::abs(half.a() - C(0, 1)), 0, 1e-15);
  EXPECT_NEAR(std::abs(half.d() - C(0, 1)), 0, 1e-15);
  EXPECT_NEAR(std::abs(determinant(half) - C(-1)), 0, 1e-15);
  const auto flip = free_coin(kPi, 0.0);
  EXPECT_NEAR(std::abs(flip.a() - C(-1)), 0, 1e-15);
  EXPECT_EQ(flip.d(), C(1));
}

TEST(Coin, HalfWavePlate) {
  Matrix2c<double> expected;
  expected << 1, 0, 0, -1;
  EXPECT_LT(max_entry_distance(half_wave_plate(0.0).matrix(), expected), 1e-15);
  EXPECT_LT(max_entry_distance(half_wave_plate(kPi / 8).matrix(), hadamard<double>().matrix()),
            1e-15);
  expected << 0, 1, 1, 0;
  EXPECT_LT(max_entry_distance(half_wave_plate(kPi / 4).matrix(), expected), 1e-15);
  for (double theta : {0.1, 0.7, 2.3, -1.4}) {
    EXPECT_NEAR(std::abs(determinant(half_wave_plate(theta)) - C(-1)), 0, 1e-15);
  }
}

TEST(Coin, Determinants) {
  EXPECT_EQ(determinant(make_coin<double>(1, 0, 0, 1)), C(1));
  EXPECT_NEAR(std::abs(determinant(hadamard<double>()) - C(-1)), 0, 1e-15);
  EXPECT_NEAR(std::abs(determinant(free_coin(0.4, 1.9)) - std::polar(1.0, 2.3)), 0, 1e-15);
}

TEST(Coin, BetaDecompositionExamples) {
  EXPECT_EQ(beta_decompose(make_coin<double>(1, 0, 0, 1)).beta_sq, 0.0);
  EXPECT_NEAR(beta_decompose(hadamard<double>()).beta_sq, 0.5, 1e-15);
  const auto swap = make_coin<double>(0, 1, 1, 0);
  const auto dec = beta_decompose(swap);
  EXPECT_EQ(dec.beta_sq, 1.0);
  EXPECT_EQ(dec.alpha, C(0));
  EXPECT_LT(max_entry_distance(dec.reassemble(), swap.matrix()), 1e-15);
}

TEST(Coin, BetaDecompositionDiagonalConvention) {
  const auto u = free_coin(0.3, -1.1);
  const auto dec = beta_decompose(u);
  EXPECT_EQ(dec.beta, C(0));
  EXPECT_EQ(dec.alpha, C(1));
  EXPECT_LT(std::abs(dec.v + u.d()), 1e-15);
  EXPECT_LT(max_entry_distance(dec.reassemble(), u.matrix()), 1e-15);
}

class CoinProperties : public ::testing::Test {
 protected:
  static constexpr int kCases = 100;
  testing::Generator gen{0xC01};
};

TEST_F(CoinProperties, DeterminantHasUnitModulus) {
  for (int i = 0; i < kCases; ++i) {
    EXPECT_NEAR(std::abs(determinant(gen.unitary())), 1.0, 1e-12);
  }
}

TEST_F(CoinProperties, HalfWavePlateIsInvolution) {
  for (int i = 0; i < kCases; ++i) {
    const auto t = half_wave_plate(gen.uniform(-10, 10)).matrix();
    EXPECT_LT(max_entry_distance(t * t, Matrix2c<double>::Identity()), 1e-12);
  }
}

TEST_F(CoinProperties, BetaDecomposeReassembles) {
  for (int i = 0; i < kCases; ++i) {
    const auto u = gen.unitary();
    const auto dec = beta_decompose(u);
    EXPECT_NEAR(std::norm(dec.alpha) + dec.beta_sq, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(dec.u), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(dec.v), 1.0, 1e-12);
    EXPECT_NEAR(dec.beta_sq, std::norm(u.b()), 1e-12);
    EXPECT_LT(max_entry_distance(dec.reassemble(), u.matrix()), 1e-12);
  }
}

TEST_F(CoinProperties, OffDiagonalProductFromDeterminantAndBeta) {
  for (int i = 0; i < kCases; ++i) {
    const auto u = gen.unitary();
    const C expected = -determinant(u) * beta_decompose(u).beta_sq;
    EXPECT_LT(std::abs(u.b() * u.c() - expected), 1e-12);
  }
}

TEST(Coin, LongDoubleInstantiation) {
  const auto u = hadamard<long double>();
  EXPECT_LT(std::abs(determinant(u) + 1.0L), 1e-18L);
  EXPECT_LT(unitarity_residual(u.matrix()), 1e-18L);
}

}  // namespace
}  // namespace qrtw
