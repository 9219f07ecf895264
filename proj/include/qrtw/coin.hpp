#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include <Eigen/Core>

#include "qrtw/error.hpp"

namespace qrtw {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;

/// Largest entrywise deviation of U U^H from the identity.
template <typename Real>
Real unitarity_residual(const Matrix2c<Real>& u) {
  const Matrix2c<Real> gram = u * u.adjoint() - Matrix2c<Real>::Identity();
  return gram.cwiseAbs().maxCoeff();
}

/// A 2x2 unitary coin [a b; c d]. Row 0 feeds the left-moving chirality,
/// row 1 the right-moving one.
///
/// Instances are immutable; the only way to obtain a non-identity coin is
/// through make_coin (or one of the named constructors built on it), which
/// checks unitarity.
template <typename Real>
class Coin {
 public:
  using Scalar = Complex<Real>;
  using Matrix = Matrix2c<Real>;

  static constexpr Real kAcceptTolerance = Real(1e-10);

  Coin() : m_(Matrix::Identity()) {}

  const Matrix& matrix() const { return m_; }
  Scalar a() const { return m_(0, 0); }
  Scalar b() const { return m_(0, 1); }
  Scalar c() const { return m_(1, 0); }
  Scalar d() const { return m_(1, 1); }

  Scalar determinant() const { return a() * d() - b() * c(); }

  bool operator==(const Coin& other) const { return m_ == other.m_; }

  template <typename R>
  friend Coin<R> make_coin(Complex<R>, Complex<R>, Complex<R>, Complex<R>);

 private:
  explicit Coin(const Matrix& m) : m_(m) {}
  Matrix m_;
};

template <typename Real>
Coin<Real> make_coin(Complex<Real> a, Complex<Real> b, Complex<Real> c, Complex<Real> d) {
  Matrix2c<Real> m;
  m << a, b, c, d;
  const Matrix2c<Real> gram = m * m.adjoint() - Matrix2c<Real>::Identity();
  Eigen::Index row = 0, col = 0;
  const Real worst = gram.cwiseAbs().maxCoeff(&row, &col);
  if (!(worst <= Coin<Real>::kAcceptTolerance)) {
    std::ostringstream msg;
    msg << "coin is not unitary: |(UU^H - I)(" << row << "," << col << ")| = " << worst;
    throw Error(ErrorKind::NotUnitary, msg.str());
  }
  return Coin<Real>(m);
}

template <typename Real>
Coin<Real> make_coin(const Matrix2c<Real>& m) {
  return make_coin<Real>(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
}

/// diag(e^{ip}, e^{iq}): the homogeneous background coin.
template <typename Real>
Coin<Real> free_coin(Real p, Real q) {
  return make_coin<Real>(std::polar(Real(1), p), Complex<Real>(0), Complex<Real>(0),
                         std::polar(Real(1), q));
}

/// Jones matrix of a half-wave plate at angle theta.
template <typename Real>
Coin<Real> half_wave_plate(Real theta) {
  const Real c2 = std::cos(2 * theta);
  const Real s2 = std::sin(2 * theta);
  return make_coin<Real>(c2, s2, s2, -c2);
}

template <typename Real>
Coin<Real> hadamard() {
  const Real h = Real(1) / std::sqrt(Real(2));
  return make_coin<Real>(h, h, h, -h);
}

template <typename Real>
Complex<Real> determinant(const Coin<Real>& u) {
  return u.determinant();
}

/// The parametrization U = [u conj(alpha), u conj(beta); v beta, -v alpha]
/// with |alpha|^2 + |beta|^2 = |u| = |v| = 1.
template <typename Real>
struct BetaDecomposition {
  Real beta_sq = 0;
  Complex<Real> alpha;
  Complex<Real> beta;
  Complex<Real> u;
  Complex<Real> v;

  Matrix2c<Real> reassemble() const {
    Matrix2c<Real> m;
    m << u * std::conj(alpha), u * std::conj(beta), v * beta, -v * alpha;
    return m;
  }
};

/// Phase convention: alpha = |d| is real and non-negative whenever d != 0.
/// For d == 0 (a full reflector) alpha = 0 and beta = |b|.
template <typename Real>
BetaDecomposition<Real> beta_decompose(const Coin<Real>& coin) {
  using C = Complex<Real>;
  constexpr Real kVanishing = Real(1e-14);
  BetaDecomposition<Real> out;
  const Real abs_d = std::abs(coin.d());
  if (abs_d <= kVanishing) {
    out.alpha = C(0);
    out.beta = C(std::abs(coin.b()));
    out.u = coin.b() / std::abs(coin.b());
    out.v = coin.c() / std::abs(coin.c());
  } else {
    out.alpha = C(abs_d);
    out.v = -coin.d() / abs_d;
    out.u = coin.a() / abs_d;
    out.beta = coin.c() / out.v;
  }
  out.beta_sq = std::norm(out.beta);
  return out;
}

}  // namespace qrtw
