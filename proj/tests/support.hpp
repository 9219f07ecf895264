#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <vector>
#include <numbers>
#include <random>

#include "qrtw/qrtw.hpp"

namespace qrtw::testing {

using C = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

/// e^{i g} [e^{i f1} cos t, e^{i f2} sin t; -e^{-i f2} sin t, e^{-i f1} cos t]
inline Coin<double> unitary_from_angles(double g, double f1, double f2, double t) {
  const C e = std::polar(1.0, g);
  return make_coin<double>(e * std::polar(std::cos(t), f1), e * std::polar(std::sin(t), f2),
                           -e * std::polar(std::sin(t), -f2), e * std::polar(std::cos(t), -f1));
}

class Generator {
 public:
  explicit Generator(unsigned seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double phase() { return uniform(0.0, 2 * kPi); }

  Coin<double> unitary() { return unitary_from_angles(phase(), phase(), phase(), uniform(0, kPi / 2)); }

  /// Random unitary with |bc| = sin^2(t) inside [bc_lo, bc_hi].
  Coin<double> barrier(double bc_lo, double bc_hi) {
    const double bc = uniform(bc_lo, bc_hi);
    return unitary_from_angles(phase(), phase(), phase(), std::asin(std::sqrt(bc)));
  }

  TunnelingConfig<double> config(double bc_lo, double bc_hi, int m_max, bool with_delta) {
    TunnelingConfig<double> cfg;
    cfg.p = phase();
    cfg.q = phase();
    cfg.barrier = barrier(bc_lo, bc_hi);
    cfg.m = integer(1, m_max);
    cfg.delta = with_delta ? phase() : 0.0;
    return cfg;
  }

 private:
  std::mt19937_64 rng_;
};

inline TunnelingConfig<double> hadamard_cavity_config(int m = 3) {
  return {0.0, 0.0, hadamard<double>(), m, 0.0};
}

inline TunnelingConfig<double> half_pi_config(double delta = 0.0) {
  return {kPi / 2, kPi / 2, hadamard<double>(), 2, delta};
}

}  // namespace qrtw::testing

namespace qrtw::testing {

/// Stand-alone time stepper used as an oracle: plain vectors, no shared code
/// with the evolution module. Injects e^{iqx} from the left (Left) or a unit
/// left-mover normalised to 1 at `right_ref` (Right) and returns the state
/// after `steps` steps (delta = 0).
struct BruteForceWalk {
  std::map<int, Coin<double>> coins;
  double p = 0;
  double q = 0;
  int lo = -60;
  int hi = 60;

  struct Result {
    std::vector<C> left;
    std::vector<C> right;
    int lo;
    C l(int x) const { return left[x - lo]; }
    C r(int x) const { return right[x - lo]; }
  };

  Result run(Injection injection, int steps, int right_ref = 0) const {
    const int n = hi - lo + 1;
    std::vector<C> l(n), r(n);
    const Coin<double> f = free_coin(p, q);
    auto coin = [&](int x) -> const Coin<double>& {
      auto it = coins.find(x);
      return it == coins.end() ? f : it->second;
    };
    // Left-mover plane wave with value 1 at right_ref: psi^L(x) = e^{ip(right_ref - x)}.
    auto left_wave = [&](int x) { return std::polar(1.0, p * (right_ref - x)); };
    if (injection == Injection::Left) {
      for (int x = lo; x < coins.begin()->first; ++x) r[x - lo] = std::polar(1.0, q * x);
    } else {
      for (int x = coins.rbegin()->first + 1; x <= hi; ++x) l[x - lo] = left_wave(x);
    }
    for (int s = 1; s <= steps; ++s) {
      std::vector<C> nl(n), nr(n);
      for (int i = 0; i + 1 < n; ++i) {
        const auto& u = coin(lo + i + 1);
        nl[i] = u.a() * l[i + 1] + u.b() * r[i + 1];
      }
      for (int i = 1; i < n; ++i) {
        const auto& u = coin(lo + i - 1);
        nr[i] = u.c() * l[i - 1] + u.d() * r[i - 1];
      }
      nr[0] = injection == Injection::Left ? std::polar(1.0, q * lo) : C(0);
      nl[n - 1] = injection == Injection::Right ? left_wave(hi) : C(0);
      l.swap(nl);
      r.swap(nr);
    }
    return {l, r, lo};
  }
};

}  // namespace qrtw::testing
