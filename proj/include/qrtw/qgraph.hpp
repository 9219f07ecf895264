#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "qrtw/coin.hpp"
#include "qrtw/lattice.hpp"
#include "qrtw/profile.hpp"
#include "qrtw/scattering.hpp"

// Line graph with delta potentials of strength alpha at vertices 0 and m,
// spacing s, and its correspondence with the double-barrier walk.
namespace qrtw {

inline constexpr double kMinWaveNumber = 1e-6;

template <typename Real>
struct GraphParams {
  Real alpha = 0;
  Real s = 1;
  int m = 1;
  Real k = 1;

  void validate() const {
    if (!(k >= Real(kMinWaveNumber))) {
      std::ostringstream msg;
      msg << "wave number must be >= " << kMinWaveNumber << ", got " << k;
      throw Error(ErrorKind::InvalidWaveNumber, msg.str());
    }
    if (!(alpha >= 0) || !(s > 0) || m < 1) {
      throw Error(ErrorKind::InvalidArgument, "graph needs alpha >= 0, s > 0, m >= 1");
    }
  }
};

template <typename Real>
struct SpectrumSample {
  Real k;
  Real T;
};

/// Coin of a vertex carrying a delta potential alpha_j:
/// a = d = 2e^{iks}/(2 + i alpha_j/k), b = c = e^{iks}(2/(2 + i alpha_j/k) - 1).
template <typename Real>
Coin<Real> vertex_coin(Real alpha_j, Real k, Real s) {
  if (!(k > 0)) throw Error(ErrorKind::InvalidWaveNumber, "wave number must be positive");
  using C = Complex<Real>;
  const C phase = std::polar(Real(1), k * s);
  const C frac = Real(2) / C(2, alpha_j / k);
  return make_coin<Real>(phase * frac, phase * (frac - Real(1)), phase * (frac - Real(1)),
                         phase * frac);
}

template <typename Real>
TunnelingConfig<Real> to_tunneling_config(const GraphParams<Real>& gp) {
  gp.validate();
  TunnelingConfig<Real> cfg;
  cfg.p = gp.k * gp.s;
  cfg.q = gp.k * gp.s;
  cfg.barrier = vertex_coin(gp.alpha, gp.k, gp.s);
  cfg.m = gp.m;
  cfg.delta = 0;
  return cfg;
}

/// Direct evaluation of the delta-potential double-barrier transmission
///   T = ((1 - g^2/(4+g^2)) / |1 + e^{2iksm} (2-ig)/(2+ig) g^2/(4+g^2)|)^2,
/// g = alpha/k.
template <typename Real>
Real transmission_at_k(const GraphParams<Real>& gp) {
  gp.validate();
  using C = Complex<Real>;
  const Real g = gp.alpha / gp.k;
  const Real refl = g * g / (4 + g * g);
  const C ratio = C(2, -g) / C(2, g);
  const C denom = Real(1) + std::polar(Real(1), 2 * gp.k * gp.s * Real(gp.m)) * ratio * refl;
  const Real amp = (1 - refl) / std::abs(denom);
  return amp * amp;
}

/// Uniform k grid, ascending. Grid points are independent and are split over
/// `threads` workers (0: hardware concurrency); the output order does not
/// depend on the thread count.
template <typename Real>
std::vector<SpectrumSample<Real>> spectrum_scan(Real alpha, Real s, int m, Real k_min,
                                                Real k_max, int n_points, unsigned threads = 1) {
  if (!(k_min > 0) || !(k_max > k_min) || n_points < 2) {
    throw Error(ErrorKind::InvalidArgument, "spectrum needs 0 < k_min < k_max and n_points >= 2");
  }
  std::vector<SpectrumSample<Real>> out(static_cast<size_t>(n_points));
  const Real dk = (k_max - k_min) / Real(n_points - 1);
  auto fill = [&](size_t first, size_t last) {
    for (size_t i = first; i < last; ++i) {
      const Real k = i + 1 == out.size() ? k_max : k_min + dk * Real(i);
      out[i] = {k, transmission_at_k(GraphParams<Real>{alpha, s, m, k})};
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_points));
  if (threads <= 1) {
    fill(0, out.size());
    return out;
  }
  std::vector<std::thread> pool;
  const size_t chunk = (out.size() + threads - 1) / threads;
  for (size_t first = 0; first < out.size(); first += chunk) {
    pool.emplace_back(fill, first, std::min(out.size(), first + chunk));
  }
  for (auto& t : pool) t.join();
  return out;
}

/// Unwrapped perfect-transmission phase 2ksm - 2 arctan(alpha/(2k)).
/// Strictly increasing in k; perfect transmission where it equals pi mod 2pi.
template <typename Real>
Real resonance_phase(Real alpha, Real s, int m, Real k) {
  return 2 * k * s * Real(m) - 2 * std::atan(alpha / (2 * k));
}

template <typename Real>
struct ResonanceSet {
  std::vector<Real> roots;
  /// alpha == 0: the barrier is transparent at every k.
  bool all_resonant = false;
};

/// Perfect-transmission wave numbers in [k_min, k_max], ascending.
///
/// The unwrapped phase is scanned on a 10^4-point grid; each crossing of a
/// level pi + 2 pi j is refined by bisection until the wrapped residual is
/// below 1e-12 or the bracket collapses to adjacent doubles.
template <typename Real>
ResonanceSet<Real> find_resonances(Real alpha, Real s, int m, Real k_min, Real k_max) {
  const Real lo_k = std::max(k_min, Real(kMinWaveNumber));
  if (!(k_max > lo_k) || !(s > 0) || m < 1 || !(alpha >= 0)) {
    throw Error(ErrorKind::InvalidArgument, "invalid resonance bracket");
  }
  ResonanceSet<Real> out;
  if (alpha == 0) {
    out.all_resonant = true;
    return out;
  }
  constexpr Real pi = std::numbers::pi_v<Real>;
  constexpr int kGrid = 10'000;
  auto level_index = [&](Real phase) { return std::floor((phase - pi) / (2 * pi)); };
  Real prev_k = lo_k;
  Real prev_level = level_index(resonance_phase(alpha, s, m, prev_k));
  for (int i = 1; i <= kGrid; ++i) {
    const Real k = i == kGrid ? k_max : lo_k + (k_max - lo_k) * Real(i) / Real(kGrid);
    const Real level = level_index(resonance_phase(alpha, s, m, k));
    for (Real j = prev_level + 1; j <= level; j += 1) {
      const Real target = pi + 2 * pi * j;
      Real a = prev_k, b = k;
      Real mid = a;
      for (int it = 0; it < 200; ++it) {
        mid = a + (b - a) / 2;
        const Real f = resonance_phase(alpha, s, m, mid) - target;
        if (std::abs(f) < Real(1e-13) || !(a < mid && mid < b)) break;
        (f < 0 ? a : b) = mid;
      }
      out.roots.push_back(mid);
    }
    prev_k = k;
    prev_level = level;
  }
  return out;
}

/// Wrapped residual of the perfect-transmission condition,
/// |e^{2iksm}(2 - i alpha/k)/(2 + i alpha/k) + 1|.
template <typename Real>
Real perfect_transmission_residual(Real alpha, Real s, int m, Real k) {
  using C = Complex<Real>;
  const Real g = alpha / k;
  return std::abs(std::polar(Real(1), 2 * k * s * Real(m)) * C(2, -g) / C(2, g) + Real(1));
}

/// Directed edge from vertex `origin` to origin + direction (direction = +-1).
struct Edge {
  int origin = 0;
  int direction = 1;

  int terminal() const { return origin + direction; }
  Edge reversed() const { return {terminal(), -direction}; }
};

/// phi(a; x) = gamma_a e^{ikx} + gamma_abar e^{ik(s-x)}, x measured from o(a).
template <typename Real>
struct EdgeWave {
  Complex<Real> gamma_a;
  Complex<Real> gamma_abar;
  Real k = 1;
  Real s = 1;

  Complex<Real> operator()(Real x) const {
    return gamma_a * std::polar(Real(1), k * x) + gamma_abar * std::polar(Real(1), k * (s - x));
  }
};

/// Directed-edge coefficients from a stationary walk profile: the walker at
/// vertex j holds (gamma_{(j+1 -> j)}, gamma_{(j-1 -> j)}) as (psi^L, psi^R).
template <typename Real>
Complex<Real> edge_coefficient(const AmplitudeProfile<Real>& profile, Edge a) {
  const int t = a.terminal();
  const Window need{std::min(a.origin, t), std::max(a.origin, t)};
  if (!profile.window().contains(need)) {
    std::ostringstream msg;
    msg << "edge " << a.origin << " -> " << t << " outside the profile window";
    throw Error(ErrorKind::EdgeOutOfWindow, msg.str());
  }
  return a.direction < 0 ? profile.left(t) : profile.right(t);
}

template <typename Real>
EdgeWave<Real> edge_wave(const AmplitudeProfile<Real>& profile, const GraphParams<Real>& gp,
                         Edge a) {
  gp.validate();
  if (a.direction != 1 && a.direction != -1) {
    throw Error(ErrorKind::InvalidArgument, "edge direction must be +1 or -1");
  }
  return {edge_coefficient(profile, a), edge_coefficient(profile, a.reversed()), gp.k, gp.s};
}

template <typename Real>
Complex<Real> edge_wavefunction(const AmplitudeProfile<Real>& profile, const GraphParams<Real>& gp,
                                Edge a, Real x) {
  if (!(x >= 0 && x <= gp.s)) {
    throw Error(ErrorKind::InvalidArgument, "edge coordinate must lie in [0, s]");
  }
  return edge_wave(profile, gp, a)(x);
}

}  // namespace qrtw
