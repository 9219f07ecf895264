#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "qrtw/coin.hpp"
#include "qrtw/lattice.hpp"
#include "qrtw/profile.hpp"

namespace qrtw {

enum class Method { ClosedForm, LinearSystem, SeriesLimit };
enum class Injection { Left, Right };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "ClosedForm";
    case Method::LinearSystem: return "LinearSystem";
    case Method::SeriesLimit: return "SeriesLimit";
  }
  return "?";
}

inline const char* to_string(Injection i) { return i == Injection::Left ? "Left" : "Right"; }

/// Scattering data of a stationary state.
///
/// Left injection (unit right-mover entering the defect region, Phi^R(0) = 1):
///   Phi^R(x) = t e^{i(q-delta)x} to the right of the defects,
///   Phi^L(x_lo - 1) = r e^{-ip} e^{-i delta}, so that for delta = 0 the
///   reflected wave is r e^{-ip(x+2)}.
///   r_tilde = Phi^L(x_lo), t_tilde = Phi^R(x_hi).
/// Right injection mirrors this with Phi^L(x_hi) = 1; t is then the
/// left-going transmitted amplitude and r the right-going reflected one,
/// both referenced to the continuation of the incoming wave.
template <typename Real>
struct StationarySolution {
  using Scalar = Complex<Real>;
  Scalar r;
  Scalar t;
  Scalar r_tilde;
  Scalar t_tilde;
  Real T = 0;
  Real R = 0;
  Method method = Method::ClosedForm;
  Injection injection = Injection::Left;
  Real delta = 0;
  /// a == 0 or d == 0: the quotient definitions (r e^{-ip} - b)/a and
  /// t e^{iq(m+1)}/d are singular. The reported tildes come from the direct
  /// solution of the interior equations, which stays well posed.
  bool tilde_undefined = false;
};

namespace detail {

template <typename Real>
Complex<Real> cis(Real phase) {
  return std::polar(Real(1), phase);
}

template <typename Real>
constexpr Real kDegenerateDenominator = Real(1e-12);

template <typename Real>
constexpr Real kVanishingEntry = Real(1e-14);

/// Round-trip phase factor det(U_f)^{m-1} e^{-2 i m delta}.
template <typename Real>
Complex<Real> round_trip_phase(const TunnelingConfig<Real>& cfg) {
  return cis<Real>((cfg.p + cfg.q) * Real(cfg.m - 1) - Real(2 * cfg.m) * cfg.delta);
}

}  // namespace detail

/// Closed-form double-barrier solution with eigenphase cfg.delta.
///
/// With G = det(U_f)^{m-1} e^{-2im delta} and D = 1 - bcG:
///   t = d^2 e^{-2iq} / D,  r = b e^{ip} (1 + det(U_b) G) / D,
///   r_tilde = b d G / D,   t_tilde = d e^{i(q(m-1) - m delta)} / D.
/// For delta = 0 these are the classical double-barrier formulas.
template <typename Real>
StationarySolution<Real> solve_closed_form(const TunnelingConfig<Real>& cfg) {
  using detail::cis;
  cfg.validate();
  const auto& u = cfg.barrier;
  const Complex<Real> g = detail::round_trip_phase(cfg);
  const Complex<Real> denom = Real(1) - u.b() * u.c() * g;
  if (std::abs(denom) < detail::kDegenerateDenominator<Real>) {
    std::ostringstream msg;
    msg << "|1 - bc G| = " << std::abs(denom) << " (perfect-reflector resonance)";
    throw Error(ErrorKind::DegenerateResonance, msg.str());
  }
  StationarySolution<Real> sol;
  sol.t = u.d() * u.d() * cis<Real>(-2 * cfg.q) / denom;
  sol.r = u.b() * cis<Real>(cfg.p) * (Real(1) + u.determinant() * g) / denom;
  sol.r_tilde = u.b() * u.d() * g / denom;
  sol.t_tilde = u.d() * cis<Real>(cfg.q * Real(cfg.m - 1) - Real(cfg.m) * cfg.delta) / denom;
  sol.T = std::norm(sol.t);
  sol.R = std::norm(sol.r);
  sol.method = Method::ClosedForm;
  sol.injection = Injection::Left;
  sol.delta = cfg.delta;
  sol.tilde_undefined = std::abs(u.a()) < detail::kVanishingEntry<Real> ||
                        std::abs(u.d()) < detail::kVanishingEntry<Real>;
  return sol;
}

/// Piecewise stationary state of a left-injected double-barrier solution.
template <typename Real>
AmplitudeProfile<Real> build_profile(const StationarySolution<Real>& sol,
                                     const TunnelingConfig<Real>& cfg, Window window) {
  using detail::cis;
  cfg.validate();
  if (!window.contains(Window{-1, cfg.m + 1})) {
    std::ostringstream msg;
    msg << "window [" << window.lo << ", " << window.hi << "] must contain [-1, " << cfg.m + 1
        << "]";
    throw Error(ErrorKind::WindowTooSmall, msg.str());
  }
  if (sol.injection != Injection::Left) {
    throw Error(ErrorKind::InvalidArgument, "build_profile expects a left-injected solution");
  }
  const Real p = cfg.p, q = cfg.q, delta = cfg.delta;
  const int m = cfg.m;
  AmplitudeProfile<Real> out(window);
  for (int x = window.lo; x <= window.hi; ++x) {
    const Real xr = Real(x);
    if (x <= -1) {
      out.left(x) = sol.r * cis<Real>(-p * (xr + 2) + delta * xr);
      out.right(x) = cis<Real>((q - delta) * xr);
    } else if (x == 0) {
      out.left(x) = sol.r_tilde;
      out.right(x) = Real(1);
    } else if (x < m) {
      out.left(x) = sol.r_tilde * cis<Real>(-(p - delta) * xr);
      out.right(x) = sol.t_tilde * cis<Real>((q - delta) * Real(x - m));
    } else if (x == m) {
      out.left(x) = Real(0);
      out.right(x) = sol.t_tilde;
    } else {
      out.left(x) = Real(0);
      out.right(x) = sol.t * cis<Real>((q - delta) * xr);
    }
  }
  return out;
}

template <typename Real>
struct GeneralSolution {
  StationarySolution<Real> solution;
  AmplitudeProfile<Real> profile;
  /// Reciprocal condition estimate of the boundary-value system.
  Real rcond = 0;
};

/// Stationary scattering state of an arbitrary finite defect map, obtained
/// from the boundary-value problem U Phi = e^{i delta} Phi on the support of
/// the defects plus one free site on each side.
///
/// `window`, when wider than that minimal interval, is filled by free
/// propagation of the plane waves outside the defects.
template <typename Real>
GeneralSolution<Real> solve_general(const std::map<int, Coin<Real>>& coins, Real delta,
                                    Injection injection, Real p, Real q,
                                    std::optional<Window> window = std::nullopt) {
  using detail::cis;
  using C = Complex<Real>;
  const CoinField<Real> field(p, q, coins);
  const Window support = field.support();
  const Window span{support.lo - 1, support.hi + 1};
  const int sites = span.size();
  const int n = 2 * sites;
  const C lambda = cis<Real>(delta);
  auto idx = [&](int x, int chirality) { return 2 * (x - span.lo) + chirality; };

  Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> a =
      Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  Eigen::Matrix<C, Eigen::Dynamic, 1> rhs = Eigen::Matrix<C, Eigen::Dynamic, 1>::Zero(n);
  int row = 0;
  for (int x = span.lo; x < span.hi; ++x, ++row) {
    const auto& u = field.at(x + 1);
    a(row, idx(x, 0)) = lambda;
    a(row, idx(x + 1, 0)) = -u.a();
    a(row, idx(x + 1, 1)) = -u.b();
  }
  for (int x = span.lo + 1; x <= span.hi; ++x, ++row) {
    const auto& u = field.at(x - 1);
    a(row, idx(x, 1)) = lambda;
    a(row, idx(x - 1, 0)) = -u.c();
    a(row, idx(x - 1, 1)) = -u.d();
  }
  // Per-site phases of free plane waves in the eigenframe.
  const Real right_phase = q - delta;  // Phi^R(x+1) = e^{i right_phase} Phi^R(x)
  const Real left_phase = p - delta;   // Phi^L(x) = e^{i left_phase} Phi^L(x+1)
  a(row, idx(span.lo, 1)) = Real(1);
  rhs(row) = injection == Injection::Left ? cis<Real>(right_phase * Real(span.lo)) : C(0);
  ++row;
  a(row, idx(span.hi, 0)) = Real(1);
  rhs(row) = injection == Injection::Right ? cis<Real>(-left_phase) : C(0);

  Eigen::PartialPivLU<Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>> lu(a);
  // The 1-norm estimator can miss exact singularity; a vanishing pivot
  // relative to the largest one is treated the same way.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const Real rcond = std::min(lu.rcond(), pivots.minCoeff() / pivots.maxCoeff());
  if (!(rcond > Real(1e-13))) {
    std::ostringstream msg;
    msg << "boundary-value system is singular (condition estimate " << Real(1) / rcond << ")";
    throw Error(ErrorKind::SingularSystem, msg.str());
  }
  const Eigen::Matrix<C, Eigen::Dynamic, 1> phi = lu.solve(rhs);

  AmplitudeProfile<Real> core(span);
  for (int x = span.lo; x <= span.hi; ++x) {
    core.left(x) = phi(idx(x, 0));
    core.right(x) = phi(idx(x, 1));
  }

  StationarySolution<Real> sol;
  sol.method = Method::LinearSystem;
  sol.injection = injection;
  sol.delta = delta;
  if (injection == Injection::Left) {
    sol.t = core.right(span.hi) * cis<Real>(-right_phase * Real(span.hi));
    sol.r = core.left(span.lo) * cis<Real>(left_phase * Real(span.lo) + 2 * p);
    sol.r_tilde = core.left(support.lo);
    sol.t_tilde = core.right(support.hi);
  } else {
    sol.t = core.left(span.lo) * cis<Real>(-left_phase * Real(support.hi - span.lo));
    sol.r = core.right(span.hi) * cis<Real>(-right_phase);
    sol.r_tilde = core.right(support.hi);
    sol.t_tilde = core.left(support.lo);
  }
  sol.T = std::norm(sol.t);
  sol.R = std::norm(sol.r);
  for (const auto& [x, u] : coins) {
    if (std::abs(u.a()) < detail::kVanishingEntry<Real> ||
        std::abs(u.d()) < detail::kVanishingEntry<Real>) {
      sol.tilde_undefined = true;
    }
  }

  const Window target = window.value_or(span);
  if (!target.contains(span)) {
    std::ostringstream msg;
    msg << "window must contain the defect support plus one site, [" << span.lo << ", "
        << span.hi << "]";
    throw Error(ErrorKind::WindowTooSmall, msg.str());
  }
  AmplitudeProfile<Real> profile(target);
  for (int x = target.lo; x <= target.hi; ++x) {
    if (span.contains(x)) {
      profile.left(x) = core.left(x);
      profile.right(x) = core.right(x);
    } else if (x < span.lo) {
      const Real steps = Real(span.lo - x);
      profile.left(x) = core.left(span.lo) * cis<Real>(left_phase * steps);
      profile.right(x) = core.right(span.lo) * cis<Real>(-right_phase * steps);
    } else {
      const Real steps = Real(x - span.hi);
      profile.left(x) = core.left(span.hi) * cis<Real>(-left_phase * steps);
      profile.right(x) = core.right(span.hi) * cis<Real>(right_phase * steps);
    }
  }
  return {sol, std::move(profile), rcond};
}

/// Double-barrier convenience overload.
template <typename Real>
GeneralSolution<Real> solve_general(const TunnelingConfig<Real>& cfg, Injection injection,
                                    std::optional<Window> window = std::nullopt) {
  cfg.validate();
  std::map<int, Coin<Real>> coins{{0, cfg.barrier}, {cfg.m, cfg.barrier}};
  return solve_general<Real>(coins, cfg.delta, injection, cfg.p, cfg.q, window);
}

/// |det(U_b) G + 1| with G the round-trip phase; zero exactly at perfect
/// transmission.
template <typename Real>
Real resonance_residual(const TunnelingConfig<Real>& cfg) {
  cfg.validate();
  const Real bc = std::abs(cfg.barrier.b() * cfg.barrier.c());
  if (bc < Real(1e-14)) {
    throw Error(ErrorKind::TrivialBarrier, "bc = 0: reflectionless barrier");
  }
  if (bc >= Real(1) - Real(1e-14)) {
    throw Error(ErrorKind::FullReflector, "|bc| = 1: barrier reflects completely");
  }
  return std::abs(cfg.barrier.determinant() * detail::round_trip_phase(cfg) + Real(1));
}

/// Inflow and outflow of a profile through [x_lo, x_hi], read one site
/// outside the interval on each side.
template <typename Real>
struct Flux {
  Real inflow = 0;
  Real outflow = 0;
};

template <typename Real>
Flux<Real> flux_balance(const AmplitudeProfile<Real>& profile, Window interval) {
  const Window padded{interval.lo - 1, interval.hi + 1};
  if (interval.size() < 1 || !profile.window().contains(padded)) {
    std::ostringstream msg;
    msg << "interval [" << interval.lo << ", " << interval.hi
        << "] needs one site of margin inside the profile window";
    throw Error(ErrorKind::MarginViolation, msg.str());
  }
  Flux<Real> f;
  f.inflow = std::norm(profile.right(padded.lo)) + std::norm(profile.left(padded.hi));
  f.outflow = std::norm(profile.left(padded.lo)) + std::norm(profile.right(padded.hi));
  return f;
}

/// |t| = (1 - |beta|^2) / |1 - e^{i theta} |beta|^2| with
/// e^{i theta} = -det(U_f)^{m-1} det(U_b).
template <typename Real>
Real t_magnitude_via_beta(const TunnelingConfig<Real>& cfg) {
  cfg.validate();
  if (cfg.delta != Real(0)) {
    throw Error(ErrorKind::InvalidArgument, "beta route is defined for delta = 0 only");
  }
  const auto dec = beta_decompose(cfg.barrier);
  const Complex<Real> e_theta = -detail::round_trip_phase(cfg) * cfg.barrier.determinant();
  const Real denom = std::abs(Real(1) - e_theta * dec.beta_sq);
  if (denom < detail::kDegenerateDenominator<Real>) {
    throw Error(ErrorKind::FullReflector, "|1 - e^{i theta}|beta|^2| vanishes");
  }
  return (Real(1) - dec.beta_sq) / denom;
}

}  // namespace qrtw
