#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "qrtw/lattice.hpp"
#include "qrtw/profile.hpp"
#include "qrtw/scattering.hpp"

namespace qrtw {

/// Time-dependent walk on a finite window with exact plane-wave data on the
/// incoming channels: the right-mover entering at window.lo is the injected
/// wave e^{i(q-delta)x} e^{i delta n}, the left-mover entering at window.hi
/// is zero.
template <typename Real>
struct EvolutionState {
  TunnelingConfig<Real> cfg;
  CoinField<Real> field;
  long n = 0;
  AmplitudeProfile<Real> amplitudes;
  /// e^{i delta n}
  Complex<Real> injection_phase{1};
  /// Off for harness runs that evolve an arbitrary initial state with no
  /// inflow.
  bool inject = true;

  const Window& window() const { return amplitudes.window(); }

  /// Right-mover value fed in at window.lo at time `step`.
  Complex<Real> boundary_inflow(long step) const {
    if (!inject) return Real(0);
    const Real x = Real(window().lo);
    return std::polar(Real(1), (cfg.q - cfg.delta) * x + cfg.delta * Real(step));
  }
};

template <typename Real>
Window default_window(int m) {
  const int pad = 10 * m + 20;
  return {-pad, m + pad};
}

namespace detail {

template <typename Real>
void require_evolution_window(const TunnelingConfig<Real>& cfg, Window window) {
  if (!window.contains(Window{-2, cfg.m + 2})) {
    std::ostringstream msg;
    msg << "evolution window [" << window.lo << ", " << window.hi << "] must contain [-2, "
        << cfg.m + 2 << "]";
    throw Error(ErrorKind::WindowTooSmall, msg.str());
  }
}

}  // namespace detail

/// Plane wave e^{i(q-delta)x} on x < 0, empty elsewhere.
template <typename Real>
EvolutionState<Real> init_lattice(const TunnelingConfig<Real>& cfg, Window window) {
  cfg.validate();
  detail::require_evolution_window(cfg, window);
  EvolutionState<Real> s{cfg, CoinField<Real>(cfg), 0, AmplitudeProfile<Real>(window)};
  for (int x = window.lo; x < 0; ++x) {
    s.amplitudes.right(x) = std::polar(Real(1), (cfg.q - cfg.delta) * Real(x));
  }
  return s;
}

/// Start from an arbitrary profile, no inflow.
template <typename Real>
EvolutionState<Real> init_from_profile(const TunnelingConfig<Real>& cfg,
                                       AmplitudeProfile<Real> profile) {
  cfg.validate();
  detail::require_evolution_window(cfg, profile.window());
  EvolutionState<Real> s{cfg, CoinField<Real>(cfg), 0, std::move(profile)};
  s.inject = false;
  return s;
}

template <typename Real>
void advance(EvolutionState<Real>& s) {
  s.amplitudes = walk_step(s.field, s.amplitudes, s.boundary_inflow(s.n + 1), Complex<Real>(0));
  ++s.n;
  s.injection_phase = std::polar(Real(1), s.cfg.delta * Real(s.n));
}

template <typename Real>
EvolutionState<Real> step(EvolutionState<Real> s) {
  advance(s);
  return s;
}

template <typename Real>
struct ConvergenceReport {
  long steps = 0;
  Real residual = 0;
  /// Residual decay factor per round trip (2m steps) over the final blocks;
  /// zero when too few blocks were observed.
  Real rate = 0;
  bool converged = false;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, long steps, double residual)
      : Error(ErrorKind::NoConvergence, what), steps_(steps), residual_(residual) {}
  long steps() const { return steps_; }
  double residual() const { return residual_; }

 private:
  long steps_;
  double residual_;
};

template <typename Real>
struct ConvergedProfile {
  /// e^{-i delta n} Psi_n: directly comparable with the stationary state.
  AmplitudeProfile<Real> profile;
  ConvergenceReport<Real> report;
};

template <typename Real>
long default_max_steps(const TunnelingConfig<Real>& cfg) {
  const Real bc = std::abs(cfg.barrier.b() * cfg.barrier.c());
  return static_cast<long>(std::ceil(100.0 * (cfg.m + 1) / std::max<double>(1.0 - bc, 0.01)));
}

/// Phase-compensated sup-norm change sup_x |e^{-i delta} Psi_{n+1}(x) - Psi_n(x)|
/// over the window minus a two-site margin at each edge.
template <typename Real>
Real step_residual(const EvolutionState<Real>& before, const EvolutionState<Real>& after) {
  const Window w = before.window();
  const Complex<Real> undo = std::polar(Real(1), -before.cfg.delta);
  Real worst = 0;
  for (int x = w.lo + 2; x <= w.hi - 2; ++x) {
    worst = std::max(worst, std::abs(undo * after.amplitudes.left(x) - before.amplitudes.left(x)));
    worst = std::max(worst, std::abs(undo * after.amplitudes.right(x) - before.amplitudes.right(x)));
  }
  return worst;
}

template <typename Real>
ConvergedProfile<Real> run_to_convergence(EvolutionState<Real> state, Real tol, long max_steps,
                                          std::vector<Real>* history = nullptr,
                                          const std::function<void(const EvolutionState<Real>&)>&
                                              on_step = {}) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const long block = 2L * state.cfg.m;
  std::vector<Real> residuals;
  Real residual = 0;
  bool converged = false;
  while (state.n < max_steps) {
    EvolutionState<Real> next = step(state);
    residual = step_residual(state, next);
    residuals.push_back(residual);
    state = std::move(next);
    if (on_step) on_step(state);
    if (residual < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "residual " << residual << " after " << state.n << " steps";
    throw NoConvergenceError(msg.str(), state.n, static_cast<double>(residual));
  }

  ConvergenceReport<Real> report;
  report.steps = state.n;
  report.residual = residual;
  report.converged = true;
  // Block maxima over the last few round trips, skipping the final
  // (possibly partial) block the loop stopped in.
  const long full = static_cast<long>(residuals.size()) / block;
  constexpr long kSpan = 3;
  if (full >= kSpan + 2) {
    auto block_max = [&](long j) {
      const auto first = residuals.end() - (j + 1) * block;
      return *std::max_element(first, first + block);
    };
    const Real newest = block_max(1);
    const Real oldest = block_max(1 + kSpan);
    if (oldest > 0 && newest > 0) report.rate = std::pow(newest / oldest, Real(1) / kSpan);
  }
  if (history) *history = std::move(residuals);

  AmplitudeProfile<Real> out = state.amplitudes;
  out.amplitudes() *= std::polar(Real(1), -state.cfg.delta * Real(state.n));
  return {std::move(out), report};
}

/// Mass bookkeeping for one step: (mass' - mass) - (inflow - outflow), where
/// the inflow is the expected plane-wave data and the outflow is what the
/// coins at the two edge sites send out of the window.
template <typename Real>
Real norm_check(const EvolutionState<Real>& before, const EvolutionState<Real>& after) {
  const Window w = before.window();
  const auto& lo_coin = before.field.at(w.lo);
  const auto& hi_coin = before.field.at(w.hi);
  const auto& a = before.amplitudes;
  const Real out_left = std::norm(lo_coin.a() * a.left(w.lo) + lo_coin.b() * a.right(w.lo));
  const Real out_right = std::norm(hi_coin.c() * a.left(w.hi) + hi_coin.d() * a.right(w.hi));
  const Real in = std::norm(before.boundary_inflow(before.n + 1));
  const Real mass_before = before.amplitudes.amplitudes().squaredNorm();
  const Real mass_after = after.amplitudes.amplitudes().squaredNorm();
  return (mass_after - mass_before) - (in - out_left - out_right);
}

template <typename Real>
Real norm_check(const EvolutionState<Real>& state) {
  return norm_check(state, step(state));
}

}  // namespace qrtw
