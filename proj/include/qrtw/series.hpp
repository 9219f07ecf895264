#pragma once

#include <algorithm>
#include <cmath>

#include "qrtw/scattering.hpp"

namespace qrtw {

/// Round-trip expansion of the transmitted amplitude Psi^R(m+1):
///   sum_k d e^{i(q-delta)(m-1)} e^{-2i delta} [bc G]^k d
/// where G is the round-trip phase and each k counts k returns between the
/// barriers.
template <typename Real>
struct SeriesResult {
  Complex<Real> partial_sum;
  /// Number of terms summed (K + 1 for a request of K).
  long terms_used = 0;
  /// |first omitted term| / (1 - |ratio|)
  Real remainder_bound = 0;
};

inline constexpr long kMaxSeriesTerms = 1'000'000;

namespace detail {

template <typename Real>
void require_convergent(const TunnelingConfig<Real>& cfg) {
  cfg.validate();
  if (std::abs(cfg.barrier.b() * cfg.barrier.c()) >= Real(1)) {
    throw Error(ErrorKind::DivergentSeries, "|bc| >= 1: every walker is reflected");
  }
}

template <typename Real>
Complex<Real> series_first_term(const TunnelingConfig<Real>& cfg) {
  const auto d = cfg.barrier.d();
  return d * d * cis<Real>((cfg.q - cfg.delta) * Real(cfg.m - 1) - 2 * cfg.delta);
}

template <typename Real>
Complex<Real> series_ratio(const TunnelingConfig<Real>& cfg) {
  // Left traversal of the cavity, reflection at 0, right traversal,
  // reflection at m; every coin application costs one e^{-i delta}.
  const Real inner = Real(cfg.m - 1);
  const auto leftward = cis<Real>((cfg.p - cfg.delta) * inner - cfg.delta);
  const auto rightward = cis<Real>((cfg.q - cfg.delta) * inner - cfg.delta);
  return cfg.barrier.b() * leftward * cfg.barrier.c() * rightward;
}

}  // namespace detail

/// Partial sum of the first K+1 round-trip terms (K capped at 10^6).
template <typename Real>
SeriesResult<Real> t_series(const TunnelingConfig<Real>& cfg, long k_max) {
  detail::require_convergent(cfg);
  if (k_max < 0) throw Error(ErrorKind::InvalidArgument, "term count must be non-negative");
  k_max = std::min(k_max, kMaxSeriesTerms);
  const Complex<Real> ratio = detail::series_ratio(cfg);
  Complex<Real> term = detail::series_first_term(cfg);
  Complex<Real> sum{0};
  for (long k = 0; k <= k_max; ++k) {
    sum += term;
    term *= ratio;
  }
  SeriesResult<Real> out;
  out.partial_sum = sum;
  out.terms_used = k_max + 1;
  out.remainder_bound = std::abs(term) / (Real(1) - std::abs(ratio));
  return out;
}

/// Geometric limit of the round-trip series, i.e. Psi^R(m+1).
template <typename Real>
Complex<Real> t_series_limit(const TunnelingConfig<Real>& cfg) {
  detail::require_convergent(cfg);
  return detail::series_first_term(cfg) / (Real(1) - detail::series_ratio(cfg));
}

/// Converts Psi^R(m+1) into the transmission amplitude t.
template <typename Real>
Complex<Real> transmitted_amplitude(Complex<Real> psi_m_plus_1, const TunnelingConfig<Real>& cfg) {
  return psi_m_plus_1 * detail::cis<Real>(-(cfg.q - cfg.delta) * Real(cfg.m + 1));
}

}  // namespace qrtw
