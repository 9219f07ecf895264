#pragma once

#include <map>
#include <sstream>

#include "qrtw/coin.hpp"
#include "qrtw/profile.hpp"

namespace qrtw {

/// Double-barrier walk: barrier coin at 0 and m, free coin elsewhere.
/// `delta` is the eigenphase of the stationary state, U Phi = e^{i delta} Phi.
template <typename Real>
struct TunnelingConfig {
  Real p = 0;
  Real q = 0;
  Coin<Real> barrier;
  int m = 1;
  Real delta = 0;

  Coin<Real> free() const { return free_coin<Real>(p, q); }

  void validate() const {
    if (m < 1) {
      std::ostringstream msg;
      msg << "barrier separation m must be >= 1, got " << m;
      throw Error(ErrorKind::InvalidArgument, msg.str());
    }
  }
};

/// Position-dependent coins: explicit defects over a finite set of sites,
/// the free coin diag(e^{ip}, e^{iq}) everywhere else.
template <typename Real>
class CoinField {
 public:
  CoinField(Real p, Real q, std::map<int, Coin<Real>> defects = {})
      : p_(p), q_(q), free_(free_coin<Real>(p, q)), defects_(std::move(defects)) {}

  explicit CoinField(const TunnelingConfig<Real>& cfg) : CoinField(cfg.p, cfg.q) {
    cfg.validate();
    defects_.emplace(0, cfg.barrier);
    defects_.emplace(cfg.m, cfg.barrier);
  }

  const Coin<Real>& at(int x) const {
    auto it = defects_.find(x);
    return it == defects_.end() ? free_ : it->second;
  }

  Real p() const { return p_; }
  Real q() const { return q_; }
  const Coin<Real>& free() const { return free_; }
  const std::map<int, Coin<Real>>& defects() const { return defects_; }

  /// Smallest interval holding every defect; [0, 0] when there are none.
  Window support() const {
    if (defects_.empty()) return {0, 0};
    return {defects_.begin()->first, defects_.rbegin()->first};
  }

 private:
  Real p_;
  Real q_;
  Coin<Real> free_;
  std::map<int, Coin<Real>> defects_;
};

/// One application of the walk on the window of `in`:
///   out^L(x) = a_{x+1} in^L(x+1) + b_{x+1} in^R(x+1)
///   out^R(x) = c_{x-1} in^L(x-1) + d_{x-1} in^R(x-1).
/// Sites whose source lies outside the window take the supplied edge data:
/// out^R(lo) = incoming_right, out^L(hi) = incoming_left.
template <typename Real>
AmplitudeProfile<Real> walk_step(const CoinField<Real>& field, const AmplitudeProfile<Real>& in,
                                 Complex<Real> incoming_right, Complex<Real> incoming_left) {
  const Window w = in.window();
  AmplitudeProfile<Real> out(w);
  for (int x = w.lo; x < w.hi; ++x) {
    const auto& u = field.at(x + 1);
    out.left(x) = u.a() * in.left(x + 1) + u.b() * in.right(x + 1);
  }
  for (int x = w.lo + 1; x <= w.hi; ++x) {
    const auto& u = field.at(x - 1);
    out.right(x) = u.c() * in.left(x - 1) + u.d() * in.right(x - 1);
  }
  out.right(w.lo) = incoming_right;
  out.left(w.hi) = incoming_left;
  return out;
}

}  // namespace qrtw
