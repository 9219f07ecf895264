#pragma once

#include <map>
#include <sstream>

#include <Eigen/Core>

#include "qrtw/coin.hpp"
#include "qrtw/error.hpp"

namespace qrtw {

/// Closed integer interval [lo, hi].
struct Window {
  int lo = 0;
  int hi = 0;

  int size() const { return hi - lo + 1; }
  bool contains(int x) const { return x >= lo && x <= hi; }
  bool contains(const Window& w) const { return w.lo >= lo && w.hi <= hi; }
  bool operator==(const Window&) const = default;
};

/// Chirality pairs (psi^L, psi^R) over a finite window. Column j holds
/// position window.lo + j; row 0 is L, row 1 is R.
template <typename Real>
class AmplitudeProfile {
 public:
  using Scalar = Complex<Real>;
  using Storage = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

  AmplitudeProfile() = default;
  explicit AmplitudeProfile(Window window)
      : window_(window), psi_(Storage::Zero(2, window.size())) {
    if (window.size() < 1) {
      throw Error(ErrorKind::InvalidArgument, "empty profile window");
    }
  }

  const Window& window() const { return window_; }
  int size() const { return window_.size(); }

  Scalar& left(int x) { return psi_(0, index(x)); }
  Scalar& right(int x) { return psi_(1, index(x)); }
  const Scalar& left(int x) const { return psi_(0, index(x)); }
  const Scalar& right(int x) const { return psi_(1, index(x)); }

  const Storage& amplitudes() const { return psi_; }
  Storage& amplitudes() { return psi_; }

  auto at(int x) const { return psi_.col(index(x)); }

 private:
  Eigen::Index index(int x) const {
    if (!window_.contains(x)) {
      std::ostringstream msg;
      msg << "position " << x << " outside [" << window_.lo << ", " << window_.hi << "]";
      throw Error(ErrorKind::InvalidArgument, msg.str());
    }
    return x - window_.lo;
  }

  Window window_;
  Storage psi_;
};

/// Pointwise |psi^L|^2 + |psi^R|^2.
template <typename Real>
std::map<int, Real> stationary_measure(const AmplitudeProfile<Real>& profile) {
  std::map<int, Real> mu;
  const auto& psi = profile.amplitudes();
  for (int j = 0; j < profile.size(); ++j) {
    mu.emplace(profile.window().lo + j, psi.col(j).squaredNorm());
  }
  return mu;
}

/// Sup-norm distance over the positions of `region`.
template <typename Real>
Real sup_distance(const AmplitudeProfile<Real>& a, const AmplitudeProfile<Real>& b,
                  Window region) {
  Real worst = 0;
  for (int x = region.lo; x <= region.hi; ++x) {
    worst = std::max(worst, std::abs(a.left(x) - b.left(x)));
    worst = std::max(worst, std::abs(a.right(x) - b.right(x)));
  }
  return worst;
}

}  // namespace qrtw
