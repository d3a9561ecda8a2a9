#pragma once

// Free-space dipole coupling: the full 3D tensor split into its two time
// orderings, and the reduced-dimensional scalar couplings used as baselines.
// Units: hbar = c = 1, lengths in any unit with p in the inverse unit.

#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>

#include "dipolecav/specfun.hpp"
#include "dipolecav/types.hpp"

namespace dipolecav {

template <typename Scalar>
struct FreeCoupling {
  Tensor3<Scalar> v_plus;   ///< virtual photon emitted by the donor
  Tensor3<Scalar> v_minus;  ///< virtual photon emitted by the acceptor
  Tensor3<Scalar> total;
};

/// Radial functions multiplying the transverse projector (lambda) and the
/// (1 - 3 rr) projector (xi) for one time ordering.
template <typename Scalar>
struct RadialFactors {
  Complex<Scalar> lambda;
  Complex<Scalar> xi;
};

/// lambda^{+-}(x) and xi^{+-}(x) at x = p r > 0.
///
/// Ci of a negative argument is taken on the lower side of the cut,
/// Ci(-x) = Ci(x) - i pi. With this choice the sum of both orderings is the
/// outgoing-wave coupling e^{ipr}, the same convention as the H^(1) cavity
/// expressions.
template <std::floating_point Scalar>
std::pair<RadialFactors<Scalar>, RadialFactors<Scalar>> radial_factors(Scalar x) {
  using C = Complex<Scalar>;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const auto [ci, si] = specfun::cisi_abs(x);
  const Scalar c = std::cos(x), s = std::sin(x);
  const Scalar si_m = -si - pi;  // si(-x)
  const C ci_m(ci, -pi);         // Ci(-x), lower side
  const Scalar x2 = x * x;

  RadialFactors<Scalar> plus{
      -x + x2 * (c * si_m + s * ci_m),
      -c * si_m - s * ci_m - x * (s * si_m - c * ci_m)};
  RadialFactors<Scalar> minus{
      C(x + x2 * (c * si - s * ci)),
      C(-c * si + s * ci - x * (s * si + c * ci))};
  return {plus, minus};
}

/// Free-space coupling tensor between an acceptor at r_A and a donor at r_D,
/// r = r_A - r_D. Requires 1e-6 <= p |r| <= 1e6.
template <std::floating_point Scalar>
FreeCoupling<Scalar> coupling_free3d(Scalar p, const Vector3<Scalar>& r, Scalar permittivity = 1) {
  using Mat = Eigen::Matrix<Scalar, 3, 3>;
  if (!(p > 0) || !(permittivity > 0)) throw DomainError("p and permittivity must be positive");
  const Scalar dist = r.norm();
  if (dist == 0) throw ZeroSeparation("free-space coupling at zero separation");
  const Scalar x = p * dist;
  if (!(x >= Scalar(1e-6) && x <= Scalar(1e6)))
    throw DomainError("p|r| outside the supported range [1e-6, 1e6]");

  const Vector3<Scalar> u = r / dist;
  const Mat uu = u * u.transpose();
  const Mat transverse = Mat::Identity() - uu;
  const Mat near = Mat::Identity() - 3 * uu;
  const Scalar pre = 1 / (4 * std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> *
                          permittivity * dist * dist * dist);

  const auto [plus, minus] = radial_factors(x);
  FreeCoupling<Scalar> out;
  out.v_plus = pre * (transverse.template cast<Complex<Scalar>>() * plus.lambda +
                      near.template cast<Complex<Scalar>>() * plus.xi);
  out.v_minus = pre * (transverse.template cast<Complex<Scalar>>() * minus.lambda +
                       near.template cast<Complex<Scalar>>() * minus.xi);
  out.total = out.v_plus + out.v_minus;
  return out;
}

/// Two-dimensional scalar coupling, normalised by the slab width `width`:
/// V_2D = -i p^2 H_0^(1)(pX) / (4 eps width).
template <std::floating_point Scalar>
Complex<Scalar> coupling_free2d(Scalar p, Scalar separation, Scalar width, Scalar permittivity = 1) {
  if (!(p > 0) || !(width > 0) || !(permittivity > 0))
    throw DomainError("p, width and permittivity must be positive");
  if (!(separation > 0)) throw ZeroSeparation("2D coupling requires X > 0");
  const Complex<Scalar> pre(0, -1 / (4 * permittivity * width));
  return pre * (p * p) * specfun::hankel1<Scalar>(0, p * separation);
}

/// One-dimensional scalar coupling for a wire of cross-section a x b:
/// V_1D = -i p e^{ipX} / (2 a b eps). Defined for X >= 0.
template <std::floating_point Scalar>
Complex<Scalar> coupling_free1d(Scalar p, Scalar separation, Scalar a, Scalar b, Scalar permittivity = 1) {
  if (!(p > 0) || !(a > 0) || !(b > 0) || !(permittivity > 0))
    throw DomainError("p, a, b and permittivity must be positive");
  if (!(separation >= 0)) throw DomainError("1D coupling requires X >= 0");
  const Complex<Scalar> pre(0, -1 / (2 * a * b * permittivity));
  return pre * p * std::polar(Scalar(1), p * separation);
}

}  // namespace dipolecav
