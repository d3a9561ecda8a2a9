#pragma once

// Real-argument special functions used by the closed-form coupling tensors:
// J_n, Y_n, H_n^(1) and K_n for n in {0, 2}, the cosine integral and the
// shifted sine integral si(x) = Si(x) - pi/2.
//
// Accuracy target is ~1e-13 relative to the local magnitude (or to the
// oscillation envelope near zeros) over the supported domains:
//   J, Y, H : 0 < x <= 1e4       K : 0 < x < ~700       Ci, si : |x| <= 1e4
//
// Everything is templated on the floating type so the same code runs in
// double and long double.

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "dipolecav/types.hpp"

namespace dipolecav::specfun {

/// A function value with a conservative absolute error estimate.
template <typename Value, typename Real>
struct SpecialValue {
  Value value;
  Real abs_err_est;
};

namespace detail {

template <std::floating_point Real>
inline void check_order(int order) {
  if (order != 0 && order != 2)
    throw DomainError("special function order must be 0 or 2, got " + std::to_string(order));
}

template <std::floating_point Real>
constexpr Real eps = std::numeric_limits<Real>::epsilon();

/// Power series for J_0, J_1, J_2; fine for x <= 2.
template <std::floating_point Real>
void j012_series(Real x, Real& j0, Real& j1, Real& j2) {
  const Real h = x / 2;
  const Real mq = -h * h;
  Real t0 = 1, t1 = h, t2 = h * h / 2;
  j0 = t0;
  j1 = t1;
  j2 = t2;
  for (int k = 1; k < 60; ++k) {
    t0 *= mq / (Real(k) * k);
    t1 *= mq / (Real(k) * (k + 1));
    t2 *= mq / (Real(k) * (k + 2));
    j0 += t0;
    j1 += t1;
    j2 += t2;
    if (std::abs(t0) < eps<Real> * std::abs(j0) / 4 && std::abs(t2) < eps<Real> * std::abs(j2) / 4)
      break;
  }
}

/// Series for Y_0 and Y_2 (A&S 9.1.11); fine for 0 < x <= 2.
template <std::floating_point Real>
void y02_series(Real x, Real j0, Real j2, Real& y0, Real& y2) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  constexpr Real gamma = std::numbers::egamma_v<Real>;
  const Real h = x / 2;
  const Real q = h * h;
  const Real lg = std::log(h);

  // psi(k+1) + psi(n+k+1) with psi(m+1) = -gamma + H_m.
  Real hk = 0;  // H_k
  Real sum0 = 0, sum2 = 0;
  Real t0 = 1;            // (-q)^k / (k!)^2
  Real t2 = Real(1) / 2;  // (-q)^k / (k! (k+2)!)
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      hk += Real(1) / k;
      t0 *= -q / (Real(k) * k);
      t2 *= -q / (Real(k) * (k + 2));
    }
    const Real hk2 = hk + Real(1) / (k + 1) + Real(1) / (k + 2);  // H_{k+2}
    const Real d0 = t0 * (2 * (hk - gamma));
    const Real d2 = t2 * ((hk - gamma) + (hk2 - gamma));
    sum0 += d0;
    sum2 += d2;
    if (k > 2 && std::abs(d0) < eps<Real> * std::abs(sum0) / 4 &&
        std::abs(d2) < eps<Real> * std::abs(sum2) / 4)
      break;
  }
  y0 = (2 / pi) * lg * j0 - sum0 / pi;
  y2 = -(1 / (pi * q)) * (1 + q) + (2 / pi) * lg * j2 - (q / pi) * sum2;
}

/// Miller backward recurrence for J_0, J_1, J_2 with the Neumann series for
/// Y_0 and Y_1 accumulated on the way down. Intended for 2 < x <= 25.
template <std::floating_point Real>
void jy_miller(Real x, Real& j0, Real& j1, Real& j2, Real& y0, Real& y2) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  constexpr Real gamma = std::numbers::egamma_v<Real>;
  constexpr Real big = Real(1e200);

  int top = static_cast<int>(1.4 * static_cast<double>(x)) + 40;
  top += top % 2;

  // Unnormalised values; normalisation from J_0 + 2 sum_k J_2k = 1.
  Real next = 0, cur = Real(1e-30);
  Real norm = 0;
  Real ysum0 = 0;  // sum_{k>=1} (-1)^k J_2k / k
  Real ysum1 = 0;  // sum_{k>=1} (-1)^k (J_{2k-1} - J_{2k+1}) / k
  Real jprev_odd = 0;  // J_{2k+1} while standing on index 2k
  Real u0 = 0, u1 = 0, u2 = 0;
  for (int n = top; n >= 1; --n) {
    const Real below = (2 * n / x) * cur - next;  // index n - 1
    next = cur;
    cur = below;
    const int m = n - 1;  // index of cur
    if (m % 2 == 0) {
      if (m > 0) {
        const int k = m / 2;
        const Real sign = (k % 2 == 0) ? 1 : -1;
        norm += 2 * cur;
        ysum0 += sign * cur / k;
      } else {
        norm += cur;
      }
      jprev_odd = next;  // J_{m+1}
    } else {
      // m = 2k - 1: combine J_{2k-1} - J_{2k+1} once both are known.
      const int k = (m + 1) / 2;
      const Real sign = (k % 2 == 0) ? 1 : -1;
      // J_{2k+1} was stored when we stood on 2k.
      ysum1 += sign * (cur - jprev_odd) / k;
    }
    if (m == 2) u2 = cur;
    if (m == 1) u1 = cur;
    if (m == 0) u0 = cur;
    if (std::abs(cur) > big) {
      const Real s = 1 / big;
      cur *= s;
      next *= s;
      norm *= s;
      ysum0 *= s;
      ysum1 *= s;
      jprev_odd *= s;
      u1 *= s;
      u2 *= s;
    }
  }
  j0 = u0 / norm;
  j1 = u1 / norm;
  j2 = u2 / norm;
  const Real lg = std::log(x / 2) + gamma;
  y0 = (2 / pi) * (lg * j0 - 2 * ysum0 / norm);
  const Real y1 = (2 / pi) * (lg * j1 - j0 / x) + (2 / pi) * ysum1 / norm;
  y2 = (2 / x) * y1 - y0;
}

/// Hankel asymptotic expansion of J_nu and Y_nu for large x.
template <std::floating_point Real>
void jy_asymptotic(int nu, Real x, Real& j, Real& y) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real mu = Real(4 * nu * nu);
  Real p = 1, q = 0;
  Real term = 1;
  Real last = std::numeric_limits<Real>::max();
  for (int k = 1; k < 200; ++k) {
    const Real odd = Real(2 * k - 1);
    term *= (mu - odd * odd) / (Real(k) * 8 * x);
    if (std::abs(term) > last) break;  // asymptotic series started diverging
    last = std::abs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (std::abs(term) < eps<Real> / 8) break;
  }
  // chi = x - (nu/2 + 1/4) pi, expanded to avoid rounding x - phase.
  const Real c = std::cos(x), s = std::sin(x);
  const Real r = std::numbers::sqrt2_v<Real> / 2;
  Real cc = 0, sc = 0;  // cos(chi), sin(chi)
  if (nu == 0) {
    cc = r * (c + s);
    sc = r * (s - c);
  } else {  // nu == 2
    cc = -r * (c + s);
    sc = r * (c - s);
  }
  const Real amp = std::sqrt(2 / (pi * x));
  j = amp * (p * cc - q * sc);
  y = amp * (p * sc + q * cc);
}

template <std::floating_point Real>
constexpr Real asymptotic_threshold = Real(25);

/// J_0, J_2, Y_0, Y_2 at x > 0 together.
template <std::floating_point Real>
void jy02(Real x, Real& j0, Real& j2, Real& y0, Real& y2) {
  if (x <= 2) {
    Real j1 = 0;
    j012_series(x, j0, j1, j2);
    y02_series(x, j0, j2, y0, y2);
  } else if (x <= asymptotic_threshold<Real>) {
    Real j1 = 0;
    jy_miller(x, j0, j1, j2, y0, y2);
  } else {
    jy_asymptotic(0, x, j0, y0);
    jy_asymptotic(2, x, j2, y2);
  }
}

/// K_0 and K_1 at x > 0.
template <std::floating_point Real>
std::pair<Real, Real> k01(Real x) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  constexpr Real gamma = std::numbers::egamma_v<Real>;
  if (x <= 2) {
    const Real q = x * x / 4;
    const Real lg = std::log(x / 2);
    Real t0 = 1;            // q^k / (k!)^2
    Real t1 = x / 2;        // (x/2) q^k / (k! (k+1)!)
    Real i0 = 0, i1 = 0, s0 = 0, s1 = 0;
    Real hk = 0;
    for (int k = 0; k < 60; ++k) {
      if (k > 0) {
        hk += Real(1) / k;
        t0 *= q / (Real(k) * k);
        t1 *= q / (Real(k) * (k + 1));
      }
      i0 += t0;
      i1 += t1;
      s0 += hk * t0;
      const Real psi_sum = (hk - gamma) + (hk + Real(1) / (k + 1) - gamma);
      s1 += psi_sum * t1;
      if (k > 2 && t0 < eps<Real> * i0 / 8) break;
    }
    const Real kk0 = -(lg + gamma) * i0 + s0;
    const Real kk1 = 1 / x + lg * i1 - s1 / 2;
    return {kk0, kk1};
  }
  // Steed's continued fraction (CF2) for K_0 and K_1.
  Real b = 2 * (1 + x);
  Real d = 1 / b;
  Real h = d, delh = d;
  Real q1 = 0, q2 = 1;
  const Real a1 = Real(0.25);
  Real q = a1, c = a1;
  Real a = -a1;
  Real s = 1 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const Real qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2;
    d = 1 / (b + a * d);
    delh = (b * d - 1) * delh;
    h += delh;
    const Real dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps<Real> / 2) break;
  }
  h = a1 * h;
  const Real kk0 = std::sqrt(pi / (2 * x)) * std::exp(-x) / s;
  const Real kk1 = kk0 * (x + Real(0.5) - h) / x;
  return {kk0, kk1};
}

/// Ci(x) and si(x) for x > 0.
template <std::floating_point Real>
std::pair<Real, Real> cisi_positive(Real x) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  constexpr Real gamma = std::numbers::egamma_v<Real>;
  if (x <= 4) {
    const Real x2 = x * x;
    Real tc = 1;  // (-1)^k x^2k / (2k)!
    Real ts = x;  // (-1)^k x^(2k+1) / (2k+1)!
    Real ci = 0, si = ts;
    for (int k = 1; k < 100; ++k) {
      tc *= -x2 / (Real(2 * k - 1) * (2 * k));
      ts *= -x2 / (Real(2 * k) * (2 * k + 1));
      const Real dc = tc / (2 * k);
      const Real ds = ts / (2 * k + 1);
      ci += dc;
      si += ds;
      if (std::abs(dc) < eps<Real> / 16 && std::abs(ds) < eps<Real> * std::abs(si) / 16) break;
    }
    return {gamma + std::log(x) + ci, si - pi / 2};
  }
  // Modified Lentz evaluation of E1(ix) = -Ci(x) + i si(x).
  using C = std::complex<Real>;
  constexpr Real tiny = std::numeric_limits<Real>::min() * 16;
  C b(1, x);
  C c(1 / tiny, 0);
  C d = Real(1) / b;
  C h = d;
  for (int i = 1; i < 100000; ++i) {
    const Real a = -Real(i) * i;
    b += Real(2);
    d = Real(1) / (a * d + b);
    c = b + a / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del.real() - 1) + std::abs(del.imag()) < eps<Real>) break;
  }
  h *= C(std::cos(x), -std::sin(x));
  return {-h.real(), h.imag()};
}

}  // namespace detail

/// J_order(x), order in {0, 2}, x >= 0.
template <std::floating_point Real>
Real bessel_j(int order, Real x) {
  detail::check_order<Real>(order);
  if (!(x >= 0) || !std::isfinite(x)) throw DomainError("bessel_j requires finite x >= 0");
  if (x == 0) return order == 0 ? Real(1) : Real(0);
  Real j0, j1, j2;
  if (x <= 2) {
    detail::j012_series(x, j0, j1, j2);
  } else if (x <= detail::asymptotic_threshold<Real>) {
    Real y0, y2;
    detail::jy_miller(x, j0, j1, j2, y0, y2);
  } else {
    Real y;
    detail::jy_asymptotic(order, x, order == 0 ? j0 : j2, y);
  }
  return order == 0 ? j0 : j2;
}

/// Y_order(x), order in {0, 2}, x > 0.
template <std::floating_point Real>
Real bessel_y(int order, Real x) {
  detail::check_order<Real>(order);
  if (!(x > 0) || !std::isfinite(x))
    throw DomainError("bessel_y requires finite x > 0 (logarithmic singularity at 0)");
  Real j0, j2, y0, y2;
  detail::jy02(x, j0, j2, y0, y2);
  return order == 0 ? y0 : y2;
}

/// H_order^(1)(x) = J_order(x) + i Y_order(x), x > 0.
template <std::floating_point Real>
std::complex<Real> hankel1(int order, Real x) {
  detail::check_order<Real>(order);
  if (!(x > 0) || !std::isfinite(x)) throw DomainError("hankel1 requires finite x > 0");
  Real j0, j2, y0, y2;
  detail::jy02(x, j0, j2, y0, y2);
  return order == 0 ? std::complex<Real>(j0, y0) : std::complex<Real>(j2, y2);
}

/// H_0^(1)(x) and H_2^(1)(x) from a single evaluation.
template <std::floating_point Real>
std::pair<std::complex<Real>, std::complex<Real>> hankel1_02(Real x) {
  if (!(x > 0) || !std::isfinite(x)) throw DomainError("hankel1 requires finite x > 0");
  Real j0, j2, y0, y2;
  detail::jy02(x, j0, j2, y0, y2);
  return {{j0, y0}, {j2, y2}};
}

/// K_order(x), order in {0, 2}, x > 0.
template <std::floating_point Real>
Real bessel_k(int order, Real x) {
  detail::check_order<Real>(order);
  if (!(x > 0) || !std::isfinite(x)) throw DomainError("bessel_k requires finite x > 0");
  const auto [k0, k1] = detail::k01(x);
  return order == 0 ? k0 : k0 + 2 * k1 / x;
}

/// K_0(x) and K_2(x) from a single evaluation.
template <std::floating_point Real>
std::pair<Real, Real> bessel_k02(Real x) {
  if (!(x > 0) || !std::isfinite(x)) throw DomainError("bessel_k requires finite x > 0");
  const auto [k0, k1] = detail::k01(x);
  return {k0, k0 + 2 * k1 / x};
}

/// Cosine integral. For x < 0 the value on the upper side of the cut,
/// Ci(|x|) + i pi, is returned.
template <std::floating_point Real>
std::complex<Real> cosint(Real x) {
  if (x == 0 || !std::isfinite(x)) throw DomainError("cosint requires finite x != 0");
  const Real ci = detail::cisi_positive(std::abs(x)).first;
  if (x > 0) return {ci, 0};
  return {ci, std::numbers::pi_v<Real>};
}

/// Shifted sine integral si(x) = Si(x) - pi/2.
template <std::floating_point Real>
Real shifted_sinint(Real x) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  if (!std::isfinite(x)) {
    if (std::isnan(x)) throw DomainError("shifted_sinint of NaN");
    return x > 0 ? Real(0) : -pi;
  }
  if (x == 0) return -pi / 2;
  const Real si = detail::cisi_positive(std::abs(x)).second;
  return x > 0 ? si : -si - pi;
}

/// Ci(|x|) and si(|x|) from one evaluation, x != 0.
template <std::floating_point Real>
std::pair<Real, Real> cisi_abs(Real x) {
  if (x == 0 || !std::isfinite(x)) throw DomainError("cisi requires finite x != 0");
  return detail::cisi_positive(std::abs(x));
}

/// Value with error estimate: a few ulps of the local scale. `envelope` is the
/// oscillation amplitude used near zeros of oscillatory functions.
template <typename Value, std::floating_point Real>
SpecialValue<Value, Real> with_error(Value v, Real envelope) {
  const Real scale = std::max<Real>(std::abs(v), envelope);
  return {v, 64 * detail::eps<Real> * scale};
}

/// Oscillation envelope of J, Y, H at x: sqrt(2 / (pi x)) for large x.
template <std::floating_point Real>
Real bessel_envelope(Real x) {
  return std::sqrt(2 / (std::numbers::pi_v<Real> * std::max<Real>(x, 1)));
}

}  // namespace dipolecav::specfun
