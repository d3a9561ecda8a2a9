#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using ld = long double;
constexpr ld pi = std::numbers::pi_v<ld>;
constexpr ld euler_gamma = 0.577215664901532860606512090082402431L;

/// 20-point Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration.
inline const std::vector<std::pair<ld, ld>>& gauss_legendre() {
  static const std::vector<std::pair<ld, ld>> rule = [] {
    constexpr int n = 20;
    std::vector<std::pair<ld, ld>> r;
    for (int i = 1; i <= n; ++i) {
      ld x = std::cos(pi * (i - 0.25L) / (n + 0.5L));
      ld dp = 0;
      for (int it = 0; it < 100; ++it) {
        ld p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const ld p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const ld dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-19L) break;
      }
      r.emplace_back(x, 2 / ((1 - x * x) * dp * dp));
    }
    return r;
  }();
  return rule;
}

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
template <typename F>
auto composite_gl(const F& f, ld a, ld b, int panels) {
  using V = decltype(f(a));
  V sum{};
  const ld h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const ld c = a + (k + 0.5L) * h;
    for (const auto& [x, w] : gauss_legendre()) sum += w * f(c + 0.5L * h * x);
  }
  return sum * (0.5L * h);
}

/// J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt. The integrand is periodic
/// and even, so the trapezoid rule converges geometrically once N > x.
inline ld bessel_j(int n, ld x) {
  const int N = static_cast<int>(x) + 64;
  ld s = 0;
  for (int k = 0; k <= N; ++k) {
    const ld t = pi * k / N;
    const ld w = (k == 0 || k == N) ? 0.5L : 1.0L;
    s += w * std::cos(n * t - x * std::sin(t));
  }
  return s / N;
}

/// Y_n(x) = (1/pi) int_0^pi sin(x sin t - n t) dt
///        - (1/pi) int_0^inf (e^{nt} + (-1)^n e^{-nt}) e^{-x sinh t} dt.
inline ld bessel_y(int n, ld x) {
  const int panels = static_cast<int>(x) + 40;
  const ld first = composite_gl([&](ld t) { return std::sin(x * std::sin(t) - n * t); }, 0, pi, panels);
  // Geometrically graded panels resolve the e^{-x sinh t} decay for any x.
  const ld T = std::asinh(80 / x);
  const ld sign = (n % 2 == 0) ? 1 : -1;
  auto g = [&](ld t) { return (std::exp(n * t) + sign * std::exp(-n * t)) * std::exp(-x * std::sinh(t)); };
  ld second = 0, hi = T;
  for (int k = 0; k < 80; ++k) {
    const ld lo = hi / 2;
    second += composite_gl(g, lo, hi, 4);
    hi = lo;
  }
  second += composite_gl(g, 0, hi, 1);
  return (first - second) / pi;
}

/// K_n(x) = int_0^inf e^{-x cosh t} cosh(n t) dt, with e^{-x} factored out.
inline ld bessel_k(int n, ld x) {
  const ld h = 0.02L;
  const ld T = std::acosh(1 + 60 / x) + 1;
  ld s = 0.5L;  // t = 0 term with half weight
  for (ld t = h; t <= T; t += h) s += std::exp(-x * (std::cosh(t) - 1)) * std::cosh(n * t);
  return 2 * h * s / 2 * std::exp(-x);
}

/// H_n^(1)(i x) by the Schlaefli contour w = t + i pi/2, evaluated as a
/// complex trapezoid sum (no reference to K).
inline std::complex<ld> hankel1_imag_axis(int n, ld x) {
  using C = std::complex<ld>;
  const ld h = 0.02L;
  const ld T = std::acosh(1 + 60 / x) + 1 + n;
  C s = 0;
  for (ld t = -T; t <= T; t += h) {
    const C w(t, pi / 2);
    s += std::exp(C(0, x) * std::sinh(w) - ld(n) * w);
  }
  return s * h / (pi * C(0, 1));
}

/// Ci(x) and si(x) = Si(x) - pi/2 for x > 0.
inline std::pair<ld, ld> cisi(ld x) {
  if (x < 4) {
    ld ci = euler_gamma + std::log(x), si = 0;
    ld term_c = 1, term_s = x;  // (-x^2)^k/(2k)!, (-1)^k x^{2k+1}/(2k+1)!
    si += term_s;
    for (int k = 1; k < 60; ++k) {
      term_c *= -x * x / ((2 * k - 1) * (2 * k));
      term_s *= -x * x / ((2 * k) * (2 * k + 1));
      ci += term_c / (2 * k);
      si += term_s / (2 * k + 1);
    }
    return {ci, si - pi / 2};
  }
  // f = int_0^inf e^{-xt}/(1+t^2) dt, g = int_0^inf e^{-xt} t/(1+t^2) dt
  // with t = e^s; the trapezoid rule on s converges geometrically.
  const ld h = 0.01L;
  ld f = 0, g = 0;
  for (ld s = -45; s <= std::log(80 / x); s += h) {
    const ld t = std::exp(s);
    const ld e = std::exp(-x * t) * t / (1 + t * t);
    f += e;
    g += e * t;
  }
  f *= h;
  g *= h;
  return {f * std::sin(x) - g * std::cos(x), -f * std::cos(x) - g * std::sin(x)};
}

/// Standard outgoing-wave dipole coupling
/// e^{ipr}/(4 pi eps r^3) [(1 - 3 rr)(1 - i p r) - (1 - rr) p^2 r^2].
inline Eigen::Matrix3cd textbook_dipole(double p, const Eigen::Vector3d& r, double eps = 1.0) {
  const double d = r.norm();
  const Eigen::Vector3d u = r / d;
  const Eigen::Matrix3d uu = u * u.transpose();
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  const std::complex<double> phase = std::polar(1.0, p * d) / (4 * std::numbers::pi * eps * d * d * d);
  const std::complex<double> near(1, -p * d);
  return phase * ((I - 3 * uu).cast<std::complex<double>>() * near -
                  (I - uu).cast<std::complex<double>>() * (p * p * d * d));
}

}  // namespace oracle
