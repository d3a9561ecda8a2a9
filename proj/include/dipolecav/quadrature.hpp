#pragma once

// Adaptive Gauss-Kronrod quadrature for complex scalar or vector valued
// integrands, plus a semi-infinite oscillatory tail integrator that sums
// half-period panels and accelerates the partial sums with Wynn's epsilon
// algorithm.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace dipolecav::quad {

template <typename V>
struct Result {
  V value;
  double error = 0.0;
  /// Integral of |f| (componentwise max), the scale errors are judged against.
  double l1 = 0.0;
  bool converged = true;
  int evaluations = 0;
};

struct Tolerance {
  double abs = 0.0;
  /// Relative to the L1 norm of the integrand, not to the result, so that
  /// integrals with heavy cancellation stop at a sensible absolute accuracy.
  double rel = 1e-10;
  int max_intervals = 400;
};

namespace detail {

inline double magnitude(std::complex<double> z) { return std::abs(z); }

template <typename Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().maxCoeff();
}

inline std::complex<double> abs_value(std::complex<double> z) { return std::abs(z); }

template <typename Derived>
auto abs_value(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().template cast<std::complex<double>>().eval();
}

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename V>
struct Panel {
  double a, b;
  V value;
  double error;
  double l1;
};

template <typename F>
auto kronrod15(const F& f, double a, double b) {
  using V = decltype(f(a));
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const V fc = f(c);
  V kron = fc * kWgk[7];
  V gauss = fc * kWg[3];
  V l1 = abs_value(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const V f1 = f(c - dx), f2 = f(c + dx);
    kron += (f1 + f2) * kWgk[j];
    l1 += (abs_value(f1) + abs_value(f2)) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  const V k = kron * h;
  const double err = magnitude(V((kron - gauss) * h));
  return Panel<V>{a, b, k, err, magnitude(V(l1 * h))};
}

}  // namespace detail

/// Globally adaptive G7-K15 over [a, b], optionally pre-split at `breaks`.
template <typename F>
auto integrate(const F& f, double a, double b, const Tolerance& tol,
               const std::vector<double>& breaks = {}) {
  using V = decltype(f(a));
  using P = detail::Panel<V>;
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());

  std::vector<P> panels;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i + 1] > pts[i]) panels.push_back(detail::kronrod15(f, pts[i], pts[i + 1]));

  auto totals = [&](V& value, double& err, double& l1) {
    value = panels.front().value;
    err = panels.front().error;
    l1 = panels.front().l1;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      value += panels[i].value;
      err += panels[i].error;
      l1 += panels[i].l1;
    }
  };

  Result<V> out{panels.front().value};
  totals(out.value, out.error, out.l1);
  while (out.error > std::max(tol.abs, tol.rel * out.l1)) {
    if (static_cast<int>(panels.size()) >= tol.max_intervals) {
      out.converged = false;
      break;
    }
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const P& x, const P& y) { return x.error < y.error; });
    const double mid = 0.5 * (worst->a + worst->b);
    if (!(mid > worst->a && mid < worst->b)) {
      out.converged = false;
      break;
    }
    const P left = detail::kronrod15(f, worst->a, mid);
    const P right = detail::kronrod15(f, mid, worst->b);
    *worst = left;
    panels.push_back(right);
    totals(out.value, out.error, out.l1);
  }
  out.evaluations = static_cast<int>(panels.size()) * 15;
  return out;
}

/// Wynn epsilon extrapolation of a sequence of partial sums (complex scalar).
/// Returns the last even-column estimate and the change from the previous one.
inline std::pair<std::complex<double>, double> wynn_epsilon(const std::vector<std::complex<double>>& s) {
  using C = std::complex<double>;
  const std::size_t n = s.size();
  if (n < 3) return {s.back(), std::numeric_limits<double>::infinity()};
  // prev = eps_{k-1}, col_minus = eps_{k-2}; eps_{-1} = 0, eps_0 = s.
  std::vector<C> prev = s;
  std::vector<C> col_minus(n + 1, C(0));
  C best = s.back(), best_prev = s[n - 2];
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<C> next(n - k);
    bool ok = true;
    for (std::size_t i = 0; i + k < n; ++i) {
      const C d = prev[i + 1] - prev[i];
      if (std::abs(d) == 0.0) {
        ok = false;
        break;
      }
      next[i] = col_minus[i + 1] + C(1) / d;
    }
    if (!ok) break;
    col_minus = prev;
    prev = next;
    if (k % 2 == 0 && prev.size() >= 2) {
      best = prev.back();
      best_prev = prev[prev.size() - 2];
    } else if (k % 2 == 0 && prev.size() == 1) {
      best_prev = best;
      best = prev.back();
    }
  }
  return {best, std::abs(best - best_prev)};
}

/// Integral over [start, inf) of an integrand that oscillates with the given
/// half-period. Panels of one half-period are integrated adaptively and the
/// partial sums are extrapolated componentwise.
template <typename F>
auto integrate_tail(const F& f, double start, double half_period, const Tolerance& tol,
                    int max_panels = 600) {
  using V = decltype(f(start));
  Result<V> first = integrate(f, start, start + half_period, tol);
  V partial = first.value;
  double l1 = first.l1;
  double qerr = first.error;
  const Eigen::Index ncomp = [&] {
    if constexpr (std::is_same_v<V, std::complex<double>>) return Eigen::Index(1);
    else return partial.size();
  }();
  auto comp = [](const V& v, Eigen::Index i) -> std::complex<double> {
    if constexpr (std::is_same_v<V, std::complex<double>>) return v;
    else return v(i);
  };

  std::vector<std::vector<std::complex<double>>> sums(ncomp);
  for (Eigen::Index i = 0; i < ncomp; ++i) sums[i].push_back(comp(partial, i));

  Result<V> out{partial};
  int stable = 0;
  V last_estimate = partial;
  for (int k = 1; k < max_panels; ++k) {
    const double a = start + k * half_period;
    const Result<V> piece = integrate(f, a, a + half_period, tol);
    partial += piece.value;
    l1 += piece.l1;
    qerr += piece.error;
    V estimate = partial;
    double change = 0.0;
    for (Eigen::Index i = 0; i < ncomp; ++i) {
      auto& seq = sums[i];
      seq.push_back(comp(partial, i));
      // A sliding window keeps the epsilon table small and well conditioned.
      std::vector<std::complex<double>> window(seq.end() - std::min<std::ptrdiff_t>(seq.size(), 24),
                                               seq.end());
      const auto [e, de] = wynn_epsilon(window);
      if constexpr (std::is_same_v<V, std::complex<double>>) estimate = e;
      else estimate(i) = e;
      change = std::max(change, std::min(de, std::abs(e - comp(last_estimate, i))));
    }
    const double target = std::max(tol.abs, tol.rel * l1);
    const double delta = detail::magnitude(V(estimate - last_estimate));
    last_estimate = estimate;
    if (k >= 4 && delta <= target && change <= 10 * target) {
      if (++stable >= 2) {
        out.value = estimate;
        out.error = std::max(delta, qerr);
        out.l1 = l1;
        out.converged = true;
        return out;
      }
    } else {
      stable = 0;
    }
  }
  out.value = last_estimate;
  out.error = std::numeric_limits<double>::infinity();
  out.l1 = l1;
  out.converged = false;
  return out;
}

}  // namespace dipolecav::quad
