#pragma once

// Shared by the channel closed form and its oracle: input checks and the
// shell-ordered double sum over guided modes.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dipolecav/channel.hpp"
#include "summation.hpp"

namespace dipolecav::detail {

inline void check_channel_inputs(double p, const ChannelGeometry& geom, double X, double y_A, double z_A,
                                 double y_D, double z_D) {
  if (!(p > 0)) throw DomainError("p must be positive");
  if (!(geom.a > 0) || !(geom.b > 0) || !(geom.permittivity > 0))
    throw DomainError("a, b and permittivity must be positive");
  auto inside = [](double v, double w) { return v > 0 && v < w; };
  if (!(inside(y_A, geom.a) && inside(y_D, geom.a) && inside(z_A, geom.b) && inside(z_D, geom.b)))
    throw DomainError("positions must lie strictly inside the channel");
  if (!(std::abs(X) >= 1e-6 / p)) throw ZeroSeparation("axial separation below 1e-6/p");
}

inline double squared(double v) { return v * v; }

struct Mode {
  long m, n;
  double ky, kz, k_eta;
};

/// Modes whose k_eta falls in [s delta, (s+1) delta), ordered by (m, n).
inline std::vector<Mode> channel_shell(const ChannelGeometry& geom, long s, double delta) {
  const double dy = std::numbers::pi / geom.a, dz = std::numbers::pi / geom.b;
  const double lo = s * delta;
  // Membership is decided by one function so boundary modes land in exactly one shell.
  auto shell_of = [&](long m, long n) {
    return static_cast<long>(std::sqrt(squared(m * dy) + squared(n * dz)) / delta);
  };
  std::vector<Mode> out;
  for (long m = 0; shell_of(m, 0) <= s; ++m) {
    const double ky = m * dy;
    const double kz_lo = std::sqrt(std::max(0.0, lo * lo - ky * ky));
    const long n0 = std::max(0L, static_cast<long>(std::floor(kz_lo / dz)) - 2);
    for (long n = n0;; ++n) {
      if (m == 0 && n == 0) continue;
      const long shell = shell_of(m, n);
      if (shell > s) break;
      if (shell == s) out.push_back({m, n, ky, n * dz, std::sqrt(squared(ky) + squared(n * dz))});
    }
  }
  return out;
}

/// Runs the mode sum shell by shell. `term(mode, rd)` returns one tensor
/// term, `sink(mode, rd, tensor)` observes it. `X` is |x_A - x_D|.
template <typename TermFn, typename Sink>
CouplingResult sum_channel_modes(double p, const ChannelGeometry& geom, double X, const SumControl& ctrl,
                                 TermFn&& term, Sink&& sink, bool cutoff_only = false) {
  const double delta = std::min(std::numbers::pi / geom.a, std::numbers::pi / geom.b);
  TensorAccumulator rd, nrd;
  CouplingResult out;
  double recent[3] = {0, 0, 0};
  long used = 0;
  auto finish = [&](bool converged, double tail) {
    out.rd = rd.value();
    out.nrd = nrd.value();
    out.total = out.rd + out.nrd;
    out.terms_used = used;
    out.converged = converged;
    out.tail_bound = tail;
    return out;
  };
  for (long s = 0;; ++s) {
    const auto modes = channel_shell(geom, s, delta);
    // Terms within a shell are comparable in size; a plain sum per shell
    // followed by compensated accumulation across shells is accurate enough
    // and keeps the inner loop cheap.
    Tensor3d shell_rd = Tensor3d::Zero(), shell_nrd = Tensor3d::Zero();
    bool all_nrd = true;
    for (const Mode& md : modes) {
      if (std::max(md.m, md.n) > ctrl.n_max) {
        rd.add(shell_rd);
        nrd.add(shell_nrd);
        finish(false, std::numeric_limits<double>::infinity());
        throw NotConverged("channel mode sum hit the index cap n_max = " + std::to_string(ctrl.n_max), out);
      }
      const double gap = p * p - md.k_eta * md.k_eta;
      if (std::abs(gap) < ctrl.tol_res * p * p)
        throw Resonant("p is within tol_res of the channel cutoff (m, n) = (" + std::to_string(md.m) + ", " +
                       std::to_string(md.n) + ")");
      const bool is_rd = gap > 0;
      all_nrd = all_nrd && !is_rd;
      const Tensor3d t = term(md, is_rd);
      (is_rd ? shell_rd : shell_nrd) += t;
      sink(md, is_rd, t);
      ++used;
    }
    rd.add(shell_rd);
    nrd.add(shell_nrd);
    recent[s % 3] = (shell_rd + shell_nrd).norm();
    const double lo = s * delta;
    if (!all_nrd || s < 3 || lo <= p) continue;
    const double w = std::sqrt(lo * lo - p * p);
    if (w * X <= ctrl.exp_cutoff) continue;
    // Shell populations grow linearly and k_eta^2 e^{-w X} falls by e^{-delta X} per shell.
    const double ratio = std::pow(1.0 + 1.0 / (s + 1), 3) * std::exp(-delta * X);
    const double last = std::max({recent[0], recent[1], recent[2]});
    if (cutoff_only) return finish(true, geometric_tail(recent[s % 3], ratio));
    const double limit = ctrl.rel_tol * (rd.value() + nrd.value()).norm();
    if (last >= limit) continue;
    const double tail = geometric_tail(last, ratio);
    if (tail > limit) continue;
    return finish(true, tail);
  }
}

}  // namespace dipolecav::detail
