#pragma once

// Pieces shared by the closed-form planar sum and its quadrature oracle:
// input validation, the rotation onto the canonical frame, and the
// truncation driver over k_z = n pi / L.

#include <cmath>
#include <numbers>
#include <string>

#include "dipolecav/planar.hpp"
#include "summation.hpp"

namespace dipolecav::detail {

struct PlanarFrame {
  double X = 0.0;
  double z_A = 0.0, z_D = 0.0;
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();  ///< lab = R canonical R^T
};

inline void check_planar_inputs(double p, const PlanarGeometry& geom, double X, double z_A, double z_D) {
  if (!(p > 0)) throw DomainError("p must be positive");
  if (!(geom.L > 0) || !(geom.permittivity > 0)) throw DomainError("L and permittivity must be positive");
  if (!(z_A > 0 && z_A < geom.L && z_D > 0 && z_D < geom.L))
    throw DomainError("positions must lie strictly between the plates");
  if (!(X >= 1e-6 / p)) throw ZeroSeparation("in-plane separation below 1e-6/p");
}

inline PlanarFrame planar_frame(double p, const PlanarGeometry& geom, const Vector3d& r_A, const Vector3d& r_D) {
  PlanarFrame f;
  const double dx = r_A.x() - r_D.x(), dy = r_A.y() - r_D.y();
  f.X = std::hypot(dx, dy);
  f.z_A = r_A.z();
  f.z_D = r_D.z();
  check_planar_inputs(p, geom, f.X, f.z_A, f.z_D);
  const double c = dx / f.X, s = dy / f.X;
  f.R << c, -s, 0, s, c, 0, 0, 0, 1;
  return f;
}

inline Tensor3d rotate(const Tensor3d& v, const Eigen::Matrix3d& R) {
  const Eigen::Matrix3cd Rc = R.cast<std::complex<double>>();
  return Rc * v * Rc.transpose();
}

/// Runs the k_z sum. `term(n, kz, rd)` returns the canonical-frame tensor of
/// one term; `sink(n, kz, rd, tensor)` observes each term as it is added.
/// With `cutoff_only` the sum stops as soon as the exponential cutoff is
/// passed; numerically integrated terms carry noise above rel_tol, so the
/// oracle cannot use the term-size test.
template <typename TermFn, typename Sink>
CouplingResult sum_planar_modes(double p, const PlanarGeometry& geom, double X, const SumControl& ctrl,
                                TermFn&& term, Sink&& sink, bool cutoff_only = false) {
  const double dk = std::numbers::pi / geom.L;
  TensorAccumulator rd, nrd;
  CouplingResult out;
  double recent[3] = {0, 0, 0};
  for (long n = 0;; ++n) {
    if (n > ctrl.n_max) {
      out.rd = rd.value();
      out.nrd = nrd.value();
      out.total = out.rd + out.nrd;
      out.terms_used = n;
      out.converged = false;
      out.tail_bound = std::numeric_limits<double>::infinity();
      throw NotConverged("planar mode sum hit the term cap n_max = " + std::to_string(ctrl.n_max), out);
    }
    const double kz = n * dk;
    const double gap = p * p - kz * kz;
    if (std::abs(gap) < ctrl.tol_res * p * p)
      throw Resonant("p is within tol_res of the cavity cutoff n = " + std::to_string(n));
    const bool is_rd = gap > 0;
    const Tensor3d t = term(n, kz, is_rd);
    (is_rd ? rd : nrd).add(t);
    sink(n, kz, is_rd, t);

    recent[n % 3] = t.norm();
    if (is_rd || n < 3) continue;
    const double w = std::sqrt(-gap);
    if (w * X <= ctrl.exp_cutoff) continue;
    if (cutoff_only) {
      out.rd = rd.value();
      out.nrd = nrd.value();
      out.total = out.rd + out.nrd;
      out.terms_used = n + 1;
      out.converged = true;
      out.tail_bound = geometric_tail(recent[n % 3], std::exp(-dk * X));
      return out;
    }
    const double total = (rd.value() + nrd.value()).norm();
    const double limit = ctrl.rel_tol * total;
    const double last = std::max({recent[0], recent[1], recent[2]});
    if (last >= limit) continue;
    // Successive NRD envelopes k_z^2 e^{-k_z X} shrink by at least this ratio.
    const double ratio = std::pow(1.0 + 1.0 / n, 2) * std::exp(-dk * X);
    const double tail = geometric_tail(last, ratio);
    if (tail > limit) continue;
    out.rd = rd.value();
    out.nrd = nrd.value();
    out.total = out.rd + out.nrd;
    out.terms_used = n + 1;
    out.converged = true;
    out.tail_bound = tail;
    return out;
  }
}

}  // namespace dipolecav::detail
