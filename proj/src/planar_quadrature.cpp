// Radial-integral oracle for the planar cavity. For each k_z the in-plane
// momentum integral is left in its Bessel-J form,
//   F = int_0^inf k J0(kX) / (q^2 - k^2) dk,  G = int_0^inf J1(kX) / (q^2 - k^2) dk,
// with q^2 = (p + i eps)^2 - k_z^2, and evaluated numerically. J0 and J1
// come from the standard library so this path shares no code with specfun.

#include <cmath>
#include <numbers>

#include "dipolecav/planar.hpp"
#include "dipolecav/quadrature.hpp"
#include "planar_detail.hpp"

namespace dipolecav {

namespace {

using cd = std::complex<double>;
using Pair = Eigen::Vector2cd;

struct RadialIntegrals {
  cd F, G;
};

/// Breakpoints that resolve a Lorentzian-like feature of half-width `width`
/// centred on `centre`, geometrically refined towards the centre.
void add_refinement(std::vector<double>& pts, double centre, double width, double reach) {
  for (double d = width; d < reach; d *= 8) {
    pts.push_back(centre - d);
    pts.push_back(centre + d);
  }
  pts.push_back(centre);
}

RadialIntegrals radial_integrals(cd q2, double X, const quad::Tolerance& tol) {
  auto f = [q2, X](double k) -> Pair {
    const cd den = q2 - k * k;
    const double kx = k * X;
    return Pair(k * std::cyl_bessel_j(0.0, kx) / den, std::cyl_bessel_j(1.0, kx) / den);
  };
  const cd q = std::sqrt(q2);
  const double scale = std::abs(q);
  const double period = std::numbers::pi / X;
  // Finite part covers the pole or the evanescent hump plus a few oscillations.
  const double T = std::max(3.0 * scale, 4.0 * period);
  std::vector<double> pts;
  if (q.real() > std::abs(q.imag())) {
    add_refinement(pts, q.real(), std::max(q.imag(), 1e-14 * q.real()), 0.5 * q.real());
  } else if (scale > 0) {
    add_refinement(pts, 0.0, 0.1 * scale, T);
  }
  for (double x = period; x < T; x += period) pts.push_back(x);

  quad::Tolerance local = tol;
  local.max_intervals = 4000;
  const auto head = quad::integrate(f, 0.0, T, local, pts);
  const auto tail = quad::integrate_tail(f, T, period, tol);
  if (!head.converged || !tail.converged)
    throw QuadratureFailure("planar radial integral did not converge",
                            std::max(head.error, tail.error));
  const Pair v = head.value + tail.value;
  return {v(0), v(1)};
}

}  // namespace

Tensor3d planar_quadrature_tensor(double p, const PlanarGeometry& geom, const Vector3d& r_A,
                                  const Vector3d& r_D, double eps_imag, const SumControl& ctrl) {
  const auto frame = detail::planar_frame(p, geom, r_A, r_D);
  if (!(eps_imag >= 1e-8 * p && eps_imag <= 1e-3 * p))
    throw DomainError("eps_imag must lie in [1e-8, 1e-3] p");
  const double X = frame.X;
  const cd pt(p, eps_imag);
  const cd pre = 1.0 / (std::numbers::pi * geom.permittivity * geom.L);
  quad::Tolerance tol;
  tol.rel = 1e-12;

  auto term = [&](long, double kz, bool) -> Tensor3d {
    const cd q2 = pt * pt - kz * kz;
    const auto [F, G] = radial_integrals(q2, X, tol);
    // int_0^inf k^2 J1(kX) / (q^2 - k^2) dk, using int k^2 J1/(q^2-k^2) = -int J1 + q^2 G.
    const cd H = -1.0 / X + q2 * G;
    const double sA = std::sin(kz * frame.z_A), sD = std::sin(kz * frame.z_D);
    const double cA = std::cos(kz * frame.z_A), cD = std::cos(kz * frame.z_D);
    Tensor3d t = Tensor3d::Zero();
    t(0, 0) = pre * sA * sD * (kz * kz * F + H / X);
    t(1, 1) = pre * sA * sD * ((kz * kz + q2) * F - H / X);
    t(2, 2) = pre * cA * cD * q2 * F;
    t(0, 2) = pre * sA * cD * kz * H;
    t(2, 0) = -pre * cA * sD * kz * H;
    return t;
  };
  const auto r = detail::sum_planar_modes(p, geom, X, ctrl, term, [](auto&&...) {}, true);
  return detail::rotate(r.total, frame.R);
}

std::complex<double> coupling_planar_quadrature(double p, const PlanarGeometry& geom,
                                                const Vector3d& r_A, const Vector3d& r_D,
                                                double eps_imag, Component component,
                                                const SumControl& ctrl) {
  return planar_quadrature_tensor(p, geom, r_A, r_D, eps_imag, ctrl)(component.row, component.col);
}

}  // namespace dipolecav
