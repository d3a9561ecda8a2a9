#include "dipolecav/planar.hpp"

#include <cmath>
#include <numbers>

#include "dipolecav/specfun.hpp"
#include "planar_detail.hpp"

namespace dipolecav {

namespace {

using cd = std::complex<double>;

/// Closed-form k_z term in the canonical frame.
struct PlanarClosedForm {
  double p, X, z_A, z_D;
  cd pre;  // -i / (4 eps L)

  Tensor3d operator()(long /*n*/, double kz, bool is_rd) const {
    const double q2 = p * p - kz * kz;
    cd h0, h2;
    if (is_rd) {
      const auto [a, b] = specfun::hankel1_02(std::sqrt(q2) * X);
      h0 = a;
      h2 = b;
    } else {
      // H0(iw) = -(2i/pi) K0(w), H2(iw) = (2i/pi) K2(w)
      const auto [k0, k2] = specfun::bessel_k02(std::sqrt(-q2) * X);
      h0 = cd(0, -2 / std::numbers::pi * k0);
      h2 = cd(0, 2 / std::numbers::pi * k2);
    }
    const double sA = std::sin(kz * z_A), sD = std::sin(kz * z_D);
    const double cA = std::cos(kz * z_A), cD = std::cos(kz * z_D);
    const double plus = p * p + kz * kz;
    const cd odd = X * kz * q2 * (h0 + h2);

    Tensor3d t = Tensor3d::Zero();
    t(0, 0) = pre * sA * sD * (plus * h0 + q2 * h2);
    t(1, 1) = pre * sA * sD * (plus * h0 - q2 * h2);
    t(2, 2) = pre * 2.0 * cA * cD * q2 * h0;
    t(0, 2) = pre * sA * cD * odd;
    t(2, 0) = -pre * cA * sD * odd;
    return t;
  }
};

PlanarClosedForm closed_form(double p, const PlanarGeometry& geom, double X, double z_A, double z_D) {
  return {p, X, z_A, z_D, cd(0, -1 / (4 * geom.permittivity * geom.L))};
}

}  // namespace

CouplingResult coupling_planar(double p, const PlanarGeometry& geom, const Vector3d& r_A,
                               const Vector3d& r_D, const SumControl& ctrl) {
  const auto frame = detail::planar_frame(p, geom, r_A, r_D);
  const auto term = closed_form(p, geom, frame.X, frame.z_A, frame.z_D);
  auto to_lab = [&](CouplingResult r) {
    r.rd = detail::rotate(r.rd, frame.R);
    r.nrd = detail::rotate(r.nrd, frame.R);
    r.total = detail::rotate(r.total, frame.R);
    return r;
  };
  try {
    return to_lab(detail::sum_planar_modes(p, geom, frame.X, ctrl, term, [](auto&&...) {}));
  } catch (const NotConverged& e) {
    throw NotConverged(e.what(), to_lab(e.partial()));
  }
}

std::vector<PlanarTerm> planar_sum_terms(double p, const PlanarGeometry& geom, double X, double z_A,
                                         double z_D, Component component, const SumControl& ctrl) {
  detail::check_planar_inputs(p, geom, X, z_A, z_D);
  std::vector<PlanarTerm> terms;
  detail::sum_planar_modes(p, geom, X, ctrl, closed_form(p, geom, X, z_A, z_D),
                           [&](long n, double kz, bool rd, const Tensor3d& t) {
                             terms.push_back({n, kz, t(component.row, component.col), rd});
                           });
  return terms;
}

}  // namespace dipolecav
