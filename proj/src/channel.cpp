#include "dipolecav/channel.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "channel_detail.hpp"

namespace dipolecav {

namespace {

using cd = std::complex<double>;

/// sin and cos of (index * step * coordinate), filled on demand.
class TrigTable {
 public:
  TrigTable(double step, double coord) : step_(step), coord_(coord) {}
  double sin(long i) { return grow(i), s_[i]; }
  double cos(long i) { return grow(i), c_[i]; }

 private:
  void grow(long i) {
    while (static_cast<long>(s_.size()) <= i) {
      const double arg = static_cast<double>(s_.size()) * step_ * coord_;
      s_.push_back(std::sin(arg));
      c_.push_back(std::cos(arg));
    }
  }
  double step_, coord_;
  std::vector<double> s_, c_;
};

class ChannelClosedForm {
 public:
  ChannelClosedForm(double p, const ChannelGeometry& geom, double X, double y_A, double z_A, double y_D,
                    double z_D)
      : p_(p),
        X_(X),
        geom_(geom),
        yA_(std::numbers::pi / geom.a, y_A),
        yD_(std::numbers::pi / geom.a, y_D),
        zA_(std::numbers::pi / geom.b, z_A),
        zD_(std::numbers::pi / geom.b, z_D) {}

  Tensor3d operator()(const detail::Mode& md, bool is_rd) {
    const ModeProfiles f{yA_.sin(md.m), yA_.cos(md.m), zA_.sin(md.n), zA_.cos(md.n),
                         yD_.sin(md.m), yD_.cos(md.m), zD_.sin(md.n), zD_.cos(md.n)};
    return channel_mode_term(p_, geom_, X_, md.ky, md.kz, f, is_rd);
  }

 private:
  double p_, X_;
  ChannelGeometry geom_;
  TrigTable yA_, yD_, zA_, zD_;
};

}  // namespace

// The prefactors are -2i/(eps a b) for the components carrying
// 1/sqrt(p^2 - k_eta^2), and -+2/(eps a b) sign(x_A - x_D) for the mixed x
// components, which carry no such factor.
Tensor3d channel_mode_term(double p, const ChannelGeometry& geom, double X, double ky, double kz,
                           const ModeProfiles& f, std::optional<bool> is_rd) {
  Tensor3d t = Tensor3d::Zero();
  const double k_eta2 = ky * ky + kz * kz;
  const double q2 = p * p - k_eta2;
  const bool rd = is_rd.value_or(q2 > 0);
  const double dist = std::abs(X);
  const double sigma = X > 0 ? 1.0 : -1.0;
  cd g, e;
  if (rd) {
    const double q = std::sqrt(q2);
    e = std::polar(1.0, q * dist);
    g = e / q;
  } else {
    const double kappa = std::sqrt(-q2);
    if (kappa * dist > 745) return t;
    e = std::exp(-kappa * dist);
    g = cd(0, -1) * e / kappa;
  }
  const cd Pg = cd(0, -2 / (geom.permittivity * geom.a * geom.b)) * g;
  const cd Re = (2 / (geom.permittivity * geom.a * geom.b)) * sigma * e;

  t(0, 0) = Pg * (f.syA * f.szA * f.syD * f.szD * k_eta2);
  t(1, 1) = Pg * (f.cyA * f.szA * f.cyD * f.szD * (p * p - ky * ky));
  t(2, 2) = Pg * (f.syA * f.czA * f.syD * f.czD * (p * p - kz * kz));
  t(0, 1) = -Re * (f.syA * f.szA * f.cyD * f.szD * ky);
  t(1, 0) = Re * (f.cyA * f.szA * f.syD * f.szD * ky);
  t(0, 2) = -Re * (f.syA * f.szA * f.syD * f.czD * kz);
  t(2, 0) = Re * (f.syA * f.czA * f.syD * f.szD * kz);
  t(1, 2) = Pg * (f.cyA * f.szA * f.syD * f.czD * ky * kz);
  t(2, 1) = Pg * (f.syA * f.czA * f.cyD * f.szD * ky * kz);
  return t;
}

CouplingResult coupling_channel(double p, const ChannelGeometry& geom, const Vector3d& r_A,
                                const Vector3d& r_D, const SumControl& ctrl) {
  const double X = r_A.x() - r_D.x();
  detail::check_channel_inputs(p, geom, X, r_A.y(), r_A.z(), r_D.y(), r_D.z());
  ChannelClosedForm term(p, geom, X, r_A.y(), r_A.z(), r_D.y(), r_D.z());
  return detail::sum_channel_modes(p, geom, std::abs(X), ctrl, term, [](auto&&...) {});
}

std::vector<ChannelTerm> channel_sum_terms(double p, const ChannelGeometry& geom, double X, double y_A,
                                           double z_A, double y_D, double z_D, Component component,
                                           const SumControl& ctrl) {
  detail::check_channel_inputs(p, geom, X, y_A, z_A, y_D, z_D);
  ChannelClosedForm term(p, geom, X, y_A, z_A, y_D, z_D);
  std::vector<ChannelTerm> terms;
  detail::sum_channel_modes(p, geom, std::abs(X), ctrl, term,
                            [&](const detail::Mode& md, bool rd, const Tensor3d& t) {
                              terms.push_back({md.m, md.n, md.k_eta, t(component.row, component.col), rd});
                            });
  return terms;
}

}  // namespace dipolecav
