// Mode-function oracle for the channel. Each guided mode (m, n) has one TE
// and one TM polarisation,
//   TE: (0, k_z, -k_y) / k_eta,
//   TM: (k_eta^2, i k_x k_y, i k_x k_z) / (k_eta k),   k^2 = k_x^2 + k_eta^2,
// multiplying (sin sin, cos sin, sin cos) profiles in (y, z). Both time
// orderings are added and the k_x line integral is done numerically after
// folding onto k_x >= 0. Nothing here uses the closed-form expressions.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "channel_detail.hpp"
#include "dipolecav/quadrature.hpp"

namespace dipolecav {

namespace {

using cd = std::complex<double>;
using Vec9 = Eigen::Matrix<cd, 9, 1>;

struct Profile {
  double x, y, z;  // sin sin, cos sin, sin cos at one position
};

Profile profile(double ky, double kz, double y, double z) {
  const double sy = std::sin(ky * y), cy = std::cos(ky * y);
  const double sz = std::sin(kz * z), cz = std::cos(kz * z);
  return {sy * sz, cy * sz, sy * cz};
}

class ModeIntegrand {
 public:
  ModeIntegrand(double p, const ChannelGeometry& geom, long m, long n, const Vector3d& r_A, const Vector3d& r_D,
                double eps_imag)
      : pt_(p, eps_imag),
        perm_(geom.permittivity),
        ky_(m * std::numbers::pi / geom.a),
        kz_(n * std::numbers::pi / geom.b),
        k_eta_(std::hypot(ky_, kz_)),
        q2_(pt_ * pt_ - k_eta_ * k_eta_),
        X_(r_A.x() - r_D.x()),
        A_(profile(ky_, kz_, r_A.y(), r_A.z())),
        D_(profile(ky_, kz_, r_D.y(), r_D.z())) {
    const double big = 1e7 * (std::abs(pt_) + k_eta_ + 1 / std::abs(X_));
    contact_ = folded(big, 0.0);
  }

  /// Folded integrand with the constant large-k_x part removed.
  Vec9 operator()(double kx) const { return folded(kx, X_) - contact_ * std::cos(kx * X_); }

  double pole() const { return std::sqrt(std::max(0.0, q2_.real())); }
  double eps() const { return pt_.imag(); }
  double k_eta() const { return k_eta_; }
  double X() const { return std::abs(X_); }
  double contact_scale() const { return contact_.cwiseAbs().maxCoeff(); }

 private:
  Vec9 folded(double kx, double X) const { return raw(kx, X) + raw(-kx, X); }

  Vec9 raw(double kx, double X) const {
    Vec9 out = Vec9::Zero();
    if (k_eta_ == 0) return out;  // every profile vanishes for (0, 0)
    const double k = std::sqrt(kx * kx + k_eta_ * k_eta_);
    // p - k written as (p^2 - k_eta^2 - k_x^2) / (p + k) to keep digits near the pole.
    const cd fwd = std::polar(1.0, kx * X) * (pt_ + k) / (q2_ - kx * kx);  // donor emits
    const cd bwd = std::polar(1.0, -kx * X) / (-pt_ - k);   // acceptor emits
    const double w = k / (2 * perm_);
    const std::array<Eigen::Vector3cd, 2> pol = {
        Eigen::Vector3cd(0, kz_ / k_eta_, -ky_ / k_eta_),
        Eigen::Vector3cd(k_eta_ / k, cd(0, kx * ky_ / (k_eta_ * k)), cd(0, kx * kz_ / (k_eta_ * k)))};
    for (const auto& e : pol) {
      const Eigen::Vector3cd uA(e(0) * A_.x, e(1) * A_.y, e(2) * A_.z);
      const Eigen::Vector3cd uD(e(0) * D_.x, e(1) * D_.y, e(2) * D_.z);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          out(3 * i + j) += w * (uA(i) * std::conj(uD(j)) * fwd + std::conj(uA(i)) * uD(j) * bwd);
    }
    return out;
  }

  cd pt_;
  double perm_, ky_, kz_, k_eta_;
  cd q2_;
  double X_;
  Profile A_, D_;
  Vec9 contact_;
};

Vec9 integrate_mode(const ModeIntegrand& f) {
  const double X = f.X();
  const double period = std::numbers::pi / X;
  const double q = f.pole();
  const double scale = std::max(q, std::sqrt(std::abs(f.k_eta() * f.k_eta() - q * q)));
  const double T = std::max(3.0 * std::max(scale, f.k_eta()), 4.0 * period);
  std::vector<double> pts;
  if (q > 0) {
    for (double d = std::max(f.eps(), 1e-14 * q); d < 0.5 * q; d *= 8) {
      pts.push_back(q - d);
      pts.push_back(q + d);
    }
    pts.push_back(q);
  }
  for (double d = 0.1 * scale; d < T && d > 0; d *= 8) pts.push_back(d);
  for (double x = period; x < T; x += period) pts.push_back(x);

  quad::Tolerance tol;
  tol.rel = 1e-11;
  // Removing the contact part cancels digits; do not ask for more than that leaves.
  tol.abs = 1e3 * std::numeric_limits<double>::epsilon() * f.contact_scale() * period;
  quad::Tolerance head_tol = tol;
  head_tol.max_intervals = 4000;
  const auto head = quad::integrate(f, 0.0, T, head_tol, pts);
  const auto tail = quad::integrate_tail(f, T, period, tol);
  if (!head.converged || !tail.converged)
    throw QuadratureFailure("channel k_x integral did not converge (" + std::string(head.converged ? "tail" : "head") +
                                ", k_eta = " + std::to_string(f.k_eta()) + ")",
                            std::max(head.error, tail.error));
  return head.value + tail.value;
}

}  // namespace

Vec9 channel_mode_integrand(double p, const ChannelGeometry& geom, long m, long n, const Vector3d& r_A,
                            const Vector3d& r_D, double eps_imag, double k_x) {
  return ModeIntegrand(p, geom, m, n, r_A, r_D, eps_imag)(k_x);
}

Tensor3d channel_quadrature_tensor(double p, const ChannelGeometry& geom, const Vector3d& r_A,
                                   const Vector3d& r_D, double eps_imag, const SumControl& ctrl,
                                   EdgeNormalization edges) {
  const double X = r_A.x() - r_D.x();
  detail::check_channel_inputs(p, geom, X, r_A.y(), r_A.z(), r_D.y(), r_D.z());
  if (!(eps_imag >= 1e-8 * p && eps_imag <= 1e-3 * p))
    throw DomainError("eps_imag must lie in [1e-8, 1e-3] p");
  const double pre = 2 / (std::numbers::pi * geom.a * geom.b);
  auto term = [&](const detail::Mode& md, bool) -> Tensor3d {
    const Vec9 v = integrate_mode(ModeIntegrand(p, geom, md.m, md.n, r_A, r_D, eps_imag));
    const bool edge = md.m == 0 || md.n == 0;
    const double weight = (edges == EdgeNormalization::Orthonormal && edge) ? 0.5 : 1.0;
    Tensor3d t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t(i, j) = pre * weight * v(3 * i + j);
    return t;
  };
  return detail::sum_channel_modes(p, geom, std::abs(X), ctrl, term, [](auto&&...) {}, true).total;
}

std::complex<double> coupling_channel_quadrature(double p, const ChannelGeometry& geom, const Vector3d& r_A,
                                                 const Vector3d& r_D, double eps_imag, Component component,
                                                 const SumControl& ctrl) {
  return channel_quadrature_tensor(p, geom, r_A, r_D, eps_imag, ctrl)(component.row, component.col);
}

}  // namespace dipolecav
