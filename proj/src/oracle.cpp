#include "dipolecav/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace dipolecav {

namespace {

constexpr double kPi = std::numbers::pi;

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Distance of p^2 from the nearest cutoff (k pi / w)^2, relative to p^2, for p = 1.
double detuning(double width) {
  const double n = std::round(width / kPi);
  const double k = n * kPi / width;
  return std::abs(1 - k * k);
}

}  // namespace

double OracleCase::separation() const {
  if (std::holds_alternative<PlanarGeometry>(geometry)) return std::hypot(r_A.x() - r_D.x(), r_A.y() - r_D.y());
  return std::abs(r_A.x() - r_D.x());
}

std::vector<OracleCase> random_planar_cases(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<OracleCase> out;
  while (static_cast<int>(out.size()) < count) {
    const double L = uniform(rng, 0.6, 3.0) * kPi;
    if (detuning(L) < 1e-2) continue;
    const double zA = uniform(rng, 0.05, 0.95) * L, zD = uniform(rng, 0.05, 0.95) * L;
    const double X = log_uniform(rng, 0.1, 10.0), phi = uniform(rng, 0.0, 2 * kPi);
    const double x0 = uniform(rng, -1.0, 1.0), y0 = uniform(rng, -1.0, 1.0);
    out.push_back({PlanarGeometry{L, 1.0}, 1.0, Vector3d(x0 + X * std::cos(phi), y0 + X * std::sin(phi), zA),
                   Vector3d(x0, y0, zD)});
  }
  return out;
}

std::vector<OracleCase> random_channel_cases(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<OracleCase> out;
  while (static_cast<int>(out.size()) < count) {
    const double a = uniform(rng, 0.8, 2.0) * kPi, b = uniform(rng, 0.8, 2.0) * kPi;
    bool near = false;
    for (int m = 0; m <= 3; ++m)
      for (int n = 0; n <= 3; ++n) {
        const double k2 = std::pow(m * kPi / a, 2) + std::pow(n * kPi / b, 2);
        if ((m || n) && std::abs(1 - k2) < 1e-2) near = true;
      }
    if (near) continue;
    const double X = log_uniform(rng, 0.1, 10.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    const Vector3d r_D(uniform(rng, -1.0, 1.0), uniform(rng, 0.1, 0.9) * a, uniform(rng, 0.1, 0.9) * b);
    const Vector3d r_A(r_D.x() + X, uniform(rng, 0.1, 0.9) * a, uniform(rng, 0.1, 0.9) * b);
    out.push_back({ChannelGeometry{a, b, 1.0}, 1.0, r_A, r_D});
  }
  return out;
}

OracleComparison compare_with_oracle(const OracleCase& c, const SumControl& closed_ctrl,
                                     const SumControl& oracle_ctrl) {
  OracleComparison out;
  const double eps = oracle_ctrl.eps_imag * c.p;
  if (const auto* pg = std::get_if<PlanarGeometry>(&c.geometry)) {
    out.closed = coupling_planar(c.p, *pg, c.r_A, c.r_D, closed_ctrl).total;
    const Tensor3d q1 = planar_quadrature_tensor(c.p, *pg, c.r_A, c.r_D, eps, oracle_ctrl);
    const Tensor3d q2 = planar_quadrature_tensor(c.p, *pg, c.r_A, c.r_D, eps / 2, oracle_ctrl);
    out.quadrature = 2.0 * q2 - q1;
  } else if (const auto* cg = std::get_if<ChannelGeometry>(&c.geometry)) {
    out.closed = coupling_channel(c.p, *cg, c.r_A, c.r_D, closed_ctrl).total;
    const Tensor3d q1 = channel_quadrature_tensor(c.p, *cg, c.r_A, c.r_D, eps, oracle_ctrl);
    const Tensor3d q2 = channel_quadrature_tensor(c.p, *cg, c.r_A, c.r_D, eps / 2, oracle_ctrl);
    out.quadrature = 2.0 * q2 - q1;
  } else {
    throw DomainError("oracle comparison is defined for planar and channel geometries");
  }
  const double scale = out.closed.norm();
  for (int i = 0; i < 9; ++i) {
    const double ref = std::abs(out.closed(i));
    out.rel_error(i) = ref > 1e-12 * scale ? std::abs(out.quadrature(i) - out.closed(i)) / ref
                                           : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace dipolecav
