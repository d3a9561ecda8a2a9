#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dipolecav/freespace.hpp"
#include "dipolecav/oracle.hpp"
#include "dipolecav/planar.hpp"

using namespace dipolecav;

namespace {

constexpr double pi = std::numbers::pi;

Tensor3d planar_total(double L, double X, double zA, double zD, const SumControl& ctrl = {}) {
  return coupling_planar(1.0, PlanarGeometry{L}, Vector3d(X, 0, zA), Vector3d(0, 0, zD), ctrl).total;
}

double exponent(int i, double L, double X) {
  const double h = 1.01;
  const double a = std::abs(planar_total(L, X / h, L / 2, L / 2)(i, i));
  const double b = std::abs(planar_total(L, X * h, L / 2, L / 2)(i, i));
  return -std::log(b / a) / (2 * std::log(h));
}

}  // namespace

TEST_CASE("V_xx vanishes as a dipole approaches a plate") {
  const double L = 1.1 * pi;
  const double inside = std::abs(planar_total(L, 1.0, L / 2, L / 2)(0, 0));
  CHECK(std::abs(planar_total(L, 1.0, 1e-9 * L, L / 2)(0, 0)) < 1e-7 * inside);
  CHECK(std::abs(planar_total(L, 1.0, L / 2, L * (1 - 1e-9))(0, 0)) < 1e-7 * inside);
}

TEST_CASE("L = 1.1 pi/p centred: near 1/X^3, far 1/sqrt(X)") {
  const double L = 1.1 * pi;
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(exponent(i, L, 0.01) - 3.0) < 0.1);
    CHECK(std::abs(exponent(i, L, 100) - 0.5) < 0.1);
  }
}

TEST_CASE("RD/NRD dominance at short and long range") {
  const double L = 1.1 * pi;
  const auto nearv = coupling_planar(1.0, {L}, Vector3d(0.01, 0, L / 2), Vector3d(0, 0, L / 2));
  const auto farv = coupling_planar(1.0, {L}, Vector3d(100, 0, L / 2), Vector3d(0, 0, L / 2));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(nearv.nrd(i, i)) > 10 * std::abs(nearv.rd(i, i)));
    CHECK(std::abs(farv.rd(i, i)) > 10 * std::abs(farv.nrd(i, i)));
  }
}

TEST_CASE("the k_z = 0 term of V_zz is twice the 2D coupling") {
  for (double L : {0.5 * pi, 1.1 * pi, 3.3 * pi})
    for (double X : {0.05, 1.0, 40.0}) {
      const auto terms = planar_sum_terms(1.0, {L}, X, 0.3 * L, 0.6 * L, {2, 2});
      REQUIRE(terms.front().n == 0);
      const auto v2d = coupling_free2d(1.0, X, L);
      CHECK(std::abs(terms.front().value - 2.0 * v2d) <= 1e-12 * std::abs(v2d));
    }
}

TEST_CASE("term listing") {
  const double L = 1.1 * pi;
  SUBCASE("one propagating term per component") {
    for (Component c : {Component{0, 0}, Component{1, 1}, Component{2, 2}}) {
      const auto terms = planar_sum_terms(1.0, {L}, 2.0, 0.5 * L, 0.5 * L, c);
      double scale = 0;
      for (const auto& t : terms) scale = std::max(scale, std::abs(t.value));
      int rd = 0;
      for (const auto& t : terms) rd += (t.is_rd && std::abs(t.value) > 1e-12 * scale);
      CHECK(rd == 1);
      for (const auto& t : terms) CHECK(t.is_rd == (t.kz < 1.0));
    }
  }
  SUBCASE("NRD terms decay monotonically once k_z X > 5") {
    // centred dipoles: the mode weights are 1 (odd n) or vanish (even n)
    const double X = 0.7;
    const auto terms = planar_sum_terms(1.0, {L}, X, 0.5 * L, 0.5 * L, {0, 0});
    double prev = INFINITY;
    for (const auto& t : terms)
      if (!t.is_rd && t.kz * X > 5 && t.n % 2 == 1) {
        CHECK(std::abs(t.value) < prev);
        prev = std::abs(t.value);
      }
  }
  SUBCASE("terms add up to coupling_planar") {
    const double X = 0.4, zA = 0.21 * L, zD = 0.77 * L;
    const Tensor3d V = planar_total(L, X, zA, zD);
    for (Component c : {Component{0, 0}, Component{1, 1}, Component{2, 2}, Component{0, 2}, Component{2, 0}}) {
      std::complex<double> s = 0;
      for (const auto& t : planar_sum_terms(1.0, {L}, X, zA, zD, c)) s += t.value;
      CHECK(std::abs(s - V(c.row, c.col)) <= 1e-14 * V.norm());
    }
  }
}

TEST_CASE("near-field agreement with free space in a 0.9 pi/p cavity") {
  const double L = 0.9 * pi, z = L / 2;
  for (double X : {0.01, 0.03 * L}) {
    const Tensor3d V = planar_total(L, X, z, z);
    const Tensor3d F = coupling_free3d(1.0, Vector3d(X, 0, 0)).total;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) CHECK(std::abs(V(i, j) / F(i, j) - 1.0) < 0.05);
        else CHECK(std::abs(V(i, j)) <= 1e-12 * V.norm());
      }
  }
}

TEST_CASE("wall crossover for z = L/20") {
  const double L = 0.9 * pi, z = L / 20;
  auto ratio = [&](double X) {
    return std::abs(planar_total(L, X, z, z)(0, 0)) / std::abs(coupling_free3d(1.0, Vector3d(X, 0, 0)).total(0, 0));
  };
  for (double f : {0.01, 0.03, 0.1, 0.2, 0.33}) {
    const double r = ratio(f * z);
    CHECK(r >= 0.8);
    CHECK(r <= 1.25);
  }
  bool left = false;
  for (double f = 3; f <= 10; f += 0.5) {
    const double r = ratio(f * z);
    left = left || r < 0.5 || r > 2;
  }
  CHECK(left);
}

TEST_CASE("swapping donor and acceptor transposes the tensor") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95), s(-2, 2);
  for (int k = 0; k < 8; ++k) {
    const PlanarGeometry g{(0.7 + 2 * u(rng)) * pi};
    const Vector3d a(s(rng), s(rng), u(rng) * g.L), d(s(rng), s(rng), u(rng) * g.L);
    SumControl ctrl;
    ctrl.tol_res = 1e-6;
    const Tensor3d ad = coupling_planar(1.0, g, a, d, ctrl).total;
    const Tensor3d da = coupling_planar(1.0, g, d, a, ctrl).total;
    CHECK((ad - da.transpose()).norm() <= 1e-12 * ad.norm());
  }
}

TEST_CASE("in-plane rotation covariance") {
  const PlanarGeometry g{1.7 * pi};
  const Vector3d a(0.8, 0.0, 0.3 * g.L), d(0, 0, 0.6 * g.L);
  const Tensor3d V = coupling_planar(1.0, g, a, d).total;
  for (double phi : {0.3, 1.9, 4.0}) {
    const Eigen::Matrix3d R = Eigen::AngleAxisd(phi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    const Tensor3d W = coupling_planar(1.0, g, R * a, R * d).total;
    const Tensor3d expect = R.cast<std::complex<double>>() * V * R.transpose().cast<std::complex<double>>();
    CHECK((W - expect).norm() <= 1e-13 * V.norm());
  }
}

TEST_CASE("truncation soundness") {
  const double L = 1.3 * pi;
  SumControl base;
  SumControl capped = base;
  capped.n_max = 2 * base.n_max;
  SumControl longer = base;
  longer.exp_cutoff = 2 * base.exp_cutoff;
  for (double X : {0.02, 0.5, 5.0}) {
    const auto a = coupling_planar(1.0, {L}, Vector3d(X, 0, 0.3 * L), Vector3d(0, 0, 0.45 * L), base);
    const auto b = coupling_planar(1.0, {L}, Vector3d(X, 0, 0.3 * L), Vector3d(0, 0, 0.45 * L), capped);
    const auto c = coupling_planar(1.0, {L}, Vector3d(X, 0, 0.3 * L), Vector3d(0, 0, 0.45 * L), longer);
    CHECK(a.converged);
    CHECK(a.tail_bound <= base.rel_tol * a.total.norm());
    CHECK((a.total - b.total).norm() <= base.rel_tol * a.total.norm());
    CHECK((a.total - c.total).norm() <= base.rel_tol * a.total.norm());
    CHECK((a.total - (a.rd + a.nrd)).norm() <= 1e-15 * a.total.norm());
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(planar_total(pi, 1.0, pi / 2, pi / 2), Resonant);
  CHECK_THROWS_AS(planar_total(1.1 * pi, 0.0, 1.0, 2.0), ZeroSeparation);
  CHECK_THROWS_AS(planar_total(1.1 * pi, 1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(planar_total(1.1 * pi, 1.0, 1.0, 4.0), DomainError);
  SumControl tiny;
  tiny.n_max = 10;
  try {
    planar_total(1.1 * pi, 0.01, 1.0, 1.0, tiny);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    CHECK_FALSE(e.partial().converged);
    CHECK(e.partial().terms_used > 0);
  }
}

TEST_CASE("closed form against the radial-integral oracle on 10 seeded cases") {
  const auto cases = random_planar_cases(20251019, 10);
  double worst = 0;
  for (const auto& c : cases) {
    const auto cmp = compare_with_oracle(c);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double e = cmp.rel_error(i, j).real();
        if (std::isnan(e)) CHECK(std::abs(cmp.quadrature(i, j)) <= 1e-6 * cmp.closed.norm());
        else worst = std::max(worst, e);
      }
  }
  MESSAGE("max relative error " << worst);
  CHECK(worst <= 1e-4);
}

TEST_CASE("oracle: Richardson extrapolation in eps is stable under halving") {
  const PlanarGeometry g{1.37 * pi};
  const Vector3d a(0.9, 0.2, 0.31 * g.L), d(0, 0, 0.62 * g.L);
  const double e = 1e-6;
  const Tensor3d q1 = planar_quadrature_tensor(1.0, g, a, d, e);
  const Tensor3d q2 = planar_quadrature_tensor(1.0, g, a, d, e / 2);
  const Tensor3d q4 = planar_quadrature_tensor(1.0, g, a, d, e / 4);
  const Tensor3d r1 = 2.0 * q2 - q1, r2 = 2.0 * q4 - q2;
  CHECK((r1 - r2).norm() <= 1e-5 * r2.norm());
  CHECK(coupling_planar_quadrature(1.0, g, a, d, e, {0, 0}) == q1(0, 0));
  CHECK_THROWS_AS(planar_quadrature_tensor(1.0, g, a, d, 1e-2), DomainError);
}
