#pragma once

// Coupling tensor inside a perfect planar mirror cavity with plates at
// z = 0 and z = L, written as a sum over the discrete k_z = n pi / L.
// Terms with p > k_z propagate in the plane (RD, Hankel functions);
// the rest are evanescent (NRD, modified Bessel K).

#include <complex>
#include <vector>

#include "dipolecav/types.hpp"

namespace dipolecav {

struct PlanarGeometry {
  double L = 1.0;
  double permittivity = 1.0;
};

/// Full tensor at acceptor r_A and donor r_D, both strictly between the plates.
/// Arbitrary in-plane separations are rotated onto +x, evaluated, and rotated back.
CouplingResult coupling_planar(double p, const PlanarGeometry& geom, const Vector3d& r_A,
                               const Vector3d& r_D, const SumControl& ctrl = {});

struct PlanarTerm {
  long n = 0;
  double kz = 0.0;
  std::complex<double> value;
  bool is_rd = false;
};

/// Individual mode-sum terms of one component, in the canonical frame
/// (r_A - r_D = (X, 0, z_A - z_D), X > 0). Uses the same truncation as
/// coupling_planar, so the terms add up to its result.
std::vector<PlanarTerm> planar_sum_terms(double p, const PlanarGeometry& geom, double X, double z_A,
                                         double z_D, Component component,
                                         const SumControl& ctrl = {});

/// Independent check of coupling_planar: the radial k integral of each k_z
/// term is done numerically with p -> p + i eps_imag instead of by contour
/// integration. `eps_imag` is absolute and must lie in [1e-8, 1e-3] p.
/// Throws QuadratureFailure if an integral misses its tolerance.
Tensor3d planar_quadrature_tensor(double p, const PlanarGeometry& geom, const Vector3d& r_A,
                                  const Vector3d& r_D, double eps_imag,
                                  const SumControl& ctrl = {});

std::complex<double> coupling_planar_quadrature(double p, const PlanarGeometry& geom,
                                                const Vector3d& r_A, const Vector3d& r_D,
                                                double eps_imag, Component component,
                                                const SumControl& ctrl = {});

}  // namespace dipolecav
