#pragma once

// Seeded random configurations and closed-form vs quadrature comparisons,
// shared by the CLI `oracle` subcommand and the test suite.

#include <cstdint>
#include <vector>

#include "dipolecav/analysis.hpp"

namespace dipolecav {

struct OracleCase {
  Geometry geometry;
  double p = 1.0;
  Vector3d r_A = Vector3d::Zero();
  Vector3d r_D = Vector3d::Zero();

  /// Separation that sets the scale: in-plane for planar, axial for channel.
  double separation() const;
};

/// Planar cases: L in [0.6, 3] pi/p kept 1e-2 away from resonance, heights in
/// (0.05, 0.95) L, in-plane separation log-uniform in [0.1, 10]/p at a random angle.
std::vector<OracleCase> random_planar_cases(std::uint64_t seed, int count);

/// Channel cases: a, b in [0.8, 2] pi/p away from resonance, transverse
/// positions in (0.1, 0.9) of each width, |x_A - x_D| log-uniform in [0.1, 10]/p.
std::vector<OracleCase> random_channel_cases(std::uint64_t seed, int count);

struct OracleComparison {
  Tensor3d closed;
  Tensor3d quadrature;  ///< Richardson-extrapolated in eps_imag
  Tensor3d rel_error;   ///< real part used; NaN for components that vanish in the closed form
};

/// Evaluates both paths. The quadrature is run at eps and eps/2 and
/// extrapolated linearly to eps = 0 (eps = ctrl.eps_imag * p).
OracleComparison compare_with_oracle(const OracleCase& c, const SumControl& closed_ctrl = {},
                                     const SumControl& oracle_ctrl = {});

}  // namespace dipolecav
