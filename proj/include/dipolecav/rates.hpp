#pragma once

// Relative rate kernels built from a coupling tensor. Only the dependence on
// separation and orientation is produced; spectral overlap and the 2 pi / hbar
// prefactor are left out.

#include <complex>

#include "dipolecav/types.hpp"

namespace dipolecav {

struct DipoleSpecies {
  Vector3d position = Vector3d::Zero();
  CVector3d moment = CVector3d::Zero();
};

enum class Process { RET, ETU, EP };

struct RateKernel {
  std::complex<double> amplitude;
  double kernel = 0.0;  ///< |amplitude|^2
  Process process = Process::RET;
};

/// M = sum_ij mu_A,i V_ij mu_D,j. Plain bilinear form, no conjugation.
template <typename Scalar>
Complex<Scalar> amplitude(const CVector3<Scalar>& mu_A, const Tensor3<Scalar>& V, const CVector3<Scalar>& mu_D) {
  return (mu_A.transpose() * V * mu_D)(0, 0);
}

/// RET or ETU between one donor and one acceptor. V must be the tensor
/// evaluated at (acceptor.position, donor.position).
RateKernel pair_rate_kernel(Process process, const DipoleSpecies& donor, const DipoleSpecies& acceptor,
                            const Tensor3d& V);

/// Energy pooling: two donors feeding one acceptor through V1 and V2.
/// The kernel is |M1|^2 |M2|^2, fourth power in the coupling.
RateKernel pooling_rate_kernel(const DipoleSpecies& donor1, const DipoleSpecies& donor2,
                               const DipoleSpecies& acceptor, const Tensor3d& V1, const Tensor3d& V2);

}  // namespace dipolecav
