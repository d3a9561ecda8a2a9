#pragma once

// Coupling tensor inside a perfectly conducting rectangular channel with
// walls at y = 0, a and z = 0, b, as a double sum over guided modes
// (m, n) with k_y = m pi / a, k_z = n pi / b. Modes with p > k_eta
// propagate along x (RD); the others decay (NRD).

#include <complex>
#include <optional>
#include <vector>

#include "dipolecav/types.hpp"

namespace dipolecav {

struct ChannelGeometry {
  double a = 1.0;
  double b = 1.0;
  double permittivity = 1.0;
};

/// Full tensor at acceptor r_A and donor r_D inside the channel. All
/// nine components come from the closed-form mode sums.
CouplingResult coupling_channel(double p, const ChannelGeometry& geom, const Vector3d& r_A,
                                const Vector3d& r_D, const SumControl& ctrl = {});

/// sin/cos of k_y y and k_z z at both dipoles.
struct ModeProfiles {
  double syA = 1, cyA = 1, szA = 1, czA = 1;
  double syD = 1, cyD = 1, szD = 1, czD = 1;
};

/// One closed-form summand for arbitrary (k_y, k_z), X signed. The RD/NRD
/// branch follows the sign of p^2 - k_eta^2 unless forced.
Tensor3d channel_mode_term(double p, const ChannelGeometry& geom, double X, double ky, double kz,
                           const ModeProfiles& profiles, std::optional<bool> is_rd = std::nullopt);

struct ChannelTerm {
  long m = 0, n = 0;
  double k_eta = 0.0;
  std::complex<double> value;
  bool is_rd = false;
};

/// Terms of one component in summation order (shells of increasing k_eta).
/// `X` is the signed separation x_A - x_D.
std::vector<ChannelTerm> channel_sum_terms(double p, const ChannelGeometry& geom, double X,
                                           double y_A, double z_A, double y_D, double z_D,
                                           Component component, const SumControl& ctrl = {});

/// Weight of the edge modes (m = 0 or n = 0) in the mode-function oracle.
/// Uniform uses the same 2/sqrt(ab) amplitude for every mode, which is what
/// the closed forms assume; Orthonormal normalises the edge modes properly,
/// halving their contribution.
enum class EdgeNormalization { Uniform, Orthonormal };

/// Mode-function oracle: for every (m, n) the integrand over k_x is built
/// from the TE and TM field profiles and both time orderings, with
/// p -> p + i eps_imag, and integrated numerically.
Tensor3d channel_quadrature_tensor(double p, const ChannelGeometry& geom, const Vector3d& r_A,
                                   const Vector3d& r_D, double eps_imag, const SumControl& ctrl = {},
                                   EdgeNormalization edges = EdgeNormalization::Uniform);

std::complex<double> coupling_channel_quadrature(double p, const ChannelGeometry& geom,
                                                 const Vector3d& r_A, const Vector3d& r_D,
                                                 double eps_imag, Component component,
                                                 const SumControl& ctrl = {});

/// The k_x integrand of one mode, folded onto k_x >= 0 and with its
/// non-decaying contact part removed. Exposed for tests.
Eigen::Matrix<std::complex<double>, 9, 1> channel_mode_integrand(
    double p, const ChannelGeometry& geom, long m, long n, const Vector3d& r_A, const Vector3d& r_D,
    double eps_imag, double k_x);

}  // namespace dipolecav
