#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dipolecav {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Real 3-vector (positions, separations).
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// Complex 3-vector (transition dipoles).
template <typename Scalar>
using CVector3 = Eigen::Matrix<Complex<Scalar>, 3, 1>;

/// Complex 3x3 dipole coupling tensor, indexed V(i, j) with i the acceptor axis.
template <typename Scalar>
using Tensor3 = Eigen::Matrix<Complex<Scalar>, 3, 3>;

using Vector3d = Vector3<double>;
using CVector3d = CVector3<double>;
using Tensor3d = Tensor3<double>;

/// Cartesian index pair of a tensor component.
struct Component {
  int row = 0;
  int col = 0;

  friend bool operator==(const Component&, const Component&) = default;
};

/// Parses "xx", "yz", ... into a Component. Throws std::invalid_argument.
Component parse_component(const std::string& name);
std::string component_name(Component c);

/// Truncation and convergence policy shared by the mode sums and their
/// quadrature oracles.
struct SumControl {
  double rel_tol = 1e-10;
  /// NRD terms are summed at least until (decay constant) * X exceeds this.
  double exp_cutoff = 40.0;
  /// Hard cap on the mode index (planar n, channel max(m, n)).
  long n_max = 1'000'000;
  /// Relative distance of p^2 to an RD cutoff that is rejected as resonant.
  double tol_res = 1e-9;
  /// Imaginary shift of p used by the quadrature oracles, in units of p.
  double eps_imag = 1e-6;
};

/// Cavity coupling with its radiation-dominant / non-radiation-dominant split.
struct CouplingResult {
  Tensor3d rd = Tensor3d::Zero();
  Tensor3d nrd = Tensor3d::Zero();
  Tensor3d total = Tensor3d::Zero();
  long terms_used = 0;
  bool converged = false;
  /// Estimated magnitude of the neglected tail (Frobenius norm).
  double tail_bound = 0.0;
};

// Error hierarchy. Everything derives from Error so callers can catch once.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ZeroSeparation : public Error {
 public:
  using Error::Error;
};

class Resonant : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, CouplingResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const CouplingResult& partial() const noexcept { return partial_; }

 private:
  CouplingResult partial_;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double error_estimate)
      : Error(what), error_estimate_(error_estimate) {}
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

}  // namespace dipolecav
