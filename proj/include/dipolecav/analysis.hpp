#pragma once

// Geometry dispatch, separation sweeps and local power-law exponents.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "dipolecav/channel.hpp"
#include "dipolecav/planar.hpp"
#include "dipolecav/types.hpp"

namespace dipolecav {

struct Free3D {
  double permittivity = 1.0;
};

/// Two-dimensional baseline, a slab of the given width.
struct Free2D {
  double width = 1.0;
  double permittivity = 1.0;
};

/// One-dimensional baseline, a wire of cross-section a x b.
struct Free1D {
  double a = 1.0;
  double b = 1.0;
  double permittivity = 1.0;
};

using Geometry = std::variant<Free3D, Free2D, Free1D, PlanarGeometry, ChannelGeometry>;

std::string geometry_name(const Geometry& g);

/// Transverse placement. The acceptor sits at (X, y_A, z_A) and the donor at
/// (0, y_D, z_D); X is the swept separation.
struct Placement {
  double y_A = 0.0, z_A = 0.0;
  double y_D = 0.0, z_D = 0.0;
};

/// One evaluation at separation X.
///  - Free3D: rd holds the donor-emits ordering, nrd the acceptor-emits one.
///  - Free2D: only zz is populated; Free1D: yy and zz.
CouplingResult evaluate(const Geometry& g, double p, const Placement& where, double X, const SumControl& ctrl = {});

/// Free-space tensor for the same separation vector as `evaluate` uses.
Tensor3d free_reference(double p, const Placement& where, double X, double permittivity = 1.0);

std::vector<double> log_grid(double x_min, double x_max, std::size_t count);

struct ExponentSeries {
  std::vector<double> x;
  std::vector<double> n;  ///< NaN where the window held an invalid magnitude
  Component component;
};

/// n(X_k) = -d ln|V| / d ln X by least squares over `window` neighbouring
/// points (odd, >= 3), shifted to one side at the ends of the grid.
ExponentSeries local_exponent(const std::vector<double>& x, const std::vector<double>& magnitude, int window = 5,
                              Component component = {});

struct SweepSpec {
  Geometry geometry = Free3D{};
  double p = 1.0;
  Placement placement;
  double x_min = 0.01, x_max = 100.0;
  std::size_t count = 100;
  std::vector<Component> components;
  SumControl ctrl;
  int window = 5;
  /// 0 means DIPOLECAV_THREADS or hardware concurrency.
  unsigned threads = 1;
};

struct SweepResult {
  std::vector<double> x;
  std::vector<CouplingResult> values;
  /// "ok", "resonant", "not_converged", "zero_separation", "domain_error" or "error".
  std::vector<std::string> status;
  std::vector<Component> components;
  std::vector<ExponentSeries> exponents;  ///< parallel to components

  bool all_ok() const;
};

/// Evaluates every grid point independently. Output order follows the grid
/// whatever the thread count, and failed points are recorded, not thrown.
SweepResult run_sweep(const SweepSpec& spec);

struct RatioSeries {
  std::vector<double> x;
  std::vector<double> ratio;
  std::vector<std::string> status;
};

/// |V_c(cavity)| / |V_c(free 3D)| with identical p, permittivity and separation.
RatioSeries enhancement_ratio(const Geometry& g, double p, const Placement& where, const std::vector<double>& x_grid,
                              Component component, const SumControl& ctrl = {});

unsigned resolve_threads(unsigned requested);

}  // namespace dipolecav
