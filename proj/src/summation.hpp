#pragma once

// Neumaier compensated accumulation of complex 3x3 tensors. The mode sums
// add thousands of terms of alternating sign; plain summation loses the
// symmetry V_yy = V_zz at the 1e-12 level.

#include <cmath>
#include <limits>

#include "dipolecav/types.hpp"

namespace dipolecav::detail {

class TensorAccumulator {
 public:
  void add(const Tensor3d& t) {
    for (int i = 0; i < 9; ++i) {
      add_real(sum_re_[i], comp_re_[i], t(i).real());
      add_real(sum_im_[i], comp_im_[i], t(i).imag());
    }
  }

  Tensor3d value() const {
    Tensor3d out;
    for (int i = 0; i < 9; ++i) out(i) = {sum_re_[i] + comp_re_[i], sum_im_[i] + comp_im_[i]};
    return out;
  }

 private:
  static void add_real(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }

  double sum_re_[9] = {}, sum_im_[9] = {};
  double comp_re_[9] = {}, comp_im_[9] = {};
};

/// Bound on the remainder of a sum whose terms shrink at least geometrically
/// with ratio r, given the largest of the most recent terms.
inline double geometric_tail(double recent, double ratio) {
  if (!(ratio < 1.0)) return std::numeric_limits<double>::infinity();
  return recent * ratio / (1.0 - ratio);
}

}  // namespace dipolecav::detail
