#include "dipolecav/rates.hpp"

#include <cmath>
#include <complex>

namespace dipolecav {

namespace {
void require_moment(const DipoleSpecies& s, const char* who) {
  if (s.moment.isZero(0.0)) throw DomainError(std::string(who) + " has a zero transition moment");
  if (!s.moment.allFinite()) throw DomainError(std::string(who) + " has a non-finite transition moment");
}
}  // namespace

RateKernel pair_rate_kernel(Process process, const DipoleSpecies& donor, const DipoleSpecies& acceptor,
                            const Tensor3d& V) {
  if (process == Process::EP) throw DomainError("pair_rate_kernel handles RET and ETU; use pooling_rate_kernel for EP");
  require_moment(donor, "donor");
  require_moment(acceptor, "acceptor");
  const auto M = amplitude(acceptor.moment, V, donor.moment);
  return {M, std::norm(M), process};
}

RateKernel pooling_rate_kernel(const DipoleSpecies& donor1, const DipoleSpecies& donor2,
                               const DipoleSpecies& acceptor, const Tensor3d& V1, const Tensor3d& V2) {
  require_moment(donor1, "donor 1");
  require_moment(donor2, "donor 2");
  require_moment(acceptor, "acceptor");
  const auto M1 = amplitude(acceptor.moment, V1, donor1.moment);
  const auto M2 = amplitude(acceptor.moment, V2, donor2.moment);
  return {M1 * M2, std::norm(M1) * std::norm(M2), Process::EP};
}

}  // namespace dipolecav
