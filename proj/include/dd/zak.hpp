#ifndef DD_ZAK_HPP
#define DD_ZAK_HPP

#include "dd/types.hpp"

namespace dd {

/// Exact discrete Zak transform of a length-M*N vector:
///   out[l,k] = (1/sqrt(N)) sum_n x[l + n*M] e^{-j2pi nk/N}.
DDFrame dzt(const CVec& x, const DDGrid& grid);
DDFrame dzt(const TimeSignal& x, const DDGrid& grid);

/// Exact inverse: out[l + n*M] = (1/sqrt(N)) sum_k X[l,k] e^{+j2pi nk/N}.
CVec idzt(const DDFrame& X);

struct WrapResult {
  int l;
  int k;
  cplx phase;
};

/// Folds arbitrary integer DD indices into the fundamental rectangle.
/// Each delay fold of +-M contributes a phase e^{+-j2pi k_wrapped/N};
/// Doppler folds are free of phase.
WrapResult quasi_periodic_wrap(int l, int k, const DDGrid& grid);

/// Sampled approximation of the continuous Zak transform,
///   Z(tau,nu) = sqrt(T) sum_{|k|<=replicas} x(tau + kT) e^{-j2pi k nu T},
/// on the lattice tau step T/(M*osr) (over tau_periods periods) and nu
/// step 1/(N_ext*T) covering one Doppler period.
DDSampledSurface zak_time_sampled(const TimeSignal& x, const DDGrid& grid,
                                  int replicas, int tau_periods = 1);

/// Inverse of zak_time_sampled to discretization tolerance: reconstructs
/// count samples starting at t0 via the Riemann sum of Eq-style
/// integration over one Doppler period, using quasi-periodicity to reach
/// times outside the stored fundamental rectangle.
TimeSignal izak_time(const DDSampledSurface& Z, double t0, int count);

}  // namespace dd

#endif  // DD_ZAK_HPP
