#ifndef DD_FFT_HPP
#define DD_FFT_HPP

#include "dd/types.hpp"

namespace dd {

/// In-place forward DFT, X[k] = sum_n x[n] e^{-j2pi nk/K}. Radix-2 when
/// the length is a power of two, direct evaluation otherwise.
void dft_inplace(CVec& x, bool inverse = false);

CVec dft(const CVec& x, bool inverse = false);

/// Linear convolution of a signal with an FIR tap vector.
CVec convolve(const CVec& x, const CVec& taps);

}  // namespace dd

#endif  // DD_FFT_HPP
