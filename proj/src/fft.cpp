#include "dd/fft.hpp"

namespace dd {

namespace {

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(CVec& a, bool inverse) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    cplx wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

void dft_direct(CVec& a, bool inverse) {
  const size_t n = a.size();
  CVec out(n);
  const double sgn = inverse ? 1.0 : -1.0;
  for (size_t k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (size_t m = 0; m < n; ++m) {
      double ang = sgn * 2.0 * pi * static_cast<double>(k * m % n) / static_cast<double>(n);
      acc += a[m] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  a = std::move(out);
}

}  // namespace

void dft_inplace(CVec& x, bool inverse) {
  if (x.empty()) return;
  if (is_pow2(x.size()))
    fft_radix2(x, inverse);
  else
    dft_direct(x, inverse);
}

CVec dft(const CVec& x, bool inverse) {
  CVec y = x;
  dft_inplace(y, inverse);
  return y;
}

CVec convolve(const CVec& x, const CVec& taps) {
  if (x.empty() || taps.empty()) return {};
  CVec y(x.size() + taps.size() - 1, cplx(0.0, 0.0));
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == cplx(0.0, 0.0)) continue;
    const cplx xi = x[i];
    for (size_t k = 0; k < taps.size(); ++k) y[i + k] += xi * taps[k];
  }
  return y;
}

}  // namespace dd
