#include "dd/metrics.hpp"

#include <cmath>

#include "dd/fft.hpp"

namespace dd {

double ber(const std::vector<int>& tx_bits, const std::vector<int>& rx_bits) {
  if (tx_bits.size() != rx_bits.size())
    throw DimensionError("ber: bit streams must have equal length");
  if (tx_bits.empty()) return 0.0;
  long err = 0;
  for (size_t i = 0; i < tx_bits.size(); ++i) err += (tx_bits[i] != rx_bits[i]) ? 1 : 0;
  return static_cast<double>(err) / static_cast<double>(tx_bits.size());
}

double pragmatic_capacity(const Eigen::MatrixXd& llrs, const std::vector<int>& tx_bits) {
  const int n = static_cast<int>(llrs.rows());
  const int levels = static_cast<int>(llrs.cols());
  if (static_cast<int>(tx_bits.size()) != n * levels)
    throw DimensionError("pragmatic_capacity: LLRs not aligned to bits");
  const double log2e = 1.0 / std::log(2.0);
  double info = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int b = 0; b < levels; ++b) {
      const double sgn = 1.0 - 2.0 * tx_bits[s * levels + b];
      const double a = -sgn * llrs(s, b);
      // log2(1 + e^a), stable for large |a|
      const double l2 = (a > 30.0) ? a * log2e : std::log1p(std::exp(a)) * log2e;
      info += 1.0 - l2;
    }
  }
  info /= n;
  return std::min(std::max(info, 0.0), static_cast<double>(levels));
}

MetricSeries psd(const TimeSignal& s, int nfft, double overlap) {
  if (s.size() < nfft) throw DimensionError("psd: signal shorter than nfft");
  if (overlap < 0.0 || overlap >= 1.0) throw DimensionError("psd: overlap must be in [0,1)");
  const int hop = std::max(1, static_cast<int>(nfft * (1.0 - overlap)));

  std::vector<double> hann(nfft);
  double wpow = 0.0;
  for (int i = 0; i < nfft; ++i) {
    hann[i] = 0.5 * (1.0 - std::cos(2.0 * pi * i / nfft));
    wpow += hann[i] * hann[i];
  }

  std::vector<double> acc(nfft, 0.0);
  int segs = 0;
  CVec buf(nfft);
  for (int start = 0; start + nfft <= s.size(); start += hop) {
    for (int i = 0; i < nfft; ++i) buf[i] = s.samples[start + i] * hann[i];
    dft_inplace(buf, false);
    for (int i = 0; i < nfft; ++i) acc[i] += std::norm(buf[i]);
    ++segs;
  }

  // density normalization: sum P(f) df = mean power for white input
  const double scale = 1.0 / (segs * wpow * s.sample_rate);

  MetricSeries out;
  out.x_label = "frequency_hz";
  out.value_label = "psd";
  out.n_trials.assign(nfft, segs);
  out.x.resize(nfft);
  out.values.resize(nfft);
  out.stderrs.assign(nfft, 0.0);
  const double df = s.sample_rate / nfft;
  for (int i = 0; i < nfft; ++i) {
    const int k = (i + nfft / 2) % nfft;  // fftshift
    out.x[i] = (i - nfft / 2) * df;
    out.values[i] = acc[k] * scale;
  }
  return out;
}

MetricSeries psd_normalize_db(const MetricSeries& linear, double f_lo, double f_hi) {
  MetricSeries out = linear;
  out.value_label = "psd_db";
  double ref = 0.0;
  int count = 0;
  for (size_t i = 0; i < linear.x.size(); ++i)
    if (linear.x[i] >= f_lo && linear.x[i] <= f_hi) {
      ref += linear.values[i];
      ++count;
    }
  if (count == 0) throw DimensionError("psd_normalize_db: empty reference band");
  ref /= count;
  for (auto& v : out.values) v = 10.0 * std::log10(std::max(v / ref, 1e-300));
  return out;
}

double series_mean(const MetricSeries& s, double x_lo, double x_hi) {
  double acc = 0.0;
  int count = 0;
  for (size_t i = 0; i < s.x.size(); ++i)
    if (s.x[i] >= x_lo && s.x[i] <= x_hi) {
      acc += s.values[i];
      ++count;
    }
  if (count == 0) throw DimensionError("series_mean: empty interval");
  return acc / count;
}

}  // namespace dd
