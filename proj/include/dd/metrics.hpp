#ifndef DD_METRICS_HPP
#define DD_METRICS_HPP

#include "dd/types.hpp"

namespace dd {

struct MetricSeries {
  std::vector<double> x;
  std::vector<double> values;
  std::vector<double> stderrs;
  std::vector<long> n_trials;
  std::string x_label;
  std::string value_label;
  std::string metadata;
};

double ber(const std::vector<int>& tx_bits, const std::vector<int>& rx_bits);

/// Per-frame BICM mutual information from bit LLRs,
///   I = sum_levels (1 - E[log2(1 + e^{-(1-2b) LLR})]),
/// clipped to [0, 2] for QPSK.
double pragmatic_capacity(const Eigen::MatrixXd& llrs, const std::vector<int>& tx_bits);

/// Welch-averaged periodogram with Hann segments. Returns linear power
/// density on an fftshifted frequency axis.
MetricSeries psd(const TimeSignal& s, int nfft, double overlap);

/// Shift a linear PSD to dB with 0 dB at the mean over [f_lo, f_hi].
MetricSeries psd_normalize_db(const MetricSeries& linear, double f_lo, double f_hi);

/// Mean of a series over an x interval (inclusive).
double series_mean(const MetricSeries& s, double x_lo, double x_hi);

}  // namespace dd

#endif  // DD_METRICS_HPP
