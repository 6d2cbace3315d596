#ifndef DD_OFDM_HPP
#define DD_OFDM_HPP

#include "dd/detect.hpp"
#include "dd/modem.hpp"

namespace dd {

/// DMT baseline on the same grid: M subcarriers over the nominal band,
/// N consecutive OFDM symbols, a cyclic prefix per symbol, sinc shaping
/// (rectangular frequency window) and a rectangular burst window.
struct OfdmConfig {
  DDGrid grid;
  int cp_per_symbol = 0;
  bool normalize = true;
  int fw_trunc_periods = 4;
};

OfdmConfig make_ofdm_config(const DDGrid& grid, int total_cp_budget);

/// Frequency-domain symbols (M x N, subcarrier x symbol) to time samples
/// (symbol-rate vector of length M*N, CP excluded).
CVec ofdm_xt_from_symbols(const DDFrame& S);
DDFrame ofdm_symbols_from_xt(const CVec& x_t, const DDGrid& grid);

TimeSignal ofdm_tx_from_xt(const CVec& x_t, const OfdmConfig& cfg);
CVec ofdm_rx_to_yt(const TimeSignal& r, const OfdmConfig& cfg);

TimeSignal ofdm_transmit(const DDFrame& S, const OfdmConfig& cfg);
DDFrame ofdm_receive(const TimeSignal& r, const OfdmConfig& cfg);

double ofdm_noise_gain(const OfdmConfig& cfg);

/// Probes the time-sample channel matrix of the DMT chain.
EffectiveChannel ofdm_effective_matrix(const OfdmConfig& cfg, const DDChannel& ch,
                                       int threads = 1);

/// Block-DFT transform pair for cross-domain detection on the baseline.
DomainTransform ofdm_transform(const DDGrid& grid);

}  // namespace dd

#endif  // DD_OFDM_HPP
