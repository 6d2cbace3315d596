#ifndef DD_MODEM_HPP
#define DD_MODEM_HPP

#include "dd/channel.hpp"
#include "dd/pulses.hpp"
#include "dd/types.hpp"

namespace dd {

/// Practical chain configuration. cp_len counts symbol-spaced samples
/// (T/M ticks). The time window spans the CP and the frame; its plateau
/// is scaled to 1/sqrt(NT) so the matched-filtered chain has unit gain.
struct ModemConfig {
  DDGrid grid;
  BasisConfig basis;
  int cp_len = 0;
  bool normalize = true;

  double cp_duration() const { return cp_len * grid.delay_res(); }
};

ModemConfig make_modem_config(const BasisConfig& basis, int cp_len, bool normalize = true);

/// Transmit-side window (covers CP and frame; RRC roll-off is placed
/// symmetrically over that extent).
double modem_time_window(const ModemConfig& cfg, double t);

/// Sampled pulse-shaping filter FW_T with the excess bandwidth split
/// symmetrically around the nominal band.
struct ShapingFir {
  CVec taps;
  int center = 0;
};
ShapingFir modem_shaping_fir(const ModemConfig& cfg);

/// CP-prepend, upsample, shape, window: x_T (length MN) to s_T(t).
TimeSignal modem_tx_from_xt(const CVec& x_t, const ModemConfig& cfg);

/// Window, matched filter at the symbol lattice, CP removal: r(t) to y_T.
CVec modem_rx_to_yt(const TimeSignal& r, const ModemConfig& cfg);

TimeSignal transmit(const DDFrame& X, const ModemConfig& cfg);
DDFrame receive(const TimeSignal& r, const ModemConfig& cfg);

/// Post-matched-filter variance of unit-variance AWGN injected at the
/// receiver input (averaged over the frame lattice).
double modem_noise_gain(const ModemConfig& cfg);

struct EffectiveChannel {
  CMat H_T;   // y_T = H_T x_T
  CMat H_DD;  // (F_N (x) I_M) H_T (F_N^H (x) I_M)
  int band_half_width = 0;
};

/// Builds H_T by probing the discrete chain with unit symbol vectors and
/// derives H_DD through the DZT conjugation.
EffectiveChannel effective_time_matrix(const ModemConfig& cfg, const DDChannel& ch,
                                       int threads = 1);

/// vec/unvec DZT conjugation helpers (delay-fast ordering).
CMat dzt_conjugate(const CMat& H_T, const DDGrid& grid);

/// Symbol-wise IO for integer delay-Doppler channels (exact closed form
/// with the quasi-periodic wrap phase).
DDFrame io_integer_closed_form(const DDFrame& X, const DDChannel& ch);

/// Asymptotic symbol-wise IO driven by the truncated-basis ambiguity
/// function; entries with |A| below 1e-6 of the peak are pruned.
DDFrame io_asymptotic(const DDFrame& X, const DDChannel& ch, const BasisConfig& cfg);

}  // namespace dd

#endif  // DD_MODEM_HPP
