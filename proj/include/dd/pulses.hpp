#ifndef DD_PULSES_HPP
#define DD_PULSES_HPP

#include "dd/types.hpp"

namespace dd {

enum class WindowKind { Rect, RRC, Cosine };
enum class WindowDomain { Time, Frequency };

/// A finite-support window on [0, span]. `span` is seconds for Time
/// windows and Hz for Frequency windows. RRC means the root-raised-cosine
/// spectral profile (a smoothed rectangle with excess fraction beta);
/// Cosine is cos(x) truncated to the span. Power-normalized windows
/// satisfy integral |w|^2 = 1 over the support.
struct WindowSpec {
  WindowKind kind = WindowKind::Rect;
  WindowDomain domain = WindowDomain::Time;
  double span = 1.0;
  double beta = 0.0;
  bool power_normalized = true;

  bool periodic_kind() const { return kind != WindowKind::RRC; }
};

/// Window profile value at coordinate x (its own domain); 0 outside [0, span].
double window_value(const WindowSpec& w, double x);

/// Uniform samples of the window starting at `offset` with step
/// `rate_or_step`, covering the support.
std::vector<double> window_samples(const WindowSpec& w, double rate_or_step, double offset);

/// Time-domain realization FW_T(t) of a Frequency-domain window
/// (inverse Fourier transform, closed form per kind). `freq_shift`
/// translates the window band; the paper's one-sided [0, span] placement
/// corresponds to freq_shift = 0.
cplx fw_time_value(const WindowSpec& fw, double t, double freq_shift = 0.0);

struct AtomSpec {
  enum class Kind { Delta } kind = Kind::Delta;
};

/// Windows plus grid for building truncated DD basis functions. The time
/// window spans N_ext*T, the frequency window spans M_ext/T.
/// fw_trunc_periods bounds the support of the sampled FW_T pulse to
/// +-fw_trunc_periods*T around its center.
struct BasisConfig {
  DDGrid grid;
  AtomSpec atom;
  WindowSpec time_window;
  WindowSpec freq_window;
  int fw_trunc_periods = 4;
};

/// Builds a BasisConfig from window kinds. For RRC windows the extended
/// sizes grow to ceil(M(1+beta_f)) and ceil(N(1+beta_t)).
BasisConfig make_basis_config(int M, int N, double T, int osr,
                              WindowKind time_kind, double time_beta,
                              WindowKind freq_kind, double freq_beta);

/// Sampled truncated basis function in time: a train of FW_T pulses at
/// t = tau_l + nT modulated by the Doppler tone and shaped by TW_T.
TimeSignal pulsone_time(int l, int k, const BasisConfig& cfg);

/// Closed-form geometric sum sum_{l=0}^{K-1} e^{j2pi l x} with the
/// removable singularities resolved (returns K at integer x, exact 0
/// when Kx is integer but x is not).
cplx dirichlet_sum(int K, double x);

/// Truncated DD basis function for periodic windows via the
/// Dirichlet-kernel closed form; throws for RRC windows.
cplx truncated_basis_dd_closed_form(double tau, double nu, const BasisConfig& cfg);

/// output(t) = e^{j2pi nu0 (t - tau0)} * base(t - tau0); tau0 must lie on
/// the sample lattice.
TimeSignal tf_consistent_shift(const TimeSignal& base, double tau0, double nu0);

}  // namespace dd

#endif  // DD_PULSES_HPP
