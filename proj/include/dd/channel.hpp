#ifndef DD_CHANNEL_HPP
#define DD_CHANNEL_HPP

#include <cstdint>
#include <optional>

#include "dd/types.hpp"

namespace dd {

/// Deterministic RNG used for channels and noise. Gaussian draws use an
/// explicit Box-Muller so sequences do not depend on the standard
/// library implementation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  uint64_t next_u64();
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  cplx gaussian(double variance);      // circularly-symmetric complex

  /// Stable derivation of per-trial seeds from a master seed.
  static uint64_t derive(uint64_t master, uint64_t stream);

 private:
  uint64_t state_;
};

struct ChannelPath {
  cplx gain;
  long delay_ticks = 0;  // multiples of T/(M*osr)
  double doppler_hz = 0.0;
};

/// Sparse P-path DD channel. Delays are kept on the sample lattice;
/// Dopplers are continuous.
struct DDChannel {
  std::vector<ChannelPath> paths;
  double tick_dt = 0.0;  // seconds per delay tick
  uint64_t seed = 0;

  double delay_of(size_t p) const { return paths[p].delay_ticks * tick_dt; }
  long max_delay_ticks() const {
    long m = 0;
    for (const auto& p : paths) m = std::max(m, p.delay_ticks);
    return m;
  }
  /// DD-resolution units of the grid that created the channel.
  double delay_index(const DDGrid& g, size_t p) const {
    return paths[p].delay_ticks * tick_dt / g.delay_res();
  }
  double doppler_index(const DDGrid& g, size_t p) const {
    return paths[p].doppler_hz / g.doppler_res();
  }
  /// Integer-lattice channel relative to grid resolutions?
  bool integer_on(const DDGrid& g, double tol = 1e-9) const;
};

struct NoiseSpec {
  double N0 = 0.0;  // variance per complex sample
  uint64_t rng_seed = 1;
};

/// P paths with delays l_p*T/M, l_p uniform on [0, l_max] (continuous if
/// fractional, integers otherwise) quantized to the sample lattice,
/// Dopplers k_p/(NT) with k_p uniform on [-k_max/2, k_max/2], and gains
/// i.i.d. CN(0, 1/P).
DDChannel sample_random_channel(int P, int l_max, int k_max, const DDGrid& grid,
                                bool fractional, uint64_t rng_seed);

/// Strict inequalities of the crystallization condition: delay spread
/// < T and Doppler spread < 1/T.
bool crystallization_check(const DDChannel& ch, double T);

/// r(t) = sum_p h_p e^{j2pi nu_p (t - tau_p)} s(t - tau_p); output grows
/// by the maximum path delay.
TimeSignal apply_time_channel(const TimeSignal& s, const DDChannel& ch);

/// Same action with the symbol vector treated as circular (reduced-CP
/// equivalent): sample index wraps modulo the signal length while the
/// Doppler phase ramp stays linear in absolute time.
TimeSignal apply_time_channel_circular(const TimeSignal& s, const DDChannel& ch);

/// Twisted convolution on a DD frame (requires an integer-lattice
/// channel); out-of-rectangle arguments fold quasi-periodically.
DDFrame twisted_convolve_dd(const DDFrame& S, const DDChannel& ch);

/// Twisted convolution on a sampled surface; path delays must be lattice
/// ticks and Dopplers multiples of the surface Doppler step.
DDSampledSurface twisted_convolve_dd(const DDSampledSurface& S, const DDChannel& ch);

TimeSignal add_awgn(const TimeSignal& s, const NoiseSpec& noise);

/// Reproducible structured-text form (one path per line: re, im, ticks, hz).
std::string channel_to_record(const DDChannel& ch);
DDChannel channel_from_record(const std::string& text);

}  // namespace dd

#endif  // DD_CHANNEL_HPP
