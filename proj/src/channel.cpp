#include "dd/channel.hpp"

#include <cmath>
#include <sstream>

#include "dd/zak.hpp"

namespace dd {

namespace {
cplx expj(double ang) { return {std::cos(ang), std::sin(ang)}; }
}

uint64_t Rng::next_u64() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

cplx Rng::gaussian(double variance) {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1) * variance);
  return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
}

uint64_t Rng::derive(uint64_t master, uint64_t stream) {
  Rng mix(master ^ (0xd1b54a32d192ed03ull * (stream + 1)));
  return mix.next_u64();
}

bool DDChannel::integer_on(const DDGrid& g, double tol) const {
  for (size_t p = 0; p < paths.size(); ++p) {
    const double li = delay_index(g, p);
    const double ki = doppler_index(g, p);
    if (std::abs(li - std::round(li)) > tol) return false;
    if (std::abs(ki - std::round(ki)) > tol) return false;
  }
  return true;
}

DDChannel sample_random_channel(int P, int l_max, int k_max, const DDGrid& grid,
                                bool fractional, uint64_t rng_seed) {
  if (P < 1) throw DimensionError("sample_random_channel: P must be >= 1");
  if (l_max >= grid.M || k_max >= grid.N)
    throw DimensionError("sample_random_channel: spreads violate the crystallization bound");
  Rng rng(rng_seed);
  DDChannel ch;
  ch.tick_dt = grid.sample_dt();
  ch.seed = rng_seed;
  const double var = 1.0 / P;
  int guard = 0;
  while (static_cast<int>(ch.paths.size()) < P) {
    if (++guard > 1000 * P)
      throw DimensionError("sample_random_channel: cannot place distinct paths");
    double l_idx, k_idx;
    if (fractional) {
      l_idx = rng.uniform(0.0, static_cast<double>(l_max));
      k_idx = rng.uniform(-k_max / 2.0, k_max / 2.0);
    } else {
      l_idx = static_cast<double>(static_cast<long>(rng.next_u64() % (l_max + 1)));
      const int k_half = k_max / 2;
      k_idx = static_cast<double>(static_cast<long>(rng.next_u64() % (2 * k_half + 1)) - k_half);
    }
    ChannelPath path;
    path.delay_ticks = std::lround(l_idx * grid.osr);  // quantize to the lattice
    path.doppler_hz = k_idx * grid.doppler_res();
    path.gain = rng.gaussian(var);
    bool dup = false;
    for (const auto& q : ch.paths)
      if (q.delay_ticks == path.delay_ticks &&
          std::abs(q.doppler_hz - path.doppler_hz) < 1e-12)
        dup = true;
    if (!dup) ch.paths.push_back(path);
  }
  return ch;
}

bool crystallization_check(const DDChannel& ch, double T) {
  if (ch.paths.empty()) throw DimensionError("crystallization_check: empty path list");
  double tmin = 1e300, tmax = -1e300, nmin = 1e300, nmax = -1e300;
  for (size_t p = 0; p < ch.paths.size(); ++p) {
    const double tau = ch.delay_of(p);
    tmin = std::min(tmin, tau);
    tmax = std::max(tmax, tau);
    nmin = std::min(nmin, ch.paths[p].doppler_hz);
    nmax = std::max(nmax, ch.paths[p].doppler_hz);
  }
  return (tmax - tmin < T) && (nmax - nmin < 1.0 / T);
}

TimeSignal apply_time_channel(const TimeSignal& s, const DDChannel& ch) {
  const double dt = s.dt();
  if (std::abs(ch.tick_dt - dt) > 1e-12 * dt)
    throw LatticeError("apply_time_channel: channel ticks do not match the signal lattice");
  const long dmax = ch.max_delay_ticks();
  TimeSignal r;
  r.sample_rate = s.sample_rate;
  r.t0 = s.t0;
  r.samples.assign(s.samples.size() + dmax, cplx(0.0, 0.0));
  for (const auto& path : ch.paths) {
    const double tau = path.delay_ticks * ch.tick_dt;
    for (size_t i = 0; i < s.samples.size(); ++i) {
      const size_t j = i + path.delay_ticks;
      const double t = s.t0 + j * dt;
      r.samples[j] += path.gain * expj(2.0 * pi * path.doppler_hz * (t - tau)) * s.samples[i];
    }
  }
  return r;
}

TimeSignal apply_time_channel_circular(const TimeSignal& s, const DDChannel& ch) {
  const double dt = s.dt();
  if (std::abs(ch.tick_dt - dt) > 1e-12 * dt)
    throw LatticeError("apply_time_channel: channel ticks do not match the signal lattice");
  const long n = s.size();
  TimeSignal r;
  r.sample_rate = s.sample_rate;
  r.t0 = s.t0;
  r.samples.assign(n, cplx(0.0, 0.0));
  for (const auto& path : ch.paths) {
    const double tau = path.delay_ticks * ch.tick_dt;
    for (long j = 0; j < n; ++j) {
      const long i = ((j - path.delay_ticks) % n + n) % n;
      const double t = s.t0 + j * dt;
      r.samples[j] += path.gain * expj(2.0 * pi * path.doppler_hz * (t - tau)) * s.samples[i];
    }
  }
  return r;
}

DDFrame twisted_convolve_dd(const DDFrame& S, const DDChannel& ch) {
  const DDGrid& g = S.grid;
  DDFrame out(g);
  for (size_t p = 0; p < ch.paths.size(); ++p) {
    const double li = ch.delay_index(g, p);
    const double ki = ch.doppler_index(g, p);
    if (std::abs(li - std::round(li)) > 1e-9 || std::abs(ki - std::round(ki)) > 1e-9)
      throw LatticeError("twisted_convolve_dd: frame path off the integer DD lattice");
    const int lp = static_cast<int>(std::lround(li));
    const int kp = static_cast<int>(std::lround(ki));
    const cplx h = ch.paths[p].gain;
    for (int l = 0; l < g.M; ++l) {
      // e^{j2pi nu_p (tau_l - tau_p)}
      const cplx ramp = expj(2.0 * pi * kp * (l - lp) / static_cast<double>(g.M * g.N));
      for (int k = 0; k < g.N; ++k) {
        const WrapResult w = quasi_periodic_wrap(l - lp, k - kp, g);
        out(l, k) += h * ramp * w.phase * S(w.l, w.k);
      }
    }
  }
  return out;
}

DDSampledSurface twisted_convolve_dd(const DDSampledSurface& S, const DDChannel& ch) {
  const DDGrid& g = S.grid;
  const double dt = g.sample_dt();
  const double dnu = g.nu_step();
  const int n_tau = static_cast<int>(S.tau_axis.size());
  const int n_nu = static_cast<int>(S.nu_axis.size());
  const int per_period = g.M * g.osr;
  if (n_tau < per_period)
    throw CoverageError("twisted_convolve_dd: surface must cover one delay period");

  if (n_tau > per_period) {
    // surfaces spanning more than one period must satisfy Lemma 1
    double peak = 1e-300, resid = 0.0;
    for (int i = 0; i + per_period < n_tau; ++i)
      for (int j = 0; j < n_nu; ++j) {
        const cplx ref = expj(2.0 * pi * g.T * S.nu_axis[j]) * S.values(i, j);
        resid = std::max(resid, std::abs(S.values(i + per_period, j) - ref));
        peak = std::max(peak, std::abs(S.values(i, j)));
      }
    if (resid > 1e-6 * peak)
      throw CoverageError("twisted_convolve_dd: surface is not quasi-periodic");
  }

  DDSampledSurface out = S;
  out.values.setZero();
  for (size_t p = 0; p < ch.paths.size(); ++p) {
    const long dtick = ch.paths[p].delay_ticks;
    const double nu_ratio = ch.paths[p].doppler_hz / dnu;
    const long dnu_tick = std::lround(nu_ratio);
    if (std::abs(nu_ratio - dnu_tick) > 1e-9)
      throw LatticeError("twisted_convolve_dd: Doppler off the surface lattice");
    const double tau_p = dtick * dt;
    const cplx h = ch.paths[p].gain;
    for (int i = 0; i < n_tau; ++i) {
      const double tau = S.tau_axis[i];
      long isrc = i - dtick;
      long fold = 0;
      while (isrc < 0) { isrc += per_period; --fold; }
      while (isrc >= n_tau) { isrc -= per_period; ++fold; }
      for (int j = 0; j < n_nu; ++j) {
        long jsrc = ((j - dnu_tick) % n_nu + n_nu) % n_nu;
        // delay fold phase from Lemma 1 at the source Doppler
        const double nu_src = S.nu_axis[jsrc];
        const cplx fold_phase = expj(2.0 * pi * fold * g.T * nu_src);
        const cplx ramp = expj(2.0 * pi * ch.paths[p].doppler_hz * (tau - tau_p));
        out.values(i, j) += h * ramp * fold_phase * S.values(isrc, jsrc);
      }
    }
  }
  return out;
}

TimeSignal add_awgn(const TimeSignal& s, const NoiseSpec& noise) {
  if (noise.N0 < 0.0) throw DimensionError("add_awgn: N0 must be >= 0");
  TimeSignal out = s;
  if (noise.N0 == 0.0) return out;
  Rng rng(noise.rng_seed);
  for (auto& v : out.samples) v += rng.gaussian(noise.N0);
  return out;
}

std::string channel_to_record(const DDChannel& ch) {
  std::ostringstream os;
  os.precision(17);
  os << "ddchannel v1\n";
  os << "tick_dt " << ch.tick_dt << "\n";
  os << "seed " << ch.seed << "\n";
  os << "paths " << ch.paths.size() << "\n";
  for (const auto& p : ch.paths)
    os << p.gain.real() << " " << p.gain.imag() << " " << p.delay_ticks << " "
       << p.doppler_hz << "\n";
  return os.str();
}

DDChannel channel_from_record(const std::string& text) {
  std::istringstream is(text);
  std::string tag, ver;
  is >> tag >> ver;
  if (tag != "ddchannel") throw DimensionError("channel_from_record: bad header");
  DDChannel ch;
  std::string key;
  size_t n = 0;
  is >> key >> ch.tick_dt >> key >> ch.seed >> key >> n;
  for (size_t i = 0; i < n; ++i) {
    ChannelPath p;
    double re, im;
    is >> re >> im >> p.delay_ticks >> p.doppler_hz;
    p.gain = {re, im};
    ch.paths.push_back(p);
  }
  if (!is) throw DimensionError("channel_from_record: truncated record");
  return ch;
}

}  // namespace dd
