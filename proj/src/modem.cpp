#include "dd/modem.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "dd/ambiguity.hpp"
#include "dd/fft.hpp"
#include "dd/zak.hpp"

namespace dd {

namespace {
cplx expj(double ang) { return {std::cos(ang), std::sin(ang)}; }
}

ModemConfig make_modem_config(const BasisConfig& basis, int cp_len, bool normalize) {
  ModemConfig cfg;
  cfg.grid = basis.grid;
  cfg.basis = basis;
  cfg.cp_len = cp_len;
  cfg.normalize = normalize;
  return cfg;
}

double modem_time_window(const ModemConfig& cfg, double t) {
  const double NT = cfg.grid.frame_duration();
  const double Tcp = cfg.cp_duration();
  const double scale = 1.0 / std::sqrt(NT);
  const WindowSpec& tw = cfg.basis.time_window;
  // margin so the flat window kinds also pass the shaping-pulse tails
  const double margin = cfg.basis.fw_trunc_periods * cfg.grid.T;
  switch (tw.kind) {
    case WindowKind::Rect:
      return (t >= -Tcp - margin && t <= NT + margin) ? scale : 0.0;
    case WindowKind::Cosine: {
      if (t < -Tcp - margin || t > NT + margin) return 0.0;
      return scale * std::cos(t + Tcp + margin);
    }
    case WindowKind::RRC: {
      const double b_nom = NT + Tcp;
      WindowSpec w{WindowKind::RRC, WindowDomain::Time, (1.0 + tw.beta) * b_nom, tw.beta, false};
      const double offset = -Tcp - tw.beta * b_nom / 2.0;
      return scale * window_value(w, t - offset);
    }
  }
  return 0.0;
}

ShapingFir modem_shaping_fir(const ModemConfig& cfg) {
  const DDGrid& g = cfg.grid;
  const double dt = g.sample_dt();
  const WindowSpec& fw = cfg.basis.freq_window;
  // center the excess bandwidth on the nominal band
  double shift = 0.0;
  if (fw.kind == WindowKind::RRC) {
    const double b_nom = fw.span / (1.0 + fw.beta);
    shift = -(fw.span - b_nom) / 2.0;
  }
  const int half = static_cast<int>(std::lround(cfg.basis.fw_trunc_periods * g.T / dt));
  ShapingFir fir;
  fir.center = half;
  fir.taps.resize(2 * half + 1);
  // cosine taper over the outermost period keeps the truncation ripple of
  // the slowly decaying kinds below the symbol-level tolerances
  const double t_edge = (cfg.basis.fw_trunc_periods - 1) * g.T;
  const double t_end = cfg.basis.fw_trunc_periods * g.T;
  for (int n = -half; n <= half; ++n) {
    const double t = n * dt;
    double taper = 1.0;
    const double a = std::abs(t);
    if (a > t_edge) taper = 0.5 * (1.0 + std::cos(pi * (a - t_edge) / (t_end - t_edge)));
    fir.taps[n + half] = taper * fw_time_value(fw, t, shift);
  }
  return fir;
}

TimeSignal modem_tx_from_xt(const CVec& x_t, const ModemConfig& cfg) {
  const DDGrid& g = cfg.grid;
  const int MN = g.frame_size();
  if (static_cast<int>(x_t.size()) != MN)
    throw DimensionError("modem_tx_from_xt: x_T must have length M*N");
  const int L = cfg.cp_len;
  const double dt = g.sample_dt();

  CVec up(static_cast<size_t>(MN + L) * g.osr, cplx(0.0, 0.0));
  for (int i = 0; i < MN + L; ++i)
    up[static_cast<size_t>(i) * g.osr] = x_t[((i - L) % MN + MN) % MN];

  const ShapingFir fir = modem_shaping_fir(cfg);
  CVec s = convolve(up, fir.taps);
  const double t0 = -L * g.delay_res() - fir.center * dt;
  const double scale = cfg.normalize ? std::sqrt(g.frame_duration()) : 1.0;
  for (size_t n = 0; n < s.size(); ++n) {
    const double t = t0 + n * dt;
    s[n] *= scale * modem_time_window(cfg, t);
  }
  return TimeSignal(std::move(s), 1.0 / dt, t0);
}

CVec modem_rx_to_yt(const TimeSignal& r, const ModemConfig& cfg) {
  const DDGrid& g = cfg.grid;
  const int MN = g.frame_size();
  const double dt = g.sample_dt();
  if (std::abs(r.sample_rate * dt - 1.0) > 1e-9)
    throw DimensionError("modem_rx_to_yt: signal rate does not match the grid");
  const ShapingFir fir = modem_shaping_fir(cfg);
  const double scale = (cfg.normalize ? std::sqrt(g.frame_duration()) : 1.0) * dt;

  CVec y(MN, cplx(0.0, 0.0));
  for (int j = 0; j < MN; ++j) {
    const double tj = j * g.delay_res();
    // overlap of the FIR support centered at tj with the received samples
    const long base = std::lround((tj - r.t0) / dt);
    const long n0 = std::max<long>(0, base - fir.center);
    const long n1 = std::min<long>(r.size() - 1, base + fir.center);
    cplx acc(0.0, 0.0);
    for (long n = n0; n <= n1; ++n) {
      const double t = r.t0 + n * dt;
      const double w = modem_time_window(cfg, t);
      if (w == 0.0) continue;
      acc += r.samples[n] * w * std::conj(fir.taps[n - base + fir.center]);
    }
    y[j] = acc * scale;
  }
  return y;
}

TimeSignal transmit(const DDFrame& X, const ModemConfig& cfg) {
  if (!(X.grid == cfg.grid)) throw DimensionError("transmit: frame grid mismatch");
  const double span_needed = cfg.grid.frame_duration() + cfg.cp_duration();
  if (cfg.basis.time_window.span + 1e-12 < cfg.grid.frame_duration())
    throw DimensionError("transmit: time window shorter than the frame");
  (void)span_needed;
  return modem_tx_from_xt(idzt(X), cfg);
}

DDFrame receive(const TimeSignal& r, const ModemConfig& cfg) {
  return dzt(modem_rx_to_yt(r, cfg), cfg.grid);
}

double modem_noise_gain(const ModemConfig& cfg) {
  const DDGrid& g = cfg.grid;
  const double dt = g.sample_dt();
  const ShapingFir fir = modem_shaping_fir(cfg);
  const double scale = (cfg.normalize ? std::sqrt(g.frame_duration()) : 1.0) * dt;
  // mean over lattice positions of sum_n |w(t_n) fw(t_n - t_j)|^2
  double acc = 0.0;
  const int MN = g.frame_size();
  for (int j = 0; j < MN; ++j) {
    const double tj = j * g.delay_res();
    double e = 0.0;
    for (int n = -fir.center; n <= fir.center; ++n) {
      const double t = tj + n * dt;
      const double w = modem_time_window(cfg, t);
      e += w * w * std::norm(fir.taps[n + fir.center]);
    }
    acc += e;
  }
  return scale * scale * acc / MN;
}

CMat dzt_conjugate(const CMat& H_T, const DDGrid& grid) {
  const int MN = grid.frame_size();
  if (H_T.rows() != MN || H_T.cols() != MN)
    throw DimensionError("dzt_conjugate: matrix must be MN x MN");
  auto apply_K = [&](const CMat& A) {  // K = F_N (x) I_M applied to columns
    CMat B(MN, A.cols());
    CVec col(MN);
    for (int c = 0; c < A.cols(); ++c) {
      for (int i = 0; i < MN; ++i) col[i] = A(i, c);
      const DDFrame f = dzt(col, grid);
      B.col(c) = f.vec();
    }
    return B;
  };
  const CMat B = apply_K(H_T);            // K H
  const CMat C = apply_K(B.adjoint());    // K H^H K^H (half)
  return C.adjoint();                     // K H K^H
}

EffectiveChannel effective_time_matrix(const ModemConfig& cfg, const DDChannel& ch,
                                       int threads) {
  if (!crystallization_check(ch, cfg.grid.T))
    throw DimensionError("effective_time_matrix: channel violates crystallization");
  const int MN = cfg.grid.frame_size();
  EffectiveChannel eff;
  eff.H_T = CMat::Zero(MN, MN);

  auto probe = [&](int i) {
    CVec e(MN, cplx(0.0, 0.0));
    e[i] = 1.0;
    const TimeSignal s = modem_tx_from_xt(e, cfg);
    const TimeSignal r = apply_time_channel(s, ch);
    const CVec y = modem_rx_to_yt(r, cfg);
    for (int j = 0; j < MN; ++j) eff.H_T(j, i) = y[j];
  };

  if (threads <= 1) {
    for (int i = 0; i < MN; ++i) probe(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < MN; i = next.fetch_add(1)) probe(i);
      });
    for (auto& th : pool) th.join();
  }

  // band half-width under circular distance (covers the CP corner block)
  const double peak = eff.H_T.cwiseAbs().maxCoeff();
  int L = 0;
  for (int j = 0; j < MN; ++j)
    for (int i = 0; i < MN; ++i) {
      if (std::abs(eff.H_T(j, i)) < 1e-10 * peak) continue;
      const int d = std::abs(j - i);
      L = std::max(L, std::min(d, MN - d));
    }
  eff.band_half_width = L;
  eff.H_DD = dzt_conjugate(eff.H_T, cfg.grid);
  return eff;
}

DDFrame io_integer_closed_form(const DDFrame& X, const DDChannel& ch) {
  if (!ch.integer_on(X.grid))
    throw LatticeError("io_integer_closed_form: channel is not on the integer DD lattice");
  return twisted_convolve_dd(X, ch);
}

DDFrame io_asymptotic(const DDFrame& X, const DDChannel& ch, const BasisConfig& cfg) {
  const DDGrid& g = X.grid;
  const int M = g.M, N = g.N;
  DDFrame Y(g);
  const double dres = g.delay_res();
  const double nres = g.doppler_res();

  const bool rect = cfg.time_window.kind == WindowKind::Rect &&
                    cfg.freq_window.kind == WindowKind::Rect;
  for (size_t p = 0; p < ch.paths.size(); ++p) {
    const double tau_p = ch.delay_of(p);
    const double nu_p = ch.paths[p].doppler_hz;
    const cplx h = ch.paths[p].gain;

    CMat table(2 * M - 1, 2 * N - 1);
    double peak = 0.0;
    for (int dl = -(M - 1); dl <= M - 1; ++dl)
      for (int dk = -(N - 1); dk <= N - 1; ++dk) {
        // rectangular windows take the asymptotic quasi-periodic kernel,
        // the regime of the symbol-wise relation
        const cplx a = rect ? af_rect_ideal_point(cfg, dl * dres - tau_p, dk * nres - nu_p)
                            : af_truncated_point(cfg, dl * dres - tau_p, dk * nres - nu_p);
        table(dl + M - 1, dk + N - 1) = a;
        peak = std::max(peak, std::abs(a));
      }

    for (int l = 0; l < M; ++l) {
      const cplx ramp_p = expj(2.0 * pi * nu_p * (l * dres - tau_p));
      for (int k = 0; k < N; ++k) {
        cplx acc(0.0, 0.0);
        for (int lp = 0; lp < M; ++lp) {
          const double darg = l * dres - tau_p - lp * dres;
          for (int kp = 0; kp < N; ++kp) {
            const cplx a = table(l - lp + M - 1, k - kp + N - 1);
            if (std::abs(a) < 1e-6 * peak) continue;
            acc += expj(2.0 * pi * kp * nres * darg) * X(lp, kp) * a;
          }
        }
        Y(l, k) += h * ramp_p * acc;
      }
    }
  }
  return Y;
}

}  // namespace dd
