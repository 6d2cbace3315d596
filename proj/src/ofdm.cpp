#include "dd/ofdm.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "dd/fft.hpp"

namespace dd {

namespace {

double burst_slots(const OfdmConfig& cfg) {
  return static_cast<double>(cfg.grid.N) * (cfg.grid.M + cfg.cp_per_symbol);
}

double slot_dt(const OfdmConfig& cfg) { return cfg.grid.delay_res(); }

ShapingFir ofdm_fir(const OfdmConfig& cfg) {
  const DDGrid& g = cfg.grid;
  WindowSpec fw{WindowKind::Rect, WindowDomain::Frequency, g.bandwidth(), 0.0, true};
  const double dt = g.sample_dt();
  const int half = static_cast<int>(std::lround(cfg.fw_trunc_periods * g.T / dt));
  ShapingFir fir;
  fir.center = half;
  fir.taps.resize(2 * half + 1);
  for (int n = -half; n <= half; ++n) fir.taps[n + half] = fw_time_value(fw, n * dt);
  return fir;
}

double ofdm_window(const OfdmConfig& cfg, double t) {
  const double dur = burst_slots(cfg) * slot_dt(cfg);
  if (t < 0.0 || t > dur) return 0.0;
  return 1.0 / std::sqrt(cfg.grid.frame_duration());
}

}  // namespace

OfdmConfig make_ofdm_config(const DDGrid& grid, int total_cp_budget) {
  OfdmConfig cfg;
  cfg.grid = grid;
  cfg.cp_per_symbol = (total_cp_budget + grid.N - 1) / grid.N;  // rounded up
  return cfg;
}

CVec ofdm_xt_from_symbols(const DDFrame& S) {
  const int M = S.grid.M, N = S.grid.N;
  CVec x(static_cast<size_t>(M) * N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  CVec col(M);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) col[m] = S(m, n);
    dft_inplace(col, true);
    for (int i = 0; i < M; ++i) x[n * M + i] = col[i] * scale;
  }
  return x;
}

DDFrame ofdm_symbols_from_xt(const CVec& x_t, const DDGrid& grid) {
  const int M = grid.M, N = grid.N;
  if (static_cast<int>(x_t.size()) != M * N)
    throw DimensionError("ofdm_symbols_from_xt: bad length");
  DDFrame S(grid);
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  CVec col(M);
  for (int n = 0; n < N; ++n) {
    for (int i = 0; i < M; ++i) col[i] = x_t[n * M + i];
    dft_inplace(col, false);
    for (int m = 0; m < M; ++m) S(m, n) = col[m] * scale;
  }
  return S;
}

TimeSignal ofdm_tx_from_xt(const CVec& x_t, const OfdmConfig& cfg) {
  const DDGrid& g = cfg.grid;
  const int M = g.M, N = g.N, cp = cfg.cp_per_symbol;
  if (static_cast<int>(x_t.size()) != M * N)
    throw DimensionError("ofdm_tx_from_xt: x_T must have length M*N");
  const double dt = g.sample_dt();

  const int slots = N * (M + cp);
  CVec up(static_cast<size_t>(slots) * g.osr, cplx(0.0, 0.0));
  for (int n = 0; n < N; ++n)
    for (int s = 0; s < M + cp; ++s) {
      const int i = (s - cp + M) % M;  // CP copies the block tail
      up[static_cast<size_t>(n * (M + cp) + s) * g.osr] = x_t[n * M + i];
    }

  const ShapingFir fir = ofdm_fir(cfg);
  CVec out = convolve(up, fir.taps);
  const double t0 = -fir.center * dt;
  const double scale = cfg.normalize ? std::sqrt(g.frame_duration()) : 1.0;
  for (size_t k = 0; k < out.size(); ++k) {
    const double t = t0 + k * dt;
    out[k] *= scale * ofdm_window(cfg, t);
  }
  return TimeSignal(std::move(out), 1.0 / dt, t0);
}

CVec ofdm_rx_to_yt(const TimeSignal& r, const OfdmConfig& cfg) {
  const DDGrid& g = cfg.grid;
  const int M = g.M, N = g.N, cp = cfg.cp_per_symbol;
  const double dt = g.sample_dt();
  if (std::abs(r.sample_rate * dt - 1.0) > 1e-9)
    throw DimensionError("ofdm_rx_to_yt: signal rate does not match the grid");
  const ShapingFir fir = ofdm_fir(cfg);
  const double scale = (cfg.normalize ? std::sqrt(g.frame_duration()) : 1.0) * dt;

  CVec y(static_cast<size_t>(M) * N, cplx(0.0, 0.0));
  for (int n = 0; n < N; ++n) {
    for (int i = 0; i < M; ++i) {
      const double tj = (n * (M + cp) + cp + i) * slot_dt(cfg);
      const long base = std::lround((tj - r.t0) / dt);
      const long n0 = std::max<long>(0, base - fir.center);
      const long n1 = std::min<long>(r.size() - 1, base + fir.center);
      cplx acc(0.0, 0.0);
      for (long s = n0; s <= n1; ++s) {
        const double t = r.t0 + s * dt;
        const double w = ofdm_window(cfg, t);
        if (w == 0.0) continue;
        acc += r.samples[s] * w * std::conj(fir.taps[s - base + fir.center]);
      }
      y[n * M + i] = acc * scale;
    }
  }
  return y;
}

TimeSignal ofdm_transmit(const DDFrame& S, const OfdmConfig& cfg) {
  return ofdm_tx_from_xt(ofdm_xt_from_symbols(S), cfg);
}

DDFrame ofdm_receive(const TimeSignal& r, const OfdmConfig& cfg) {
  return ofdm_symbols_from_xt(ofdm_rx_to_yt(r, cfg), cfg.grid);
}

double ofdm_noise_gain(const OfdmConfig& cfg) {
  const DDGrid& g = cfg.grid;
  const double dt = g.sample_dt();
  const ShapingFir fir = ofdm_fir(cfg);
  const double scale = (cfg.normalize ? std::sqrt(g.frame_duration()) : 1.0) * dt;
  const double tj = (cfg.cp_per_symbol + g.M / 2) * slot_dt(cfg);
  double e = 0.0;
  for (int n = -fir.center; n <= fir.center; ++n) {
    const double w = ofdm_window(cfg, tj + n * dt);
    e += w * w * std::norm(fir.taps[n + fir.center]);
  }
  return scale * scale * e;
}

EffectiveChannel ofdm_effective_matrix(const OfdmConfig& cfg, const DDChannel& ch,
                                       int threads) {
  const int MN = cfg.grid.frame_size();
  EffectiveChannel eff;
  eff.H_T = CMat::Zero(MN, MN);

  auto probe = [&](int i) {
    CVec e(MN, cplx(0.0, 0.0));
    e[i] = 1.0;
    const TimeSignal s = ofdm_tx_from_xt(e, cfg);
    const TimeSignal r = apply_time_channel(s, ch);
    const CVec y = ofdm_rx_to_yt(r, cfg);
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

  const double peak = eff.H_T.cwiseAbs().maxCoeff();
  int L = 0;
  for (int j = 0; j < MN; ++j)
    for (int i = 0; i < MN; ++i) {
      if (std::abs(eff.H_T(j, i)) < 1e-10 * peak) continue;
      const int d = std::abs(j - i);
      L = std::max(L, std::min(d, MN - d));
    }
  eff.band_half_width = L;

  // symbol-domain matrix through the block-DFT conjugation
  const int M = cfg.grid.M, N = cfg.grid.N;
  auto apply_blockF = [&](const CMat& A) {
    CMat B(MN, A.cols());
    CVec col(M);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    for (int c = 0; c < A.cols(); ++c)
      for (int n = 0; n < N; ++n) {
        for (int i = 0; i < M; ++i) col[i] = A(n * M + i, c);
        dft_inplace(col, false);
        for (int m = 0; m < M; ++m) B(n * M + m, c) = col[m] * scale;
      }
    return B;
  };
  const CMat B = apply_blockF(eff.H_T);
  eff.H_DD = apply_blockF(B.adjoint()).adjoint();
  return eff;
}

DomainTransform ofdm_transform(const DDGrid& grid) {
  DomainTransform dom;
  const int M = grid.M, N = grid.N;
  dom.to_symbol = [M, N](const Eigen::VectorXcd& x) {
    Eigen::VectorXcd out(x.size());
    CVec col(M);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    for (int n = 0; n < N; ++n) {
      for (int i = 0; i < M; ++i) col[i] = x(n * M + i);
      dft_inplace(col, false);
      for (int m = 0; m < M; ++m) out(n * M + m) = col[m] * scale;
    }
    return out;
  };
  dom.from_symbol = [M, N](const Eigen::VectorXcd& s) {
    Eigen::VectorXcd out(s.size());
    CVec col(M);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    for (int n = 0; n < N; ++n) {
      for (int m = 0; m < M; ++m) col[m] = s(n * M + m);
      dft_inplace(col, true);
      for (int i = 0; i < M; ++i) out(n * M + i) = col[i] * scale;
    }
    return out;
  };
  return dom;
}

}  // namespace dd
