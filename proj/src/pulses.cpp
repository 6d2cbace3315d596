#include "dd/pulses.hpp"

#include <cmath>

namespace dd {

namespace {

double rect_height(double span) { return 1.0 / std::sqrt(span); }

double cosine_height(double span) {
  // integral of cos^2 over [0, span]
  const double e = span / 2.0 + std::sin(2.0 * span) / 4.0;
  return 1.0 / std::sqrt(e);
}

/// RRC spectral profile on [0, span]: plateau of nominal width
/// span/(1+beta) centered at span/2, cosine roll-offs filling the rest.
double rrc_profile(double x, double span, double beta, bool normalized) {
  const double b_nom = span / (1.0 + beta);
  const double plateau = normalized ? 1.0 / std::sqrt(b_nom) : 1.0;
  const double u = std::abs(x - span / 2.0);
  const double flat_half = (1.0 - beta) * b_nom / 2.0;
  const double edge_half = (1.0 + beta) * b_nom / 2.0;
  if (u <= flat_half) return plateau;
  if (u >= edge_half) return 0.0;
  return plateau * std::cos(pi / (2.0 * beta * b_nom) * (u - flat_half));
}

/// Unit-energy RRC time pulse for nominal bandwidth B and roll-off beta
/// (inverse transform of the centered RRC spectral profile).
double rrc_time_pulse(double t, double B, double beta) {
  const double x = B * t;
  if (std::abs(x) < 1e-10) return std::sqrt(B) * (1.0 - beta + 4.0 * beta / pi);
  if (beta > 0.0) {
    const double xs = std::abs(4.0 * beta * x);
    if (std::abs(xs - 1.0) < 1e-8) {
      const double a = pi / (4.0 * beta);
      return std::sqrt(B) * (beta / std::sqrt(2.0)) *
             ((1.0 + 2.0 / pi) * std::sin(a) + (1.0 - 2.0 / pi) * std::cos(a));
    }
  }
  const double num = std::sin(pi * (1.0 - beta) * x) + 4.0 * beta * x * std::cos(pi * (1.0 + beta) * x);
  const double den = pi * x * (1.0 - 16.0 * beta * beta * x * x);
  return std::sqrt(B) * num / den;
}

cplx expj(double ang) { return {std::cos(ang), std::sin(ang)}; }

/// integral_0^W e^{j a f} df
cplx int_expj(double a, double W) {
  if (std::abs(a) < 1e-14) return {W, 0.0};
  return (expj(a * W) - cplx(1.0, 0.0)) / cplx(0.0, a);
}

}  // namespace

double window_value(const WindowSpec& w, double x) {
  if (x < 0.0 || x > w.span) return 0.0;
  switch (w.kind) {
    case WindowKind::Rect:
      return w.power_normalized ? rect_height(w.span) : 1.0;
    case WindowKind::Cosine:
      return (w.power_normalized ? cosine_height(w.span) : 1.0) * std::cos(x);
    case WindowKind::RRC:
      return rrc_profile(x, w.span, w.beta, w.power_normalized);
  }
  return 0.0;
}

std::vector<double> window_samples(const WindowSpec& w, double rate_or_step, double offset) {
  if (rate_or_step <= 0.0) throw DimensionError("window_samples: step must be positive");
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((w.span - offset) / rate_or_step)) + 1;
  out.reserve(std::max(n, 0));
  for (int i = 0; i < n; ++i) out.push_back(window_value(w, offset + i * rate_or_step));
  return out;
}

cplx fw_time_value(const WindowSpec& fw, double t, double freq_shift) {
  if (fw.domain != WindowDomain::Frequency)
    throw DimensionError("fw_time_value: expected a frequency-domain window");
  const double W = fw.span;
  cplx v(0.0, 0.0);
  switch (fw.kind) {
    case WindowKind::Rect: {
      const double h = fw.power_normalized ? rect_height(W) : 1.0;
      double x = W * t;
      double s = (std::abs(x) < 1e-12) ? 1.0 : std::sin(pi * x) / (pi * x);
      v = h * W * s * expj(pi * W * t);
      break;
    }
    case WindowKind::RRC: {
      const double b_nom = W / (1.0 + fw.beta);
      // centered pulse shifted to the window's band position
      v = rrc_time_pulse(t, b_nom, fw.beta) * expj(2.0 * pi * (W / 2.0) * t);
      if (!fw.power_normalized) v *= std::sqrt(b_nom);
      break;
    }
    case WindowKind::Cosine: {
      const double h = fw.power_normalized ? cosine_height(W) : 1.0;
      v = 0.5 * h * (int_expj(2.0 * pi * t + 1.0, W) + int_expj(2.0 * pi * t - 1.0, W));
      break;
    }
  }
  if (freq_shift != 0.0) v *= expj(2.0 * pi * freq_shift * t);
  return v;
}

BasisConfig make_basis_config(int M, int N, double T, int osr,
                              WindowKind time_kind, double time_beta,
                              WindowKind freq_kind, double freq_beta) {
  const int M_ext = (freq_kind == WindowKind::RRC)
                        ? static_cast<int>(std::ceil(M * (1.0 + freq_beta)))
                        : M;
  const int N_ext = (time_kind == WindowKind::RRC)
                        ? static_cast<int>(std::ceil(N * (1.0 + time_beta)))
                        : N;
  BasisConfig cfg;
  cfg.grid = DDGrid(M, N, T, osr, M_ext, N_ext);
  cfg.time_window = {time_kind, WindowDomain::Time, N_ext * T, time_beta, true};
  cfg.freq_window = {freq_kind, WindowDomain::Frequency, M_ext / T, freq_beta, true};
  return cfg;
}

TimeSignal pulsone_time(int l, int k, const BasisConfig& cfg) {
  const DDGrid& g = cfg.grid;
  if (l < 0 || l >= g.M || k < 0 || k >= g.N)
    throw DimensionError("pulsone_time: symbol index out of range");
  const double T = g.T;
  const double dt = g.sample_dt();
  const double tau_l = l * g.delay_res();
  const double nu_k = k * g.doppler_res();
  const double fw_half = cfg.fw_trunc_periods * T;

  // support: the time window shifted to tau_l, padded by the FW pulse tails
  const double t_begin = tau_l - fw_half;
  const double t_end = tau_l + cfg.time_window.span + fw_half;
  const int i0 = static_cast<int>(std::floor(t_begin / dt));
  const int count = static_cast<int>(std::ceil((t_end - i0 * dt) / dt)) + 1;

  const int n_lo = -cfg.fw_trunc_periods;
  const int n_hi = g.N_ext - 1 + cfg.fw_trunc_periods;
  const double rootT = std::sqrt(T);

  CVec s(count, cplx(0.0, 0.0));
  for (int i = 0; i < count; ++i) {
    const double t = (i0 + i) * dt;
    const double tw = window_value(cfg.time_window, t - tau_l);
    if (tw == 0.0) continue;
    cplx train(0.0, 0.0);
    for (int n = n_lo; n <= n_hi; ++n) {
      const double arg = t - tau_l - n * T;
      if (std::abs(arg) > fw_half) continue;
      train += fw_time_value(cfg.freq_window, arg);
    }
    const double ang = 2.0 * pi * nu_k * (t - tau_l);
    s[i] = rootT * expj(ang) * train * tw;
  }
  return TimeSignal(std::move(s), 1.0 / dt, i0 * dt);
}

cplx dirichlet_sum(int K, double x) {
  const double xr = x - std::round(x);
  if (std::abs(xr) < 1e-12) return {static_cast<double>(K), 0.0};
  const double u = K * x;
  if (std::abs(u - std::round(u)) < 1e-9) return {0.0, 0.0};
  const double num = std::sin(pi * K * x);
  const double den = std::sin(pi * x);
  return expj(pi * (K - 1) * x) * (num / den);
}

cplx truncated_basis_dd_closed_form(double tau, double nu, const BasisConfig& cfg) {
  if (!cfg.time_window.periodic_kind() || !cfg.freq_window.periodic_kind())
    throw DimensionError("truncated_basis_dd_closed_form: requires periodic window kinds");
  const DDGrid& g = cfg.grid;
  const double fw0 = window_value(cfg.freq_window, 0.0);
  const double tw = window_value(cfg.time_window, tau);
  return fw0 * tw * dirichlet_sum(g.M_ext, tau / g.T) *
         std::conj(dirichlet_sum(g.N_ext, nu * g.T));
}

TimeSignal tf_consistent_shift(const TimeSignal& base, double tau0, double nu0) {
  const double dt = base.dt();
  const double shift = tau0 / dt;
  if (std::abs(shift - std::round(shift)) > 1e-9)
    throw LatticeError("tf_consistent_shift: tau0 must be an integer multiple of the sample period");
  TimeSignal out = base;
  out.t0 = base.t0 + tau0;
  for (int i = 0; i < out.size(); ++i) {
    const double t = base.t0 + i * dt;  // equals (out time) - tau0
    out.samples[i] *= expj(2.0 * pi * nu0 * t);
  }
  return out;
}

}  // namespace dd
