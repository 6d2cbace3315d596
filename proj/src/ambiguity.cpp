#include "dd/ambiguity.hpp"

#include <cmath>

#include "dd/zak.hpp"

namespace dd {

namespace {

cplx expj(double ang) { return {std::cos(ang), std::sin(ang)}; }

double sinc_snap(double x) {
  if (std::abs(x - std::round(x)) < 1e-9)
    return std::round(x) == 0.0 ? 1.0 : 0.0;
  return std::sin(pi * x) / (pi * x);
}

/// One cosine piece of a window profile: A cos(omega x + phi) on [x0, x1].
struct CosSegment {
  double x0, x1, amp, omega, phi;
};

std::vector<CosSegment> window_segments(const WindowSpec& w) {
  std::vector<CosSegment> segs;
  switch (w.kind) {
    case WindowKind::Rect: {
      const double h = window_value(w, w.span / 2.0);
      segs.push_back({0.0, w.span, h, 0.0, 0.0});
      break;
    }
    case WindowKind::Cosine: {
      const double h = w.power_normalized
                           ? window_value(w, 0.0)  // cos(0) = 1 at x = 0
                           : 1.0;
      segs.push_back({0.0, w.span, h, 1.0, 0.0});
      break;
    }
    case WindowKind::RRC: {
      const double b_nom = w.span / (1.0 + w.beta);
      const double p = w.power_normalized ? 1.0 / std::sqrt(b_nom) : 1.0;
      const double roll = w.beta * b_nom;
      if (roll <= 0.0) {
        segs.push_back({0.0, w.span, p, 0.0, 0.0});
        break;
      }
      const double om = pi / (2.0 * roll);
      segs.push_back({0.0, roll, p, om, -pi / 2.0});        // rising edge: p sin(om x)
      segs.push_back({roll, b_nom, p, 0.0, 0.0});           // plateau
      segs.push_back({b_nom, w.span, p, om, -om * b_nom});  // falling edge
      break;
    }
  }
  return segs;
}

/// integral_a^b e^{j(alpha u + c)} du, exact.
cplx tone_integral(double a, double b, double alpha, double c) {
  if (std::abs(alpha) * (b - a) < 1e-12) return (b - a) * expj(c + alpha * (a + b) / 2.0);
  return (expj(alpha * b + c) - expj(alpha * a + c)) / cplx(0.0, alpha);
}

/// integral w(u) w(u - delta) e^{sign j 2pi theta (u - delta)} du for a
/// real piecewise-cosine window.
cplx segment_correlation(const std::vector<CosSegment>& segs, double delta,
                         double theta, double sign) {
  cplx acc(0.0, 0.0);
  const double th = sign * 2.0 * pi * theta;
  for (const auto& s1 : segs) {
    for (const auto& s2 : segs) {
      const double a = std::max(s1.x0, s2.x0 + delta);
      const double b = std::min(s1.x1, s2.x1 + delta);
      if (b - a < 1e-15) continue;
      const double scale = s1.amp * s2.amp / 4.0;
      for (int e1 = -1; e1 <= 1; e1 += 2) {
        for (int e2 = -1; e2 <= 1; e2 += 2) {
          const double alpha = e1 * s1.omega + e2 * s2.omega + th;
          const double c = e1 * s1.phi + e2 * (s2.phi - s2.omega * delta) - th * delta;
          acc += scale * tone_integral(a, b, alpha, c);
        }
      }
    }
  }
  return acc;
}

}  // namespace

cplx window_ambiguity(const WindowSpec& w, double tau, double nu) {
  const auto segs = window_segments(w);
  if (w.domain == WindowDomain::Time) {
    return segment_correlation(segs, tau, nu, -1.0);
  }
  // frequency windows: A(tau, nu) = int FW(f) FW(f - nu) e^{j2pi f tau} df
  return segment_correlation(segs, nu, tau, 1.0) * expj(2.0 * pi * tau * nu);
}

cplx cross_ambiguity_point(const TimeSignal& x, const TimeSignal& y, double tau, double nu) {
  if (std::abs(x.sample_rate - y.sample_rate) > 1e-9 * x.sample_rate)
    throw DimensionError("cross_ambiguity: sample rates differ");
  const double dt = x.dt();
  const double sh = (tau + y.t0 - x.t0) / dt;
  const long s = std::lround(sh);
  if (std::abs(sh - s) > 1e-6)
    throw LatticeError("cross_ambiguity: tau is off the sample lattice");
  const long n0 = std::max<long>(0, s);
  const long n1 = std::min<long>(x.size(), s + y.size());
  cplx acc(0.0, 0.0);
  for (long n = n0; n < n1; ++n) {
    const double t_shift = x.t0 + n * dt - tau;  // t - tau
    acc += x.samples[n] * std::conj(y.samples[n - s]) * expj(-2.0 * pi * nu * t_shift);
  }
  return acc * dt;
}

AmbiguitySurface cross_ambiguity(const TimeSignal& x, const TimeSignal& y,
                                 const std::vector<double>& tau_axis,
                                 const std::vector<double>& nu_axis) {
  if (std::abs(x.sample_rate - y.sample_rate) > 1e-9 * x.sample_rate)
    throw DimensionError("cross_ambiguity: sample rates differ");
  AmbiguitySurface A;
  A.tau_axis = tau_axis;
  A.nu_axis = nu_axis;
  A.source = "numeric";
  A.values = CMat::Zero(tau_axis.size(), nu_axis.size());
  const double dt = x.dt();

  for (size_t i = 0; i < tau_axis.size(); ++i) {
    const double tau = tau_axis[i];
    const double sh = (tau + y.t0 - x.t0) / dt;
    const long s = std::lround(sh);
    if (std::abs(sh - s) > 1e-6)
      throw LatticeError("cross_ambiguity: tau is off the sample lattice");
    const long n0 = std::max<long>(0, s);
    const long n1 = std::min<long>(x.size(), s + y.size());
    if (n0 >= n1) continue;
    // product sequence for this shift, then one tone sum per nu with
    // periodic phase resynchronization
    CVec prod(n1 - n0);
    for (long n = n0; n < n1; ++n) prod[n - n0] = x.samples[n] * std::conj(y.samples[n - s]);
    const double t_start = x.t0 + n0 * dt - tau;
    for (size_t j = 0; j < nu_axis.size(); ++j) {
      const double nu = nu_axis[j];
      const cplx step = expj(-2.0 * pi * nu * dt);
      cplx rot = expj(-2.0 * pi * nu * t_start);
      cplx acc(0.0, 0.0);
      for (size_t n = 0; n < prod.size(); ++n) {
        if ((n & 1023) == 0)
          rot = expj(-2.0 * pi * nu * (t_start + static_cast<double>(n) * dt));
        acc += prod[n] * rot;
        rot *= step;
      }
      A.values(i, j) = acc * dt;
    }
  }
  return A;
}

namespace {

/// Rect + Rect ambiguity via the finite Dirichlet sums of the DD-domain
/// route; exact M_ext*N_ext*|FW(0)|^2*|TW(0)|^2 at the origin and exact
/// zeros at the interior integer lattice.
cplx af_rect_analytic(const BasisConfig& cfg, double tau, double nu) {
  const DDGrid& g = cfg.grid;
  const double T = g.T;
  const int Me = g.M_ext;
  const double fw0 = window_value(cfg.freq_window, 0.0);
  const double tw0 = window_value(cfg.time_window, cfg.time_window.span / 2.0);
  const cplx dk = std::conj(dirichlet_sum(g.N_ext, nu * T));
  if (dk == cplx(0.0, 0.0)) return {0.0, 0.0};
  cplx s(0.0, 0.0);
  for (int d = -(Me - 1); d <= Me - 1; ++d) {
    const double si = sinc_snap(d - nu * T);
    if (si == 0.0) continue;
    const int l0 = std::max(0, -d);
    const cplx geo = expj(2.0 * pi * l0 * tau / T) * dirichlet_sum(Me - std::abs(d), tau / T);
    s += expj(pi * (d - nu * T)) * si * geo;
  }
  return fw0 * fw0 * tw0 * tw0 * expj(2.0 * pi * nu * tau) * dk * s;
}

cplx af_windowed_sum(const BasisConfig& cfg, double tau, double nu) {
  const DDGrid& g = cfg.grid;
  const double T = g.T;
  const int m_max = g.M_ext - 1;  // A_FW vanishes beyond the window bandwidth
  const double fw_tau_span = 2.0 * cfg.fw_trunc_periods * T;
  cplx acc(0.0, 0.0);
  for (int m = -m_max; m <= m_max; ++m) {
    const cplx atw = window_ambiguity(cfg.time_window, tau, nu - m / T);
    if (std::abs(atw) < 1e-300) continue;
    cplx afw_sum(0.0, 0.0);
    const int n_lo = static_cast<int>(std::ceil((tau - fw_tau_span) / T));
    const int n_hi = static_cast<int>(std::floor((tau + fw_tau_span) / T));
    for (int n = n_lo; n <= n_hi; ++n)
      afw_sum += window_ambiguity(cfg.freq_window, tau - n * T, m / T);
    acc += afw_sum * atw;
  }
  return acc;
}

}  // namespace

cplx af_truncated_point(const BasisConfig& cfg, double tau, double nu) {
  const bool rect_rect = cfg.time_window.kind == WindowKind::Rect &&
                         cfg.freq_window.kind == WindowKind::Rect;
  return rect_rect ? af_rect_analytic(cfg, tau, nu) : af_windowed_sum(cfg, tau, nu);
}

cplx af_rect_ideal_point(const BasisConfig& cfg, double tau, double nu) {
  if (cfg.time_window.kind != WindowKind::Rect || cfg.freq_window.kind != WindowKind::Rect)
    throw DimensionError("af_rect_ideal_point: requires rectangular windows");
  const DDGrid& g = cfg.grid;
  const double T = g.T;
  const int Me = g.M_ext;
  const double fw0 = window_value(cfg.freq_window, 0.0);
  const double tw0 = window_value(cfg.time_window, cfg.time_window.span / 2.0);
  const cplx dk = std::conj(dirichlet_sum(g.N_ext, nu * T));
  if (dk == cplx(0.0, 0.0)) return {0.0, 0.0};
  const cplx dl = dirichlet_sum(Me, tau / T);
  if (dl == cplx(0.0, 0.0)) return {0.0, 0.0};
  // Poisson limit of the shifted-sinc train across the band replicas
  const double x = nu * T - std::round(nu * T);
  const cplx s = expj(-pi * x) * std::cos(pi * x);
  return fw0 * fw0 * tw0 * tw0 * expj(2.0 * pi * nu * tau) * dk * dl * s;
}

AmbiguitySurface af_truncated_closed_form(const BasisConfig& cfg,
                                          const std::vector<double>& tau_axis,
                                          const std::vector<double>& nu_axis) {
  AmbiguitySurface A;
  A.tau_axis = tau_axis;
  A.nu_axis = nu_axis;
  A.source = "truncated-basis closed form";
  A.values = CMat::Zero(tau_axis.size(), nu_axis.size());
  for (size_t i = 0; i < tau_axis.size(); ++i)
    for (size_t j = 0; j < nu_axis.size(); ++j)
      A.values(i, j) = af_truncated_point(cfg, tau_axis[i], nu_axis[j]);
  return A;
}

double zak_af_identity_check(const TimeSignal& x, const TimeSignal& y,
                             const DDGrid& grid, int n_max, int m_max) {
  const double T = grid.T;
  const int replicas = static_cast<int>(std::ceil(
                           (std::max(x.duration(), y.duration()) +
                            std::max(std::abs(x.t0), std::abs(y.t0))) / T)) + 1;
  const DDSampledSurface Zx = zak_time_sampled(x, grid, replicas);
  const DDSampledSurface Zy = zak_time_sampled(y, grid, replicas);

  // coefficients A(nT, m/T); on the sample lattice the m direction is
  // periodic with period M*osr, so each alias class enters once
  const int alias_period = grid.M * grid.osr;
  CMat coef = CMat::Zero(2 * n_max + 1, 2 * m_max + 1);
  std::vector<bool> seen(alias_period, false);
  for (int m = -m_max; m <= m_max; ++m) {
    const int cls = ((m % alias_period) + alias_period) % alias_period;
    if (2 * m_max + 1 > alias_period) {
      if (seen[cls]) continue;
      seen[cls] = true;
    }
    for (int n = -n_max; n <= n_max; ++n)
      coef(n + n_max, m + m_max) = cross_ambiguity_point(x, y, n * T, m / T);
  }

  double worst = 0.0;
  for (int i = 0; i < Zx.values.rows(); ++i) {
    const double tau = Zx.tau_axis[i];
    for (int j = 0; j < Zx.values.cols(); ++j) {
      const double nu = Zx.nu_axis[j];
      const cplx lhs = Zx.values(i, j) * std::conj(Zy.values(i, j));
      cplx rhs(0.0, 0.0);
      for (int n = -n_max; n <= n_max; ++n)
        for (int m = -m_max; m <= m_max; ++m)
          rhs += coef(n + n_max, m + m_max) *
                 expj(-2.0 * pi * n * nu * T + 2.0 * pi * m * tau / T);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

OrthogonalityReport dd_orthogonality_report(const BasisConfig& cfg, double threshold) {
  const DDGrid& g = cfg.grid;
  OrthogonalityReport rep;
  rep.threshold = threshold;
  rep.peak = std::abs(af_truncated_point(cfg, 0.0, 0.0));
  for (int l1 = -g.M_ext; l1 <= g.M_ext; ++l1) {
    for (int k1 = -g.N_ext; k1 <= g.N_ext; ++k1) {
      const double tau = l1 * g.T / g.M_ext;
      const double nu = k1 / (g.N_ext * g.T);
      OrthogonalityEntry e;
      e.l1 = l1;
      e.k1 = k1;
      e.magnitude = std::abs(af_truncated_point(cfg, tau, nu)) / rep.peak;
      e.origin_image = (l1 % g.M_ext == 0) && (k1 % g.N_ext == 0) && !(l1 == 0 && k1 == 0);
      e.orthogonal = e.magnitude <= threshold;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

}  // namespace dd
