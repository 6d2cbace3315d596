#include <doctest.h>

#include "dd/channel.hpp"
#include "dd/pulses.hpp"

using namespace dd;

TEST_CASE("rectangular window values") {
  WindowSpec w{WindowKind::Rect, WindowDomain::Time, 8.0, 0.0, true};
  CHECK(window_value(w, 3.1) == doctest::Approx(1.0 / std::sqrt(8.0)));
  CHECK(window_value(w, 0.0) == doctest::Approx(1.0 / std::sqrt(8.0)));
  CHECK(window_value(w, 8.5) == 0.0);
  CHECK(window_value(w, -0.1) == 0.0);
}

TEST_CASE("window power normalization") {
  const double step = 1e-4;
  for (WindowKind kind : {WindowKind::Rect, WindowKind::RRC, WindowKind::Cosine}) {
    WindowSpec w{kind, WindowDomain::Time, 8.0, 0.3, true};
    double e = 0.0;
    for (double x = step / 2; x < w.span; x += step) {
      const double v = window_value(w, x);
      e += v * v * step;
    }
    CAPTURE(static_cast<int>(kind));
    CHECK(e == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("RRC half-power point at the nominal band edge") {
  const double beta = 0.3;
  WindowSpec w{WindowKind::RRC, WindowDomain::Frequency, 13.0, beta, true};
  const double b_nom = w.span / (1.0 + beta);
  const double plateau = window_value(w, w.span / 2.0);
  // midpoint of the roll-off sits half the nominal width away from center
  const double v = window_value(w, w.span / 2.0 + b_nom / 2.0);
  CHECK(v == doctest::Approx(plateau / std::sqrt(2.0)).epsilon(1e-12));
  const double v2 = window_value(w, w.span / 2.0 - b_nom / 2.0);
  CHECK(v2 == doctest::Approx(plateau / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("window_samples covers the support") {
  WindowSpec w{WindowKind::Rect, WindowDomain::Time, 4.0, 0.0, true};
  const auto s = window_samples(w, 0.5, 0.0);
  CHECK(s.size() == 9);
  for (double v : s) CHECK(v == doctest::Approx(0.5));
  CHECK_THROWS_AS(window_samples(w, -1.0, 0.0), DimensionError);
}

TEST_CASE("fw_time_value of the rectangular window integrates its band") {
  WindowSpec fw{WindowKind::Rect, WindowDomain::Frequency, 8.0, 0.0, true};
  // t = 0: integral of the window itself
  const cplx v0 = fw_time_value(fw, 0.0);
  CHECK(v0.real() == doctest::Approx(8.0 / std::sqrt(8.0)));
  CHECK(v0.imag() == doctest::Approx(0.0));
  // numeric quadrature oracle at a few t
  for (double t : {0.05, 0.13, -0.21}) {
    cplx acc(0.0, 0.0);
    const double df = 1e-4;
    for (double f = df / 2; f < fw.span; f += df)
      acc += window_value(fw, f) * std::polar(1.0, 2.0 * pi * f * t) * df;
    const cplx v = fw_time_value(fw, t);
    CHECK(std::abs(v - acc) < 1e-6);
  }
}

TEST_CASE("fw_time_value of RRC and cosine windows against quadrature") {
  for (WindowKind kind : {WindowKind::RRC, WindowKind::Cosine}) {
    WindowSpec fw{kind, WindowDomain::Frequency, 10.4, 0.3, true};
    for (double t : {0.0, 0.07, -0.33, 1.5}) {
      cplx acc(0.0, 0.0);
      const double df = 1e-4;
      for (double f = df / 2; f < fw.span; f += df)
        acc += window_value(fw, f) * std::polar(1.0, 2.0 * pi * f * t) * df;
      const cplx v = fw_time_value(fw, t);
      CAPTURE(static_cast<int>(kind));
      CAPTURE(t);
      CHECK(std::abs(v - acc) < 1e-5);
    }
  }
}

TEST_CASE("pulsone structure for Rect windows") {
  const BasisConfig cfg = make_basis_config(16, 8, 1.0, 2, WindowKind::Rect, 0.0,
                                            WindowKind::Rect, 0.0);
  const TimeSignal p = pulsone_time(0, 0, cfg);

  // peaks at t = nT with equal magnitude
  std::vector<double> peaks;
  for (int n = 0; n < cfg.grid.N_ext; ++n) {
    const double t = n * cfg.grid.T;
    const long i = std::lround((t - p.t0) * p.sample_rate);
    peaks.push_back(std::abs(p.samples[i]));
  }
  for (double v : peaks) CHECK(v == doctest::Approx(peaks.front()).epsilon(1e-9));

  // the peak dominates its neighborhood
  const long mid = std::lround((4.0 - p.t0) * p.sample_rate);
  CHECK(std::abs(p.samples[mid]) > 3.0 * std::abs(p.samples[mid + cfg.grid.osr]));
}

TEST_CASE("pulsone delay shift equals index shift") {
  const BasisConfig cfg = make_basis_config(16, 8, 1.0, 2, WindowKind::Rect, 0.0,
                                            WindowKind::Rect, 0.0);
  const TimeSignal p0 = pulsone_time(0, 0, cfg);
  const TimeSignal p1 = pulsone_time(1, 0, cfg);
  // p1(t) = p0(t - T/M) for k = 0
  CHECK(p1.t0 == doctest::Approx(p0.t0 + cfg.grid.delay_res()));
  double err = 0.0;
  for (int i = 0; i < p0.size(); ++i)
    err = std::max(err, std::abs(p1.samples[i] - p0.samples[i]));
  CHECK(err <= 1e-12);
}

TEST_CASE("pulsone index range errors") {
  const BasisConfig cfg = make_basis_config(4, 4, 1.0, 2, WindowKind::Rect, 0.0,
                                            WindowKind::Rect, 0.0);
  CHECK_THROWS_AS(pulsone_time(-1, 0, cfg), DimensionError);
  CHECK_THROWS_AS(pulsone_time(0, 4, cfg), DimensionError);
}

TEST_CASE("pulsone separability: energy concentrates at train centers") {
  const BasisConfig cfg = make_basis_config(16, 8, 1.0, 2, WindowKind::Rect, 0.0,
                                            WindowKind::Rect, 0.0);
  const TimeSignal p = pulsone_time(3, 2, cfg);
  const double tau = 3 * cfg.grid.delay_res();
  double total = 0.0, tight = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const double t = p.time_at(i);
    const double e = std::norm(p.samples[i]);
    total += e;
    // distance to the nearest train center tau + nT
    const double d = std::abs(t - tau - std::round((t - tau) / cfg.grid.T) * cfg.grid.T);
    if (d <= cfg.grid.T / 8.0) tight += e;
  }
  CHECK(tight / total >= 0.99);
}

TEST_CASE("pulsone inner products vanish on the integer lattice") {
  const BasisConfig cfg = make_basis_config(32, 32, 1.0, 2, WindowKind::Rect, 0.0,
                                            WindowKind::Rect, 0.0);
  const TimeSignal a = pulsone_time(0, 0, cfg);
  double ref = 0.0;
  for (const auto& v : a.samples) ref += std::norm(v);
  ref *= a.dt();

  for (auto [l, k] : {std::pair{1, 0}, {0, 1}, {3, 5}}) {
    const TimeSignal b = pulsone_time(l, k, cfg);
    // align to the common lattice: integrate a * conj(b)
    cplx acc(0.0, 0.0);
    for (int i = 0; i < a.size(); ++i) {
      const double t = a.time_at(i);
      const long j = std::lround((t - b.t0) * b.sample_rate);
      if (j < 0 || j >= b.size()) continue;
      acc += a.samples[i] * std::conj(b.samples[j]);
    }
    acc *= a.dt();
    CAPTURE(l);
    CAPTURE(k);
    CHECK(std::abs(acc) / ref < 1e-2);
  }
}

TEST_CASE("dirichlet closed form against brute-force sums") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = 2 + static_cast<int>(rng.next_u64() % 40);
    const double x = rng.uniform(-2.0, 2.0);
    cplx brute(0.0, 0.0);
    for (int l = 0; l < K; ++l) brute += std::polar(1.0, 2.0 * pi * l * x);
    const cplx closed = dirichlet_sum(K, x);
    CHECK(std::abs(closed - brute) <= 1e-10 * std::max(1.0, std::abs(brute)));
  }
  CHECK(dirichlet_sum(8, 0.0) == cplx(8.0, 0.0));
  CHECK(dirichlet_sum(8, 3.0) == cplx(8.0, 0.0));
  CHECK(dirichlet_sum(8, 0.25) == cplx(0.0, 0.0));  // Kx integer, x not
}

TEST_CASE("Eq(40)-style closed form vs finite double-sum oracle") {
  for (WindowKind tk : {WindowKind::Rect, WindowKind::Cosine}) {
    const BasisConfig cfg = make_basis_config(16, 12, 1.0, 2, tk, 0.0, WindowKind::Rect, 0.0);
    const DDGrid& g = cfg.grid;
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const double tau = rng.uniform(0.0, g.T * 0.999);
      const double nu = rng.uniform(0.0, 0.999 / g.T);
      // oracle: Dirichlet double sum with the window factors of the
      // periodic-window factorization
      cplx dsum(0.0, 0.0);
      for (int l = 0; l < g.M_ext; ++l)
        for (int k = 0; k < g.N_ext; ++k)
          dsum += std::polar(1.0, 2.0 * pi * (l * tau / g.T - k * nu * g.T));
      const cplx oracle =
          window_value(cfg.freq_window, 0.0) * window_value(cfg.time_window, tau) * dsum;
      const cplx closed = truncated_basis_dd_closed_form(tau, nu, cfg);
      CHECK(std::abs(closed - oracle) <= 1e-10 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST_CASE("closed form limits and zero crossings") {
  const BasisConfig cfg = make_basis_config(16, 8, 1.0, 2, WindowKind::Rect, 0.0,
                                            WindowKind::Rect, 0.0);
  const DDGrid& g = cfg.grid;
  const cplx origin = truncated_basis_dd_closed_form(0.0, 0.0, cfg);
  const double expect = window_value(cfg.freq_window, 0.0) *
                        window_value(cfg.time_window, 0.0) * g.M_ext * g.N_ext;
  CHECK(std::abs(origin - cplx(expect, 0.0)) <= 1e-12 * expect);

  const cplx z = truncated_basis_dd_closed_form(0.0, 1.0 / (g.N_ext * g.T), cfg);
  CHECK(std::abs(z) == 0.0);
}

TEST_CASE("closed form rejects RRC windows") {
  const BasisConfig cfg = make_basis_config(16, 8, 1.0, 2, WindowKind::RRC, 0.1,
                                            WindowKind::RRC, 0.3);
  CHECK_THROWS_AS(truncated_basis_dd_closed_form(0.1, 0.1, cfg), DimensionError);
}

TEST_CASE("RRC basis grows the extended grid") {
  const BasisConfig cfg = make_basis_config(16, 16, 1.0, 2, WindowKind::RRC, 0.1,
                                            WindowKind::RRC, 0.3);
  CHECK(cfg.grid.M_ext == 21);  // ceil(16 * 1.3)
  CHECK(cfg.grid.N_ext == 18);  // ceil(16 * 1.1)
  CHECK(cfg.time_window.span == doctest::Approx(18.0));
  CHECK(cfg.freq_window.span == doctest::Approx(21.0));
}

TEST_CASE("tf_consistent_shift basics") {
  const BasisConfig cfg = make_basis_config(8, 8, 1.0, 2, WindowKind::Rect, 0.0,
                                            WindowKind::Rect, 0.0);
  const TimeSignal p = pulsone_time(0, 0, cfg);

  SUBCASE("identity at (0,0)") {
    const TimeSignal q = tf_consistent_shift(p, 0.0, 0.0);
    double err = 0.0;
    for (int i = 0; i < p.size(); ++i)
      err = std::max(err, std::abs(q.samples[i] - p.samples[i]));
    CHECK(err == 0.0);
  }

  SUBCASE("pure delay at nu0 = 0") {
    const double tau0 = 3 * p.dt();
    const TimeSignal q = tf_consistent_shift(p, tau0, 0.0);
    CHECK(q.t0 == doctest::Approx(p.t0 + tau0));
    for (int i = 0; i < p.size(); ++i) CHECK(q.samples[i] == p.samples[i]);
  }

  SUBCASE("norm preservation") {
    const TimeSignal q = tf_consistent_shift(p, 5 * p.dt(), 0.37);
    double ep = 0.0, eq = 0.0;
    for (const auto& v : p.samples) ep += std::norm(v);
    for (const auto& v : q.samples) eq += std::norm(v);
    CHECK(ep == doctest::Approx(eq).epsilon(1e-14));
  }

  SUBCASE("off-lattice tau0 rejected") {
    CHECK_THROWS_AS(tf_consistent_shift(p, 0.3 * p.dt(), 0.0), LatticeError);
  }
}

TEST_CASE("Lemma 3 composition law on the lattice") {
  const BasisConfig cfg = make_basis_config(8, 8, 1.0, 2, WindowKind::Rect, 0.0,
                                            WindowKind::Rect, 0.0);
  const TimeSignal p = pulsone_time(0, 0, cfg);
  Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const double dt = p.dt();
    const double tau0 = static_cast<double>(rng.next_u64() % 32) * dt;
    const double tau1 = static_cast<double>(rng.next_u64() % 32) * dt;
    const double nu0 = rng.uniform(-1.0, 1.0);
    const double nu1 = rng.uniform(-1.0, 1.0);

    const TimeSignal lhs = tf_consistent_shift(tf_consistent_shift(p, tau0, nu0), tau1, nu1);
    TimeSignal rhs = tf_consistent_shift(p, tau0 + tau1, nu0 + nu1);
    const cplx extra = std::polar(1.0, 2.0 * pi * nu1 * tau0);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < rhs.size(); ++i) {
      err = std::max(err, std::abs(lhs.samples[i] - extra * rhs.samples[i]));
      scale = std::max(scale, std::abs(rhs.samples[i]));
    }
    CHECK(err <= 1e-12 * scale);
  }
}
