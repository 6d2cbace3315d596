#include <doctest.h>

#include "dd/channel.hpp"
#include "dd/zak.hpp"

using namespace dd;

namespace {

// independent brute-force evaluation of the DZT double loop
DDFrame dzt_bruteforce(const CVec& x, const DDGrid& g) {
  DDFrame out(g);
  for (int l = 0; l < g.M; ++l)
    for (int k = 0; k < g.N; ++k) {
      cplx acc(0.0, 0.0);
      for (int n = 0; n < g.N; ++n) {
        const double ang = -2.0 * pi * n * k / g.N;
        acc += x[l + n * g.M] * cplx(std::cos(ang), std::sin(ang));
      }
      out(l, k) = acc / std::sqrt(static_cast<double>(g.N));
    }
  return out;
}

CVec random_vec(int n, uint64_t seed) {
  Rng rng(seed);
  CVec x(n);
  for (auto& v : x) v = rng.gaussian(1.0);
  return x;
}

}  // namespace

TEST_CASE("dzt of zeros and impulse") {
  const DDGrid g(4, 4, 1.0, 1);
  CVec x(16, cplx(0.0, 0.0));
  DDFrame F = dzt(x, g);
  CHECK(F.data.cwiseAbs().maxCoeff() == 0.0);

  x[0] = 1.0;
  F = dzt(x, g);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(F(0, k) - cplx(0.5, 0.0)) < 1e-15);
  for (int l = 1; l < 4; ++l)
    for (int k = 0; k < 4; ++k) CHECK(std::abs(F(l, k)) == 0.0);
}

TEST_CASE("dzt matches the brute-force double loop") {
  const DDGrid g(16, 16, 1.0, 1);
  const CVec x = random_vec(g.frame_size(), 123);
  const DDFrame a = dzt(x, g);
  const DDFrame b = dzt_bruteforce(x, g);
  CHECK((a.data - b.data).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dzt rejects bad lengths") {
  const DDGrid g(4, 4, 1.0, 1);
  CHECK_THROWS_AS(dzt(CVec(15), g), DimensionError);
}

TEST_CASE("idzt impulse and roundtrips") {
  const DDGrid g(4, 4, 1.0, 1);
  DDFrame X(g);
  X(0, 0) = 1.0;
  const CVec x = idzt(X);
  for (int n = 0; n < 4; ++n) CHECK(std::abs(x[4 * n] - cplx(0.5, 0.0)) < 1e-15);

  const DDGrid g8(8, 8, 1.0, 1);
  const CVec v = random_vec(g8.frame_size(), 7);
  const CVec back = idzt(dzt(v, g8));
  double err = 0.0;
  for (size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(back[i] - v[i]));
  CHECK(err <= 1e-12);
}

TEST_CASE("dzt is unitary (Parseval)") {
  const DDGrid g(8, 4, 2.0, 1);
  const CVec v = random_vec(g.frame_size(), 99);
  double ein = 0.0;
  for (const auto& s : v) ein += std::norm(s);
  const DDFrame F = dzt(v, g);
  CHECK(std::abs(F.data.squaredNorm() - ein) <= 1e-12 * ein);
}

TEST_CASE("quasi_periodic_wrap spec examples") {
  const DDGrid g(16, 16, 1.0, 1);
  auto w = quasi_periodic_wrap(3, 2, g);
  CHECK(w.l == 3);
  CHECK(w.k == 2);
  CHECK(std::abs(w.phase - cplx(1.0, 0.0)) < 1e-15);

  w = quasi_periodic_wrap(-2, 5, g);
  CHECK(w.l == 14);
  CHECK(w.k == 5);
  CHECK(std::abs(w.phase - std::polar(1.0, -2.0 * pi * 5.0 / 16.0)) < 1e-15);

  w = quasi_periodic_wrap(2, -3, g);
  CHECK(w.l == 2);
  CHECK(w.k == 13);
  CHECK(std::abs(w.phase - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("quasi_periodic_wrap round trips to identity with unit phase") {
  const DDGrid g(8, 8, 1.0, 1);
  for (int l = 0; l < 8; ++l)
    for (int k = 0; k < 8; ++k) {
      const auto up = quasi_periodic_wrap(l + 8, k + 8, g);
      const auto dn = quasi_periodic_wrap(up.l - 8, up.k - 8, g);
      CHECK(dn.l == l);
      CHECK(dn.k == k);
      CHECK(std::abs(std::abs(up.phase * dn.phase) - 1.0) < 1e-12);
      CHECK(std::abs(up.phase * dn.phase - cplx(1.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("zak_time_sampled basics") {
  const DDGrid g(4, 4, 1.0, 2);
  const int n = 64;  // two periods at dt = 1/8

  SUBCASE("zero in, zero out") {
    TimeSignal x(CVec(n, cplx(0.0, 0.0)), g.sample_rate(), 0.0);
    const auto Z = zak_time_sampled(x, g, 3);
    CHECK(Z.values.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("single pulse at t=0 gives constant magnitude in nu") {
    CVec s(n, cplx(0.0, 0.0));
    s[0] = 1.0;
    TimeSignal x(s, g.sample_rate(), 0.0);
    const auto Z = zak_time_sampled(x, g, 3);
    for (size_t j = 0; j < Z.nu_axis.size(); ++j)
      CHECK(std::abs(std::abs(Z.values(0, j)) - std::sqrt(g.T)) < 1e-12);
  }

  SUBCASE("coverage error for short support") {
    TimeSignal x(CVec(4, cplx(1.0, 0.0)), g.sample_rate(), 0.0);
    CHECK_THROWS_AS(zak_time_sampled(x, g, 2), CoverageError);
  }
}

TEST_CASE("Lemma 1 quasi-periodicity on sampled surfaces") {
  const DDGrid g(8, 8, 1.0, 2);
  // band/time-limited random signal supported well inside the replica window
  Rng rng(2024);
  const int len = 5 * g.M * g.osr;  // 5 periods
  CVec s(len);
  for (auto& v : s) v = rng.gaussian(1.0);
  TimeSignal x(s, g.sample_rate(), 0.0);

  const auto Z = zak_time_sampled(x, g, 8, 2);  // two periods of tau
  const int per = g.M * g.osr;
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < per; ++i)
    for (size_t j = 0; j < Z.nu_axis.size(); ++j) {
      const cplx lhs = Z.values(i + per, j);
      const cplx rhs = std::polar(1.0, 2.0 * pi * g.T * Z.nu_axis[j]) * Z.values(i, j);
      worst = std::max(worst, std::abs(lhs - rhs));
      scale = std::max(scale, std::abs(Z.values(i, j)));
    }
  CHECK(worst <= 1e-9 * scale);
}

TEST_CASE("izak_time inverts zak_time_sampled") {
  const DDGrid g(8, 8, 1.0, 2);
  Rng rng(11);
  const int len = 3 * g.M * g.osr;
  CVec s(len);
  for (auto& v : s) v = rng.gaussian(1.0);
  TimeSignal x(s, g.sample_rate(), 0.0);

  const auto Z = zak_time_sampled(x, g, 6);
  const TimeSignal back = izak_time(Z, 0.0, len);
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < len; ++i) {
    worst = std::max(worst, std::abs(back.samples[i] - x.samples[i]));
    scale = std::max(scale, std::abs(x.samples[i]));
  }
  CHECK(worst <= 1e-9 * scale);
}

TEST_CASE("izak_time of a nu-constant ridge is a time spike") {
  const DDGrid g(4, 4, 1.0, 2);
  DDSampledSurface Z;
  Z.grid = g;
  const int n_tau = g.M * g.osr;
  Z.values = CMat::Zero(n_tau, g.N_ext);
  Z.tau_axis.resize(n_tau);
  Z.nu_axis.resize(g.N_ext);
  for (int i = 0; i < n_tau; ++i) Z.tau_axis[i] = i * g.sample_dt();
  for (int j = 0; j < g.N_ext; ++j) Z.nu_axis[j] = j * g.nu_step();
  const int spike = 3;
  for (int j = 0; j < g.N_ext; ++j) Z.values(spike, j) = 1.0;

  const TimeSignal x = izak_time(Z, 0.0, n_tau);
  for (int i = 0; i < n_tau; ++i) {
    if (i == spike)
      CHECK(std::abs(x.samples[i] - std::sqrt(g.T) * cplx(1.0, 0.0)) < 1e-12);
    else
      CHECK(std::abs(x.samples[i]) < 1e-12);
  }
}
