#include "dd/zak.hpp"

#include "dd/fft.hpp"

namespace dd {

DDFrame dzt(const CVec& x, const DDGrid& grid) {
  const int M = grid.M, N = grid.N;
  if (static_cast<int>(x.size()) != M * N)
    throw DimensionError("dzt: input length must be exactly M*N");
  DDFrame out(grid);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  CVec row(N);
  for (int l = 0; l < M; ++l) {
    for (int n = 0; n < N; ++n) row[n] = x[l + n * M];
    dft_inplace(row, false);
    for (int k = 0; k < N; ++k) out(l, k) = row[k] * scale;
  }
  return out;
}

DDFrame dzt(const TimeSignal& x, const DDGrid& grid) { return dzt(x.samples, grid); }

CVec idzt(const DDFrame& X) {
  const int M = X.grid.M, N = X.grid.N;
  CVec out(static_cast<size_t>(M) * N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  CVec row(N);
  for (int l = 0; l < M; ++l) {
    for (int k = 0; k < N; ++k) row[k] = X(l, k);
    dft_inplace(row, true);
    for (int n = 0; n < N; ++n) out[l + n * M] = row[n] * scale;
  }
  return out;
}

WrapResult quasi_periodic_wrap(int l, int k, const DDGrid& grid) {
  const int M = grid.M, N = grid.N;
  auto floordiv = [](int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
  };
  const int ql = floordiv(l, M);
  const int lw = l - ql * M;
  const int kw = k - floordiv(k, N) * N;
  const double ang = 2.0 * pi * ql * kw / static_cast<double>(N);
  return {lw, kw, cplx(std::cos(ang), std::sin(ang))};
}

DDSampledSurface zak_time_sampled(const TimeSignal& x, const DDGrid& grid,
                                  int replicas, int tau_periods) {
  if (replicas < 1) throw DimensionError("zak_time_sampled: replicas must be >= 1");
  if (tau_periods < 1) throw DimensionError("zak_time_sampled: tau_periods must be >= 1");
  const double T = grid.T;
  if (x.duration() < T)
    throw CoverageError("zak_time_sampled: signal support shorter than one period");
  const double dt = grid.sample_dt();
  if (std::abs(x.sample_rate * dt - 1.0) > 1e-9)
    throw LatticeError("zak_time_sampled: signal rate does not match the grid lattice");

  const int n_tau = grid.M * grid.osr * tau_periods;
  const int n_nu = grid.N_ext;
  DDSampledSurface Z;
  Z.grid = grid;
  Z.values = CMat::Zero(n_tau, n_nu);
  Z.tau_axis.resize(n_tau);
  Z.nu_axis.resize(n_nu);
  for (int i = 0; i < n_tau; ++i) Z.tau_axis[i] = i * dt;
  for (int j = 0; j < n_nu; ++j) Z.nu_axis[j] = j * grid.nu_step();

  const double rootT = std::sqrt(T);
  for (int i = 0; i < n_tau; ++i) {
    const double tau = Z.tau_axis[i];
    for (int k = -replicas; k <= replicas; ++k) {
      const cplx xv = x.at_time(tau + k * T);
      if (xv == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < n_nu; ++j) {
        const double ang = -2.0 * pi * k * Z.nu_axis[j] * T;
        Z.values(i, j) += rootT * xv * cplx(std::cos(ang), std::sin(ang));
      }
    }
  }
  return Z;
}

TimeSignal izak_time(const DDSampledSurface& Z, double t0, int count) {
  const DDGrid& g = Z.grid;
  const double T = g.T;
  const int n_nu = static_cast<int>(Z.nu_axis.size());
  if (n_nu < 1 || Z.nu_axis.front() != 0.0 ||
      Z.nu_axis.back() >= 1.0 / T)
    throw CoverageError("izak_time: Doppler axis must cover [0, 1/T)");
  const double dnu = g.nu_step();
  const double dt = g.sample_dt();
  const int per_period = g.M * g.osr;

  CVec out(count);
  for (int i = 0; i < count; ++i) {
    const double t = t0 + i * dt;
    // Fold t into the stored fundamental rectangle; Lemma-1 phase applies
    // per period of displacement.
    long idx = std::lround(t / dt);
    long fold = idx >= 0 ? idx / per_period : -((-idx + per_period - 1) / per_period);
    int i_tau = static_cast<int>(idx - fold * per_period);
    cplx acc(0.0, 0.0);
    for (int j = 0; j < n_nu; ++j) {
      const double ang = 2.0 * pi * fold * T * Z.nu_axis[j];
      acc += Z.values(i_tau, j) * cplx(std::cos(ang), std::sin(ang));
    }
    out[i] = std::sqrt(T) * acc * dnu;
  }
  return TimeSignal(std::move(out), 1.0 / dt, t0);
}

}  // namespace dd
