#ifndef DD_TYPES_HPP
#define DD_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dd {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using CMat = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

/// Thrown when an argument violates a documented precondition
/// (dimension mismatch, off-lattice delay, bad axis coverage, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CoverageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Frame geometry. M delay bins and N Doppler bins per fundamental
/// rectangle, delay period T seconds, osr time-domain samples per delay
/// bin. M_ext/N_ext are the extended sizes used by truncation windows
/// with excess bandwidth/duration.
struct DDGrid {
  int M = 0;
  int N = 0;
  double T = 1.0;
  int osr = 2;
  int M_ext = 0;
  int N_ext = 0;

  DDGrid() = default;
  DDGrid(int m, int n, double t, int oversample = 2, int m_ext = -1, int n_ext = -1)
      : M(m), N(n), T(t), osr(oversample),
        M_ext(m_ext < 0 ? m : m_ext),
        N_ext(n_ext < 0 ? n : n_ext) {
    if (M < 1 || N < 1 || osr < 1) throw DimensionError("DDGrid: M, N, osr must be >= 1");
    if (T <= 0.0) throw DimensionError("DDGrid: T must be positive");
    if (M_ext < M || N_ext < N) throw DimensionError("DDGrid: extended sizes must be >= M, N");
  }

  double sample_dt() const { return T / (M * osr); }      // time lattice step
  double sample_rate() const { return M * osr / T; }
  double frame_duration() const { return N * T; }
  double bandwidth() const { return M / T; }              // nominal, no excess
  double delay_res() const { return T / M; }
  double doppler_res() const { return 1.0 / (N * T); }
  double nu_step() const { return 1.0 / (N_ext * T); }    // Doppler sampling of surfaces
  int frame_size() const { return M * N; }

  bool operator==(const DDGrid&) const = default;
};

/// M x N matrix of DD-domain symbols, delay index l on rows, Doppler
/// index k on columns.
struct DDFrame {
  DDGrid grid;
  CMat data;

  DDFrame() = default;
  explicit DDFrame(const DDGrid& g) : grid(g), data(CMat::Zero(g.M, g.N)) {}
  DDFrame(const DDGrid& g, CMat d) : grid(g), data(std::move(d)) {
    if (data.rows() != grid.M || data.cols() != grid.N)
      throw DimensionError("DDFrame: data dimensions do not match grid");
  }

  cplx& operator()(int l, int k) { return data(l, k); }
  cplx operator()(int l, int k) const { return data(l, k); }

  /// Delay-fast vectorization: vec[l + k*M] = data(l, k).
  Eigen::VectorXcd vec() const {
    return Eigen::Map<const Eigen::VectorXcd>(data.data(), data.size());
  }
  static DDFrame unvec(const DDGrid& g, const Eigen::VectorXcd& v) {
    if (v.size() != g.frame_size()) throw DimensionError("DDFrame::unvec: bad length");
    DDFrame f(g);
    f.data = Eigen::Map<const CMat>(v.data(), g.M, g.N);
    return f;
  }
};

/// Uniformly sampled complex baseband signal. t0 is the time of the
/// first sample in seconds.
struct TimeSignal {
  CVec samples;
  double sample_rate = 1.0;
  double t0 = 0.0;

  TimeSignal() = default;
  TimeSignal(CVec s, double rate, double start)
      : samples(std::move(s)), sample_rate(rate), t0(start) {
    if (sample_rate <= 0.0) throw DimensionError("TimeSignal: sample_rate must be positive");
  }

  int size() const { return static_cast<int>(samples.size()); }
  double dt() const { return 1.0 / sample_rate; }
  double time_at(int i) const { return t0 + i * dt(); }
  double duration() const { return samples.size() * dt(); }

  /// Sample value at time t; zero outside the stored support. t must lie
  /// on the sample lattice.
  cplx at_time(double t) const {
    double x = (t - t0) * sample_rate;
    long i = std::lround(x);
    if (std::abs(x - static_cast<double>(i)) > 1e-6)
      throw LatticeError("TimeSignal::at_time: t is off the sample lattice");
    if (i < 0 || i >= static_cast<long>(samples.size())) return {0.0, 0.0};
    return samples[static_cast<size_t>(i)];
  }

  double energy() const {
    double e = 0.0;
    for (const auto& v : samples) e += std::norm(v);
    return e * dt();
  }
};

/// Sampled Zak-domain surface over a rectangular (tau, nu) region.
/// values(i, j) corresponds to (tau_axis[i], nu_axis[j]).
struct DDSampledSurface {
  DDGrid grid;
  CMat values;
  std::vector<double> tau_axis;
  std::vector<double> nu_axis;
};

/// Sampled cross/auto ambiguity surface; `source` describes the pulse pair.
struct AmbiguitySurface {
  CMat values;
  std::vector<double> tau_axis;
  std::vector<double> nu_axis;
  std::string source;
};

}  // namespace dd

#endif  // DD_TYPES_HPP
