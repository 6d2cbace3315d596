#include "dd/detect.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "dd/zak.hpp"

namespace dd {

namespace {

constexpr double kLlrClamp = 30.0;

double clamp_llr(double v) { return std::max(-kLlrClamp, std::min(kLlrClamp, v)); }

}  // namespace

DDFrame map_bits(const std::vector<int>& bits, const Constellation& c, const DDGrid& grid) {
  (void)c;
  const int MN = grid.frame_size();
  if (static_cast<int>(bits.size()) != MN * Constellation::bits_per_symbol)
    throw DimensionError("map_bits: bit count must be M*N*log2(|constellation|)");
  DDFrame X(grid);
  for (int s = 0; s < MN; ++s) {
    const int l = s % grid.M;
    const int k = s / grid.M;
    X(l, k) = Constellation::map2(bits[2 * s], bits[2 * s + 1]);
  }
  return X;
}

std::vector<int> hard_bits_from_llrs(const Eigen::MatrixXd& llrs) {
  std::vector<int> bits(llrs.rows() * llrs.cols());
  for (int s = 0; s < llrs.rows(); ++s)
    for (int b = 0; b < llrs.cols(); ++b)
      bits[s * llrs.cols() + b] = llrs(s, b) >= 0.0 ? 0 : 1;
  return bits;
}

Eigen::MatrixXd qpsk_llrs(const Eigen::VectorXcd& z, const Eigen::VectorXd& gain,
                          const Eigen::VectorXd& var) {
  const int n = static_cast<int>(z.size());
  Eigen::MatrixXd llrs(n, 2);
  const double root2 = std::sqrt(2.0);
  for (int s = 0; s < n; ++s) {
    const double v = std::max(var(s), 1e-30);
    const double g = gain(s);
    llrs(s, 0) = clamp_llr(2.0 * root2 * g * z(s).real() / v);
    llrs(s, 1) = clamp_llr(2.0 * root2 * g * z(s).imag() / v);
  }
  return llrs;
}

DetectorOutput lmmse_dd(const DDFrame& Y, const CMat& H_DD, double N0) {
  const int n = static_cast<int>(H_DD.rows());
  if (H_DD.cols() != n || Y.grid.frame_size() != n)
    throw DimensionError("lmmse_dd: H_DD must be square MN x MN");
  bool regularized = false;
  double n0 = N0;
  if (n0 <= 0.0) {
    n0 = 1e-12;
    regularized = true;
  }
  const Eigen::VectorXcd y = Y.vec();
  CMat A = H_DD * H_DD.adjoint();
  A.diagonal().array() += n0;
  const Eigen::LLT<CMat> llt(A);
  const CMat W = H_DD.adjoint() * llt.solve(CMat::Identity(n, n));
  const Eigen::VectorXcd xhat = W * y;

  const CMat G = W * H_DD;
  Eigen::VectorXd gain(n), var(n);
  for (int k = 0; k < n; ++k) {
    const double gk = G(k, k).real();
    const double total = G.row(k).squaredNorm();
    const double wnorm = W.row(k).squaredNorm();
    gain(k) = gk;
    var(k) = std::max(total - gk * gk + n0 * wnorm, 1e-30);
  }

  DetectorOutput out;
  out.llrs = qpsk_llrs(xhat, gain, var);
  const std::vector<int> bits = hard_bits_from_llrs(out.llrs);
  out.hard_symbols = map_bits(bits, Constellation{}, Y.grid);
  out.iterations = 1;
  out.residual = (y - H_DD * out.hard_symbols.vec()).norm();
  out.converged = !regularized;
  return out;
}

DomainTransform dzt_transform(const DDGrid& grid) {
  DomainTransform dom;
  dom.to_symbol = [grid](const Eigen::VectorXcd& x) {
    CVec v(x.data(), x.data() + x.size());
    return dzt(v, grid).vec();
  };
  dom.from_symbol = [grid](const Eigen::VectorXcd& s) {
    const DDFrame f = DDFrame::unvec(grid, s);
    const CVec v = idzt(f);
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), v.size()).eval();
  };
  return dom;
}

DetectorOutput cross_domain_detect(const Eigen::VectorXcd& y_T, const CMat& H_T,
                                   double N0, const Constellation& c,
                                   const DDGrid& grid, const DomainTransform& dom,
                                   const CrossDomainOptions& opt,
                                   const Eigen::SelfAdjointEigenSolver<CMat>* eig_ws) {
  (void)c;
  const int n = static_cast<int>(H_T.rows());
  if (H_T.cols() != n || y_T.size() != n)
    throw DimensionError("cross_domain_detect: dimension mismatch");
  const double n0 = std::max(N0, 1e-12);

  // spectral decomposition of H H^H, reused across iterations
  Eigen::SelfAdjointEigenSolver<CMat> local;
  if (!eig_ws) {
    local.compute(H_T * H_T.adjoint());
    eig_ws = &local;
  }
  const Eigen::VectorXd lam = eig_ws->eigenvalues().cwiseMax(0.0);
  const CMat& U = eig_ws->eigenvectors();

  const auto points = Constellation::points();

  Eigen::VectorXcd prior_mean = Eigen::VectorXcd::Zero(n);
  double prior_var = 1.0;

  DetectorOutput best;
  best.residual = std::numeric_limits<double>::infinity();
  best.converged = false;
  Eigen::VectorXcd post_mean_prev = Eigen::VectorXcd::Zero(n);

  int it = 0;
  for (it = 0; it < opt.max_iters; ++it) {
    // time-domain LMMSE with scalar prior variance
    const Eigen::VectorXcd xbar_T = dom.from_symbol(prior_mean);
    const Eigen::VectorXcd resid_T = y_T - H_T * xbar_T;
    Eigen::VectorXcd scaled = U.adjoint() * resid_T;
    for (int i = 0; i < n; ++i) scaled(i) /= prior_var * lam(i) + n0;
    const Eigen::VectorXcd xhat_T = xbar_T + prior_var * (H_T.adjoint() * (U * scaled));

    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += lam(i) / (prior_var * lam(i) + n0);
    const double v_post = std::max(prior_var - prior_var * prior_var * trace / n, 1e-12);

    // extrinsic message to the symbol domain
    double v_ext;
    if (prior_var - v_post < 1e-12 * prior_var)
      v_ext = 1e12;
    else
      v_ext = v_post * prior_var / (prior_var - v_post);
    const Eigen::VectorXcd z = dom.to_symbol(xhat_T);
    const Eigen::VectorXcd m_ext =
        v_ext * (z / v_post - prior_mean / prior_var);

    // per-symbol posterior over the constellation
    Eigen::VectorXcd post_mean(n);
    double post_var_acc = 0.0;
    Eigen::MatrixXd llrs(n, 2);
    const double root2 = std::sqrt(2.0);
    for (int s = 0; s < n; ++s) {
      double wsum = 0.0;
      cplx mean(0.0, 0.0);
      double wmax = -1e300;
      std::array<double, 4> logw;
      for (size_t q = 0; q < points.size(); ++q) {
        logw[q] = -std::norm(m_ext(s) - points[q]) / v_ext;
        wmax = std::max(wmax, logw[q]);
      }
      for (size_t q = 0; q < points.size(); ++q) {
        const double w = std::exp(logw[q] - wmax);
        wsum += w;
        mean += w * points[q];
      }
      post_mean(s) = mean / wsum;
      post_var_acc += 1.0 - std::norm(post_mean(s));
      llrs(s, 0) = clamp_llr(2.0 * root2 * m_ext(s).real() / v_ext);
      llrs(s, 1) = clamp_llr(2.0 * root2 * m_ext(s).imag() / v_ext);
    }
    const double post_var = std::max(post_var_acc / n, 1e-8);

    const double res = (y_T - H_T * dom.from_symbol(post_mean)).norm();
    if (res < best.residual) {
      best.residual = res;
      best.llrs = llrs;
      best.iterations = it + 1;
    }

    const double delta = (post_mean - post_mean_prev).cwiseAbs().mean();
    post_mean_prev = post_mean;

    prior_mean = (1.0 - opt.damping) * prior_mean + opt.damping * post_mean;
    prior_var = (1.0 - opt.damping) * prior_var + opt.damping * post_var;

    if (delta < opt.stop_tol) {
      best.converged = true;
      break;
    }
  }
  if (it == opt.max_iters) best.converged = false;

  const std::vector<int> bits = hard_bits_from_llrs(best.llrs);
  best.hard_symbols = map_bits(bits, Constellation{}, grid);
  return best;
}

}  // namespace dd
