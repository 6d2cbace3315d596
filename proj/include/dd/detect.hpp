#ifndef DD_DETECT_HPP
#define DD_DETECT_HPP

#include <functional>

#include "dd/types.hpp"

namespace dd {

/// Gray-labeled unit-energy QPSK: bits (b0, b1) map to
/// ((1-2b0) + j(1-2b1))/sqrt(2), b0 on I and b1 on Q.
struct Constellation {
  enum class Kind { QPSK } kind = Kind::QPSK;

  static constexpr int bits_per_symbol = 2;
  static cplx map2(int b0, int b1) {
    const double s = 1.0 / std::sqrt(2.0);
    return {s * (1 - 2 * b0), s * (1 - 2 * b1)};
  }
  static std::array<cplx, 4> points() {
    return {map2(0, 0), map2(0, 1), map2(1, 0), map2(1, 1)};
  }
};

DDFrame map_bits(const std::vector<int>& bits, const Constellation& c, const DDGrid& grid);

std::vector<int> hard_bits_from_llrs(const Eigen::MatrixXd& llrs);

/// Gaussian LLRs for observations z_k = gain_k x_k + CN(0, var_k),
/// clamped to +-30. Rows follow the delay-fast symbol order.
Eigen::MatrixXd qpsk_llrs(const Eigen::VectorXcd& z, const Eigen::VectorXd& gain,
                          const Eigen::VectorXd& var);

struct DetectorOutput {
  DDFrame hard_symbols;
  Eigen::MatrixXd llrs;  // MN x bits_per_symbol
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
};

/// One-shot DD-domain LMMSE, x_hat = H^H (H H^H + N0 I)^{-1} y, with
/// exact per-symbol bias and interference-plus-noise variances.
DetectorOutput lmmse_dd(const DDFrame& Y, const CMat& H_DD, double N0);

/// Unitary transform pair between the detection domain and the time
/// domain (DZT/IDZT for DD signaling, block DFT for the DMT baseline).
struct DomainTransform {
  std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)> to_symbol;
  std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)> from_symbol;
};

DomainTransform dzt_transform(const DDGrid& grid);

struct CrossDomainOptions {
  int max_iters = 8;
  double damping = 0.5;
  double stop_tol = 1e-4;
};

/// Iterative cross-domain detection: time-domain LMMSE with
/// scalar-variance symbol priors, unitary conversion to the symbol
/// domain, per-symbol posterior update over the constellation, extrinsic
/// exchange back. Keeps the best iterate by residual. An eigendecomposition
/// of H_T H_T^H may be supplied to share the factorization across calls.
DetectorOutput cross_domain_detect(const Eigen::VectorXcd& y_T, const CMat& H_T,
                                   double N0, const Constellation& c,
                                   const DDGrid& grid, const DomainTransform& dom,
                                   const CrossDomainOptions& opt = {},
                                   const Eigen::SelfAdjointEigenSolver<CMat>* eig_ws = nullptr);

}  // namespace dd

#endif  // DD_DETECT_HPP
