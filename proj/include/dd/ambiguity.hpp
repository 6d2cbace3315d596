#ifndef DD_AMBIGUITY_HPP
#define DD_AMBIGUITY_HPP

#include "dd/pulses.hpp"
#include "dd/types.hpp"

namespace dd {

/// A(tau, nu) = sum_t x(t) y*(t - tau) e^{-j2pi nu (t - tau)} dt with tau
/// realized as integer-sample shifts of the common lattice.
AmbiguitySurface cross_ambiguity(const TimeSignal& x, const TimeSignal& y,
                                 const std::vector<double>& tau_axis,
                                 const std::vector<double>& nu_axis);

/// Single point of the cross ambiguity function.
cplx cross_ambiguity_point(const TimeSignal& x, const TimeSignal& y, double tau, double nu);

/// Exact continuous ambiguity of a window against itself. For Time
/// windows this is A_TW(tau, nu); for Frequency windows A_FW(tau, nu)
/// evaluated through the frequency-domain form.
cplx window_ambiguity(const WindowSpec& w, double tau, double nu);

/// Ambiguity function of the truncated DD basis. Rect windows follow the
/// finite Dirichlet-sum route (exact values on the DD lattice); other
/// windows evaluate the window-ambiguity double sum with truncation
/// bounds taken from the window supports.
AmbiguitySurface af_truncated_closed_form(const BasisConfig& cfg,
                                          const std::vector<double>& tau_axis,
                                          const std::vector<double>& nu_axis);

cplx af_truncated_point(const BasisConfig& cfg, double tau, double nu);

/// Asymptotic (large M_ext, N_ext) form of the Rect-window ambiguity:
/// exactly quasi-periodic with unit echoes, the regime in which the
/// symbol-wise IO relation reduces to the integer closed form.
cplx af_rect_ideal_point(const BasisConfig& cfg, double tau, double nu);

/// Evaluates both sides of the Zak-product identity
///   Z_x Z_y* = sum_n sum_m A_{x,y}(nT, m/T) e^{-j2pi n nu T} e^{j2pi m tau/T}
/// on the sampled fundamental rectangle and returns the maximum absolute
/// residual.
double zak_af_identity_check(const TimeSignal& x, const TimeSignal& y,
                             const DDGrid& grid, int n_max, int m_max);

struct OrthogonalityEntry {
  int l1 = 0;
  int k1 = 0;
  double magnitude = 0.0;  // normalized, peak = 1 at origin
  bool orthogonal = false;
  bool origin_image = false;  // quasi-periodic image of the origin
  bool alias_boundary = false;  // |l1| = M_ext or |k1| = N_ext: the ambiguity
                                // repeats (with slight decay) past these lines
};

struct OrthogonalityReport {
  std::vector<OrthogonalityEntry> entries;
  double threshold = 1e-2;
  double peak = 0.0;
};

/// |A| of the truncated basis at the integer DD lattice
/// (l1 T/M_ext, k1/(N_ext T)) for l1 in [-M_ext, M_ext], k1 in
/// [-N_ext, N_ext]. Points that are quasi-periodic images of the origin
/// carry the ambiguity echoes and are marked rather than flagged.
OrthogonalityReport dd_orthogonality_report(const BasisConfig& cfg, double threshold = 1e-2);

}  // namespace dd

#endif  // DD_AMBIGUITY_HPP
