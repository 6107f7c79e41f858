#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "bec/model.hpp"

namespace bec {

/// Finite section of the half-space Hamiltonian on cells 1..N.
///
/// Block (n, n+r) is A_r and block (n, n-r) is B_r whenever both cells lie in
/// 1..N; hops arriving from cells n' <= 0 (and n' > N) are dropped.
struct TruncatedHamiltonian {
  int cells = 0;
  Mat matrix;
  ModelParams model;
};

/// Throws TooFewCells when cells < 4R.
TruncatedHamiltonian truncate_halfspace(const ModelParams& model, int cells);

/// Truncated block H_{+-}: maps the V_+ components of cells 1..N to the V_-
/// components. Block (n, m) is the coefficient of lambda^{m-n} in h_{+-}.
Mat truncated_pm(const ChiralModel& cm, int cells);
/// Truncated block H_{-+}; block (n, m) is the coefficient of lambda^{m-n} in h_{-+}.
Mat truncated_mp(const ChiralModel& cm, int cells);

enum class EdgeMethod { Companion, Truncated, Both };
std::string_view to_string(EdgeMethod m);

struct EdgeReport {
  int dim_ker_pm = 0;
  int dim_ker_mp = 0;
  int edge_index = 0;
  EdgeMethod method = EdgeMethod::Truncated;
  /// Truncated route: relative singular values below the kernel cutoff.
  /// Companion route: principal-angle sines between D_Dir and the decrease sector.
  std::vector<double> singular_values_near_zero;
  int truncation_cells = 0;
  std::vector<double> localization_lengths;

  /// Companion route only: dimensions of the graded decrease sectors |I_+|, |I_-|.
  std::optional<int> dim_down_plus;
  std::optional<int> dim_down_minus;
  /// Truncated route only: orthonormal left-localized kernel bases in V_+ resp. V_- coordinates
  /// (cell-major, N * d_+ resp. N * d_- rows).
  Mat kernel_pm;
  Mat kernel_mp;
};

/// Energy-E edge modes: dim(D_Dir cap D_down^E). Needs A_R invertible
/// (SingularLeadingHop) and no eigenvalue of C_E within rho of the unit circle
/// (BorderlineEigenvalue).
int edge_mode_count(const ModelParams& model, cplx energy, const Tolerances& tol = {});

/// Zero-energy chiral report from the graded sectors D^0_{down,+} and D^0_{down,-}.
EdgeReport edge_modes_companion(const ChiralModel& cm, const Tolerances& tol = {});

/// Zero-energy kernel dimensions from the truncated blocks. Only `energy == 0`
/// is supported (InvalidArgument otherwise). Throws GapNotCertified, TooFewCells
/// and AmbiguousKernel.
EdgeReport edge_modes_truncated(const ChiralModel& cm, double energy, int cells,
                                const Tolerances& tol = {});

/// Cells N = max(64, ceil(log tol.kernel / log q) + 8R) with q the slowest decay
/// factor of det h_{+-}; capped at 4096.
int recommended_cells(const ChiralModel& cm, const Tolerances& tol = {});

/// edge_modes_truncated at recommended_cells (or `min_cells` if larger),
/// doubling on AmbiguousKernel up to 4096 cells.
EdgeReport edge_modes_auto(const ChiralModel& cm, const Tolerances& tol = {}, int min_cells = 0);

enum class EdgeSide { Left, Right, Delocalized };
std::string_view to_string(EdgeSide s);

struct InGapState {
  double energy = 0.0;
  double localization_length = 0.0;  ///< -1 / ln(rate); infinity when not decaying
  EdgeSide side = EdgeSide::Delocalized;
  Vec vector;                        ///< normalized state on cells 1..N
};

/// Eigenstates of the truncated Hamiltonian in the open window (lo, hi).
///
/// Nearly degenerate eigenvalues (or +-E pairs when `chiral_pairs`) are
/// grouped, the group is split by weight on the left half of the chain, and
/// each localized part is diagonalized on its own. This separates a left edge
/// state from its right-edge partner when finite size hybridizes them.
/// Throws GapNotCertified unless the window lies in a certified band gap.
std::vector<InGapState> in_gap_scan(const ModelParams& model, int cells, double lo, double hi,
                                    const Tolerances& tol = {}, bool chiral_pairs = false);
std::vector<InGapState> in_gap_scan(const ChiralModel& cm, int cells, double lo, double hi,
                                    const Tolerances& tol = {});

/// Norm of each cell of a cell-major vector with `block` entries per cell.
std::vector<double> cell_norms(const Vec& v, int block);

/// -1 / ln(rate) of a fitted decay, infinity for rate >= 1.
double localization_length(const std::vector<double>& norms);

}  // namespace bec
