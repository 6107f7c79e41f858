#pragma once

#include <optional>
#include <vector>

#include "bec/model.hpp"

namespace bec {

/// Sorted band energies E_1(k) <= ... <= E_d(k) on the grid k_i = -pi + 2 pi i / num_k.
struct BandStructure {
  std::vector<double> k;
  std::vector<Eigen::VectorXd> energies;
  double lipschitz_bound = 0.0;  ///< L = sum_r r (||A_r|| + ||B_r||)

  int num_k() const { return static_cast<int>(k.size()); }
  double spacing() const;  ///< grid spacing 2 pi / num_k
};

/// Band gap between bands j and j+1 (1-based j).
///
/// `e_minus`/`e_plus` are the sampled extrema sup_k E_j and inf_k E_{j+1}.
/// The certified interval shrinks each side by L * dk / 2, and
/// `certificate_margin` is its width; a gap counts only when the margin is positive.
struct GapReport {
  bool gapped = false;
  std::optional<int> gap_index;
  double e_minus = 0.0;
  double e_plus = 0.0;
  double certificate_margin = 0.0;
  double certified_minus = 0.0;
  double certified_plus = 0.0;
  int num_k = 0;
};

/// Requires a self-adjoint model and num_k >= 8. Throws NotSelfAdjoint / InvalidArgument.
BandStructure band_structure(const ModelParams& model, int num_k, int threads = 1);

/// Chooses the gap containing `around_energy` when given, otherwise the widest
/// sampled gap. Never throws; an uncertified candidate is returned with
/// gapped = false and its (negative) margin.
GapReport detect_gap(const BandStructure& bands, std::optional<double> around_energy = std::nullopt);

/// detect_gap with the grid doubled from `initial_k` up to `max_k` while the
/// sampled gap is open but not yet certified.
GapReport certify_gap(const ModelParams& model, std::optional<double> around_energy = std::nullopt,
                      int initial_k = 512, int max_k = 1 << 14, int threads = 1);

/// min_k sigma_min(h_{+-}(e^{ik})) over the uniform grid. Throws UnbalancedGrading.
double chiral_gap_margin(const ChiralModel& cm, int num_k);

/// sum_r r (||c_r|| + ||c_{-r}||) for the coefficients of h_{+-}.
double h_pm_lipschitz(const ChiralModel& cm);

struct ChiralGapCertificate {
  double sampled_margin = 0.0;    ///< min over the grid of sigma_min(h_{+-})
  double certified_margin = 0.0;  ///< sampled_margin - L_h * dk / 2
  int num_k = 0;
  bool certified() const { return certified_margin > 0.0; }
};

/// Adaptive version of chiral_gap_margin with doubling up to `max_k`.
ChiralGapCertificate certify_chiral_gap(const ChiralModel& cm, int initial_k = 512,
                                        int max_k = 1 << 14);

/// Throws GapNotCertified unless the chiral gap at zero energy is certified.
ChiralGapCertificate require_chiral_gap(const ChiralModel& cm);

}  // namespace bec
