#pragma once

#include <vector>

#include "bec/model.hpp"

namespace bec {

/// Matrix advancing 2R consecutive cells of an energy-E solution one step right.
///
/// Acting on (psi_{n}, ..., psi_{n+2R-1}) it returns (psi_{n+1}, ..., psi_{n+2R}).
/// Superdiagonal identity blocks; the last block row is
/// -A_R^{-1} [B_R, ..., B_1, V - E, A_1, ..., A_{R-1}].
struct CompanionMatrix {
  cplx energy;
  Mat matrix;
  ModelParams model;

  int block() const { return model.dim_v(); }
  int range() const { return model.range(); }
  int size() const { return static_cast<int>(matrix.rows()); }
};

/// Throws SingularLeadingHop when cond(A_R) exceeds tol.max_condition.
CompanionMatrix build_companion(const ModelParams& model, cplx energy, const Tolerances& tol = {});

/// max over probes of |det(lambda - C_E) - lambda^{R d} det(H(lambda) - E) / det(A_R)|,
/// each term divided by max(1, |det(lambda - C_E)|).
double char_poly_residual(const CompanionMatrix& cm, const std::vector<cplx>& probes);

struct EigenCluster {
  cplx value;        ///< cluster mean
  int multiplicity;  ///< algebraic multiplicity (cluster size)
};

/// Groups eigenvalues whose relative distance is within `rel_tol` (single linkage).
/// Output is sorted by (|value|, arg value).
std::vector<EigenCluster> cluster_eigenvalues(const Vec& eigenvalues, double rel_tol);

enum class ModeClass { Decrease, Bloch, Increase, Mixed };
std::string_view to_string(ModeClass c);

/// Decrease / Bloch / increase splitting of the initial data space D.
///
/// Each basis is orthonormal and spans the C_E-invariant subspace of the
/// eigenvalues with |lambda| < 1 - rho, within rho of 1, and > 1 + rho.
struct CompanionSplit {
  Vec eigenvalues;
  std::vector<EigenCluster> clusters;
  Mat basis_down;
  Mat basis_bloch;
  Mat basis_up;
  double unit_circle_tolerance = 0.0;

  int dim_down() const { return static_cast<int>(basis_down.cols()); }
  int dim_bloch() const { return static_cast<int>(basis_bloch.cols()); }
  int dim_up() const { return static_cast<int>(basis_up.cols()); }
};

/// With `require_clean`, throws BorderlineEigenvalue if any eigenvalue lies
/// within rho of the unit circle.
CompanionSplit spectral_split(const CompanionMatrix& cm, const Tolerances& tol = {},
                              bool require_clean = false);

/// Ranks of (C_E - mu)^k for k = 1..max_power (relative rank cutoff tol.kernel).
std::vector<int> jordan_rank_profile(const CompanionMatrix& cm, cplx mu, int max_power,
                                     const Tolerances& tol = {});

/// True iff the clustered spectrum is invariant under lambda -> conj(1/lambda)
/// with matching multiplicities.
bool duality_check(const CompanionSplit& split, const Tolerances& tol = {});

/// A window psi_{n_min}, ..., psi_{n_min + size - 1} of a solution of the bulk recurrence.
struct LatticeMode {
  cplx energy;
  int range = 1;  ///< R of the generating model
  int n_min = 0;
  std::vector<Vec> window;
  ModeClass classification = ModeClass::Mixed;
  double max_residual = 0.0;  ///< largest recurrence residual over interior cells

  int n_max() const { return n_min + static_cast<int>(window.size()) - 1; }
  const Vec& at(int n) const { return window.at(static_cast<std::size_t>(n - n_min)); }
};

/// Initial data (psi_{1-R}, ..., psi_R) is iterated `steps` times to the right
/// and `steps_left` times to the left (the latter needs B_R invertible,
/// otherwise SingularRightHop). The window covers n in [1-R-steps_left, R+steps].
LatticeMode propagate(const CompanionMatrix& cm, const Vec& initial, int steps, int steps_left = 0,
                      const Tolerances& tol = {});

/// Recurrence residual max_n ||sum_r B_r psi_{n-r} + (V-E) psi_n + sum_r A_r psi_{n+r}||
/// over cells with a full stencil inside the window.
double recurrence_residual(const ModelParams& model, cplx energy, int n_min,
                           const std::vector<Vec>& window);

/// Fit of log ||psi_n|| = a + b n + c log n over the cells above the noise floor.
struct DecayFit {
  double rate = 0.0;        ///< e^b
  double log_power = 0.0;   ///< c
  double intercept = 0.0;   ///< a
  int points = 0;
};

/// Per-cell geometric rate of a sequence of cell norms indexed from n_min.
/// Throws ZeroMode if every norm is below `floor`.
DecayFit fit_decay(const std::vector<double>& norms, double floor);

/// Throws ZeroMode (all entries below tol.numeric) or InvalidArgument (window shorter than 4R).
double decay_rate(const LatticeMode& mode, const Tolerances& tol = {});

}  // namespace bec
