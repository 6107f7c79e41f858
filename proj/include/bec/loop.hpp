#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bec/halfspace.hpp"
#include "bec/model.hpp"

namespace bec {

/// Laurent loop h(lambda) = sum_j c_j lambda^j for j = lowest_power .. highest_power.
struct MatrixLoop {
  int size = 0;
  int lowest_power = 0;
  std::vector<Mat> coefficients;

  int highest_power() const { return lowest_power + static_cast<int>(coefficients.size()) - 1; }
  Mat operator()(cplx lambda) const;
  /// Coefficient of lambda^j (zero outside the stored range).
  Mat coefficient(int j) const;
  /// Drops leading and trailing coefficients whose norm is below rel * (largest norm).
  MatrixLoop trimmed(double rel) const;
};

/// Winding of det h on the unit circle (phase method).
int loop_winding(const MatrixLoop& loop, const Tolerances& tol = {});

/// min over num_k unit-circle samples of sigma_min(h).
double loop_margin(const MatrixLoop& loop, int num_k);

/// h_{+-} as a loop: c_{-r} = a_{r,-+}^*, c_0 = v, c_r = a_{r,+-}.
MatrixLoop loop_from_model(const ChiralModel& cm);

/// Chiral model whose h_{+-} is the given square loop; R = max(-lowest, highest, 1).
ChiralModel model_from_loop(const MatrixLoop& loop, const Tolerances& tol = {});

/// One stage of a homotopy of loops, parametrized by t in [0, 1].
struct HomotopyStage {
  std::string description;
  int size = 0;
  std::function<Mat(double, cplx)> at;

  // Filled in by certify_stage.
  double certificate = 0.0;  ///< min sigma_min over the (t, k) grid
  int t_samples = 0;
  int k_samples = 0;
  std::vector<int> windings;  ///< winding of det at each sampled t
  int winding = 0;
};

struct HomotopyPath {
  std::vector<HomotopyStage> stages;

  bool certified() const;
  bool winding_constant() const;
  double min_certificate() const;
};

/// Samples the stage on a (t, k) grid starting at 17 x 64 and doubling both
/// axes until the minimum changes by less than 5% (cap 4096 per axis), and
/// records the winding at every sampled t. Throws CertificateFailed when the
/// minimum is at most 1e-10 or a sampled loop is not invertible.
void certify_stage(HomotopyStage& stage, const Tolerances& tol = {});
void certify_path(HomotopyPath& path, const Tolerances& tol = {});

/// lambda^R h for a loop with lowest power -R (R >= 1).
MatrixLoop polynomial_part(const MatrixLoop& loop);

/// h (+) 1 ~ p (+) lambda^{-R} 1 by the rotation homotopy, then lambda^{-R} 1
/// split into s R copies of lambda^{-1}. Stage size s + s R; endpoint
/// p (+) lambda^{-1} 1_{sR}. Certified on return.
HomotopyPath stabilize_and_factor(const MatrixLoop& loop, const Tolerances& tol = {});

/// Linear loop l(lambda) = D + lambda C of size s * n (n = degree of the
/// trimmed polynomial) with det l = det p:
///   block row 0 = [a_0, ..., a_{n-2}, a_{n-1} + lambda a_n], block row i = [.. -lambda 1 ..].
/// Degree 0 and 1 pass through unchanged.
MatrixLoop linearize(const MatrixLoop& poly_loop, const Tolerances& tol = {});

/// Homotopy (1 + t N)(p (+) 1)(1 - t lambda S) from p (+) 1 to linearize(p).
HomotopyStage linearize_stage(const MatrixLoop& poly_loop, const Tolerances& tol = {});

/// Projection data of a linear loop l = D + lambda C.
struct ProjectionData {
  Mat scale;          ///< (C + D)^{-1}
  Mat normalized;     ///< C' = (C + D)^{-1} C
  Mat projection;     ///< spectral projector of C' for Re mu > 1/2
  Mat frame;          ///< S = [X Y] with Q = S diag(1_k, 0) S^{-1}
  int rank = 0;
};

/// Throws InvalidArgument if C + D is singular and SpectrumOnCriticalLine when
/// an eigenvalue of C' lies within tol.cluster of Re mu = 1/2.
ProjectionData projection_data(const MatrixLoop& linear_loop, const Tolerances& tol = {});

/// (i) multiply by a path in GL from 1 to (C+D)^{-1}, (ii) contract C' linearly
/// to Q, (iii) conjugate lambda Q + 1 - Q to diag(lambda 1_k, 1). Certified on return.
std::pair<HomotopyPath, int> projectionize(const MatrixLoop& linear_loop, const Tolerances& tol = {});

struct DeformationResult {
  HomotopyPath path;
  int winding = 0;          ///< W(H) of the input
  int half_rank = 0;        ///< s R with s = d_V / 2
  int count_lambda = 0;     ///< lambda entries of the endpoint
  int count_inverse = 0;    ///< lambda^{-1} entries of the endpoint
  int count_one = 0;        ///< constant 1 entries of the endpoint
  MatrixLoop endpoint;
  EdgeReport endpoint_edge; ///< edge report of the chiral model built from the endpoint
};

/// All stages in one frame of size s n + s R: stabilization, factorization of
/// lambda^{-R}, linearization, normalization, projection, diagonalization and a
/// final unitary permutation to diag(lambda 1, lambda^{-1} 1, 1).
DeformationResult full_deformation(const ChiralModel& cm, const Tolerances& tol = {});

}  // namespace bec
