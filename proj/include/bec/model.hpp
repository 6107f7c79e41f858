#pragma once

#include <optional>
#include <vector>

#include "bec/core.hpp"

namespace bec {

/// Bulk data of a finite-range lattice Hamiltonian
///
///   (H psi)_n = V psi_n + sum_{r=1..R} ( B_r psi_{n-r} + A_r psi_{n+r} ).
///
/// `right_hops` holds A_r (coupling to cell n+r), `left_hops` holds B_r.
/// Instances are immutable; build them with `build_model`.
class ModelParams {
 public:
  int dim_v() const noexcept { return dim_v_; }
  int range() const noexcept { return range_; }
  const Mat& on_site() const noexcept { return on_site_; }
  const std::vector<Mat>& right_hops() const noexcept { return right_hops_; }
  const std::vector<Mat>& left_hops() const noexcept { return left_hops_; }
  /// A_r for r in [1, R].
  const Mat& right_hop(int r) const { return right_hops_.at(static_cast<std::size_t>(r - 1)); }
  /// B_r for r in [1, R].
  const Mat& left_hop(int r) const { return left_hops_.at(static_cast<std::size_t>(r - 1)); }
  bool self_adjoint() const noexcept { return self_adjoint_; }
  /// Largest operator norm among V, A_r, B_r (at least 1e-300).
  double coefficient_scale() const noexcept { return scale_; }
  /// sum_r r (||A_r|| + ||B_r||); bounds ||dH(e^{ik})/dk||.
  double lipschitz_bound() const noexcept { return lipschitz_; }

 private:
  friend ModelParams build_model(int, int, Mat, std::vector<Mat>, std::vector<Mat>, const Tolerances&);
  ModelParams() = default;

  int dim_v_ = 0;
  int range_ = 0;
  Mat on_site_;
  std::vector<Mat> left_hops_;
  std::vector<Mat> right_hops_;
  bool self_adjoint_ = false;
  double scale_ = 0.0;
  double lipschitz_ = 0.0;
};

/// Validates shapes and computes the self-adjoint flag. A_R may be singular.
ModelParams build_model(int dim_v, int range, Mat on_site, std::vector<Mat> left_hops,
                        std::vector<Mat> right_hops, const Tolerances& tol = {});

/// Self-adjoint model with B_r = A_r^*.
ModelParams build_self_adjoint_model(Mat on_site, std::vector<Mat> right_hops,
                                     const Tolerances& tol = {});

using Grading = std::vector<int>;

/// Chiral refinement of a self-adjoint model. With Gamma = diag(+1 on V_+, -1 on V_-),
/// V and every A_r are block off-diagonal:
///
///   V = [[0, v^*], [v, 0]],   A_r = [[0, a_{r,-+}], [a_{r,+-}, 0]]
///
/// in the basis ordered (plus indices, minus indices). The blocks are taken
/// from the original basis through `plus_indices()` / `minus_indices()`, so
/// the grading need not be sorted.
class ChiralModel {
 public:
  const ModelParams& base() const noexcept { return base_; }
  const Grading& grading() const noexcept { return grading_; }
  const std::vector<int>& plus_indices() const noexcept { return plus_; }
  const std::vector<int>& minus_indices() const noexcept { return minus_; }
  int dim_plus() const noexcept { return static_cast<int>(plus_.size()); }
  int dim_minus() const noexcept { return static_cast<int>(minus_.size()); }
  bool balanced() const noexcept { return plus_.size() == minus_.size(); }
  int range() const noexcept { return base_.range(); }

  /// v : V_+ -> V_-  (d_- x d_+)
  const Mat& v_block() const noexcept { return v_; }
  /// a_{r,+-} : V_+ -> V_-, r = 1..R stored at index r-1
  const std::vector<Mat>& a_pm() const noexcept { return a_pm_; }
  /// a_{r,-+} : V_- -> V_+
  const std::vector<Mat>& a_mp() const noexcept { return a_mp_; }

  Mat gamma() const;

  /// Coefficient of lambda^j in h_{+-}(lambda), j in [-R, R].
  Mat h_pm_coefficient(int j) const;
  /// Coefficient of lambda^j in h_{-+}(lambda), j in [-R, R].
  Mat h_mp_coefficient(int j) const;
  Mat h_pm(cplx lambda) const;
  Mat h_mp(cplx lambda) const;

  /// Throws UnbalancedGrading unless dim_plus == dim_minus.
  void require_balanced() const;

 private:
  friend ChiralModel chiral_split(const ModelParams&, Grading, const Tolerances&, bool);
  explicit ChiralModel(ModelParams base) : base_(std::move(base)) {}

  ModelParams base_;
  Grading grading_;
  std::vector<int> plus_;
  std::vector<int> minus_;
  Mat v_;
  std::vector<Mat> a_pm_;
  std::vector<Mat> a_mp_;
};

/// Splits a self-adjoint model along a user-supplied grading of +1/-1 entries.
/// Errors: NotSelfAdjoint, ShapeMismatch (bad grading), NotChiral, and
/// UnbalancedGrading unless `allow_unbalanced` is set.
ChiralModel chiral_split(const ModelParams& model, Grading grading, const Tolerances& tol = {},
                         bool allow_unbalanced = false);

/// Reassembles V, A_r from the chiral blocks in the original basis order.
ModelParams reassemble(const ChiralModel& cm, const Tolerances& tol = {});

/// Builds the chiral model with grading (+,...,+,-,...,-) from its blocks.
/// `a_mp` defaults to zero blocks when empty.
ChiralModel chiral_from_blocks(const Mat& v, const std::vector<Mat>& a_pm,
                               const std::vector<Mat>& a_mp, const Tolerances& tol = {});

/// Two-coloring of the hopping graph of V and all A_r. Returns nullopt when the
/// graph is not bipartite (including nonzero diagonal entries). Never applied
/// implicitly.
std::optional<Grading> detect_grading(const ModelParams& model, const Tolerances& tol = {});

struct BlochSample {
  cplx lambda;
  Mat matrix;                ///< H(lambda)
  std::optional<Mat> h_pm;   ///< lower-left block h_{+-}(lambda), chiral models only
  std::optional<Mat> h_mp;   ///< upper-right block h_{-+}(lambda)
};

/// H(lambda) = V + sum_r (lambda^{-r} B_r + lambda^r A_r). Throws ZeroMomentum for lambda = 0.
BlochSample bloch_at(const ModelParams& model, cplx lambda);
BlochSample bloch_at(const ChiralModel& model, cplx lambda);

/// Bloch matrix without the wrapper; lambda must be nonzero.
Mat bloch_matrix(const ModelParams& model, cplx lambda);

}  // namespace bec
