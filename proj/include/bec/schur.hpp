#pragma once

#include <functional>

#include "bec/core.hpp"

namespace bec {

/// A = Q T Q^* with T upper triangular and the selected eigenvalues leading.
struct OrderedSchur {
  Mat T;
  Mat Q;
  int selected = 0;  ///< number of leading diagonal entries satisfying the predicate
  Vec eigenvalues() const { return T.diagonal(); }
};

/// Complex Schur form reordered by adjacent Givens swaps so that eigenvalues
/// with select(mu) == true come first. The relative order inside each group
/// is preserved.
OrderedSchur ordered_schur(const Mat& a, const std::function<bool(cplx)>& select);

/// Unordered complex Schur form of `a`.
OrderedSchur schur_form(const Mat& a);

/// Reorders an existing Schur form (T, Q) by the predicate.
OrderedSchur reorder_schur(OrderedSchur s, const std::function<bool(cplx)>& select);

/// Orthonormal basis of the invariant subspace for the selected eigenvalues.
Mat invariant_subspace(const Mat& a, const std::function<bool(cplx)>& select);

}  // namespace bec
