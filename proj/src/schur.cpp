#include "bec/schur.hpp"

#include <Eigen/Eigenvalues>

namespace bec {
namespace {

/// Exchanges the diagonal entries at positions p and p+1.
void swap_adjacent(Mat& t, Mat& q, Eigen::Index p) {
  const cplx t11 = t(p, p);
  const cplx t22 = t(p + 1, p + 1);
  const cplx t12 = t(p, p + 1);
  // Eigenvector of the 2x2 block for t22.
  cplx x1 = t12;
  cplx x2 = t22 - t11;
  const double nrm = std::hypot(std::abs(x1), std::abs(x2));
  if (nrm == 0.0) return;
  x1 /= nrm;
  x2 /= nrm;
  Eigen::Matrix2cd g;
  g << x1, -std::conj(x2), x2, std::conj(x1);
  const Eigen::Index n = t.rows();
  t.block(p, 0, 2, n) = g.adjoint() * t.block(p, 0, 2, n);
  t.block(0, p, n, 2) = t.block(0, p, n, 2) * g;
  q.block(0, p, n, 2) = q.block(0, p, n, 2) * g;
  t(p + 1, p) = 0.0;
  t(p, p) = t22;
  t(p + 1, p + 1) = t11;
}

}  // namespace

OrderedSchur schur_form(const Mat& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeMismatch, "Schur form needs a square matrix");
  OrderedSchur out;
  if (a.size() == 0) {
    out.T = a;
    out.Q = a;
    return out;
  }
  Eigen::ComplexSchur<Mat> schur(a);
  if (schur.info() != Eigen::Success) throw Error(ErrorCode::NonConvergent, "complex Schur iteration failed");
  out.T = schur.matrixT();
  out.Q = schur.matrixU();
  return out;
}

OrderedSchur reorder_schur(OrderedSchur out, const std::function<bool(cplx)>& select) {
  const Eigen::Index n = out.T.rows();
  // Flag the selection once; moving entries carries the flags along.
  std::vector<bool> flag(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) flag[static_cast<std::size_t>(i)] = select(out.T(i, i));
  Eigen::Index head = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!flag[static_cast<std::size_t>(i)]) continue;
    for (Eigen::Index p = i; p > head; --p) {
      swap_adjacent(out.T, out.Q, p - 1);
      std::swap(flag[static_cast<std::size_t>(p)], flag[static_cast<std::size_t>(p - 1)]);
    }
    ++head;
  }
  out.selected = static_cast<int>(head);
  return out;
}

OrderedSchur ordered_schur(const Mat& a, const std::function<bool(cplx)>& select) {
  return reorder_schur(schur_form(a), select);
}

Mat invariant_subspace(const Mat& a, const std::function<bool(cplx)>& select) {
  OrderedSchur s = ordered_schur(a, select);
  return s.Q.leftCols(s.selected);
}

}  // namespace bec
