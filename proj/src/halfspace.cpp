#include "bec/halfspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "bec/companion.hpp"
#include "bec/spectrum.hpp"
#include "bec/winding.hpp"

namespace bec {
namespace {

constexpr int kMaxCells = 4096;

void require_cells(int cells, int range) {
  if (cells < 4 * range) {
    std::ostringstream os;
    os << "need at least 4R = " << 4 * range << " cells, got " << cells;
    throw Error(ErrorCode::TooFewCells, os.str());
  }
}

/// Banded block Toeplitz matrix with block (n, m) = coeff(m - n).
template <class Coeff>
Mat banded_toeplitz(int cells, int range, int rows, int cols, Coeff coeff) {
  Mat t = Mat::Zero(static_cast<Eigen::Index>(cells) * rows, static_cast<Eigen::Index>(cells) * cols);
  for (int j = -range; j <= range; ++j) {
    const Mat c = coeff(j);
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    for (int n = std::max(0, -j); n < cells && n + j < cells; ++n)
      t.block(static_cast<Eigen::Index>(n) * rows, static_cast<Eigen::Index>(n + j) * cols, rows, cols) = c;
  }
  return t;
}

using SpMat = Eigen::SparseMatrix<cplx>;

/// Sparse version of banded_toeplitz.
template <class Coeff>
SpMat sparse_toeplitz(int cells, int range, int rows, int cols, Coeff coeff) {
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int j = -range; j <= range; ++j) {
    const Mat c = coeff(j);
    for (int n = std::max(0, -j); n < cells && n + j < cells; ++n)
      for (int a = 0; a < rows; ++a)
        for (int b = 0; b < cols; ++b)
          if (c(a, b) != 0.0) trip.emplace_back(n * rows + a, (n + j) * cols + b, c(a, b));
  }
  SpMat t(static_cast<Eigen::Index>(cells) * rows, static_cast<Eigen::Index>(cells) * cols);
  t.setFromTriplets(trip.begin(), trip.end());
  return t;
}

/// Largest singular value by power iteration on T^* T.
double largest_singular_value(const SpMat& t) {
  Vec x = Vec::Ones(t.cols()).normalized();
  double prev = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vec y = t.adjoint() * (t * x);
    const double rq = std::sqrt(std::max(0.0, x.dot(y).real()));
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (it > 10 && std::abs(rq - prev) <= 1e-12 * rq) return rq;
    prev = rq;
  }
  return prev;
}

/// Right singular vectors of T for singular values below `cut`, from block
/// inverse iteration with (T^* T + mu)^{-1} and a Rayleigh-Ritz SVD of T X.
/// Throws AmbiguousKernel for Ritz values in [cut, 10 cut].
struct NearKernel {
  Mat basis;
  std::vector<double> values;  ///< Ritz singular values below the cut, ascending
};

NearKernel near_kernel(const SpMat& t, double cut, int block, int cells) {
  const Eigen::Index n = t.cols();
  SpMat a = SpMat(t.adjoint()) * t;
  SpMat shift(n, n);
  shift.setIdentity();
  a += (cut * cut) * shift;
  Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::NaturalOrdering<int>> llt(a);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NonConvergent, "factorization of T^* T failed");

  int k = std::min<Eigen::Index>(block, n);
  for (;;) {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> g;
    Mat x(n, k);
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index i = 0; i < n; ++i) x(i, j) = cplx(g(rng), g(rng));
    for (int it = 0; it < 6; ++it) {
      x = llt.solve(x).eval();
      Eigen::HouseholderQR<Mat> qr(x);
      x = qr.householderQ() * Mat::Identity(n, k);
    }
    const Mat tx = t * x;
    Eigen::JacobiSVD<Mat> svd(tx, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    // Enlarge the block until it reaches well into the bulk.
    if (sv(0) < 1e3 * cut && k < n) {
      k = static_cast<int>(std::min<Eigen::Index>(2 * k, n));
      continue;
    }
    NearKernel out;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = k - 1; i >= 0; --i) {
      if (sv(i) >= cut && sv(i) <= 10.0 * cut) {
        std::ostringstream os;
        os << "singular value " << sv(i) << " inside [" << cut << ", " << 10.0 * cut << "] at " << cells << " cells";
        throw Error(ErrorCode::AmbiguousKernel, os.str());
      }
      if (sv(i) < cut) {
        keep.push_back(i);
        out.values.push_back(sv(i));
      }
    }
    out.basis = x * svd.matrixV()(Eigen::all, keep);
    return out;
  }
}

/// Weight of each row on the left half of the chain (cells 0 .. N/2 - 1).
Eigen::VectorXd left_weight(int cells, int block) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cells) * block);
  w.head(static_cast<Eigen::Index>(cells / 2) * block).setOnes();
  return w;
}

/// Orthonormal basis of the left-localized part of span(s).
Mat left_part(const Mat& s, const Eigen::VectorXd& weight) {
  if (s.cols() == 0) return s;
  const Mat m = s.adjoint() * weight.asDiagonal() * s;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Mat out(s.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = s * es.eigenvectors().col(keep[i]);
  return out;
}

/// Rank of `m` with singular values above `cut`, and all singular values ascending.
int rank_above(const Mat& m, double cut, std::vector<double>* values) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    if (s > cut) ++rank;
    if (values) values->push_back(s);
  }
  if (values) std::sort(values->begin(), values->end());
  return rank;
}

}  // namespace

std::string_view to_string(EdgeMethod m) {
  switch (m) {
    case EdgeMethod::Companion: return "companion";
    case EdgeMethod::Truncated: return "truncated";
    case EdgeMethod::Both: return "both";
  }
  return "truncated";
}

std::string_view to_string(EdgeSide s) {
  switch (s) {
    case EdgeSide::Left: return "left";
    case EdgeSide::Right: return "right";
    case EdgeSide::Delocalized: return "delocalized";
  }
  return "delocalized";
}

TruncatedHamiltonian truncate_halfspace(const ModelParams& model, int cells) {
  require_cells(cells, model.range());
  const int d = model.dim_v();
  Mat h = banded_toeplitz(cells, model.range(), d, d, [&](int j) -> Mat {
    if (j == 0) return model.on_site();
    return j > 0 ? model.right_hop(j) : model.left_hop(-j);
  });
  return TruncatedHamiltonian{cells, std::move(h), model};
}

Mat truncated_pm(const ChiralModel& cm, int cells) {
  require_cells(cells, cm.range());
  return banded_toeplitz(cells, cm.range(), cm.dim_minus(), cm.dim_plus(),
                         [&](int j) { return cm.h_pm_coefficient(j); });
}

Mat truncated_mp(const ChiralModel& cm, int cells) {
  require_cells(cells, cm.range());
  return banded_toeplitz(cells, cm.range(), cm.dim_plus(), cm.dim_minus(),
                         [&](int j) { return cm.h_mp_coefficient(j); });
}

std::vector<double> cell_norms(const Vec& v, int block) {
  std::vector<double> out(static_cast<std::size_t>(v.size() / block));
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = v.segment(static_cast<Eigen::Index>(n) * block, block).norm();
  return out;
}

double localization_length(const std::vector<double>& norms) {
  const double rate = fit_decay(norms, 0.0).rate;
  if (rate >= 1.0) return std::numeric_limits<double>::infinity();
  if (rate <= 0.0) return 0.0;
  return -1.0 / std::log(rate);
}

int edge_mode_count(const ModelParams& model, cplx energy, const Tolerances& tol) {
  const CompanionMatrix c = build_companion(model, energy, tol);
  const CompanionSplit split = spectral_split(c, tol, /*require_clean=*/true);
  const Mat top = split.basis_down.topRows(static_cast<Eigen::Index>(model.range()) * model.dim_v());
  return split.dim_down() - rank_above(top, tol.kernel, nullptr);
}

EdgeReport edge_modes_companion(const ChiralModel& cm, const Tolerances& tol) {
  cm.require_balanced();
  const int d = cm.base().dim_v();
  const int R = cm.range();
  const CompanionMatrix c = build_companion(cm.base(), 0.0, tol);
  const CompanionSplit split = spectral_split(c, tol, /*require_clean=*/true);

  auto sector_rows = [&](const std::vector<int>& idx) {
    std::vector<Eigen::Index> rows;
    for (int j = 0; j < 2 * R; ++j)
      for (int i : idx) rows.push_back(static_cast<Eigen::Index>(j) * d + i);
    return rows;
  };

  EdgeReport rep;
  rep.method = EdgeMethod::Companion;
  int dims[2] = {0, 0};
  int kernels[2] = {0, 0};
  const std::vector<int>* sectors[2] = {&cm.plus_indices(), &cm.minus_indices()};
  for (int s = 0; s < 2; ++s) {
    const auto rows = sector_rows(*sectors[s]);
    const Mat part = split.basis_down(rows, Eigen::all);
    // C_0 commutes with the grading, so the rows of one sector carry singular
    // values 1 on the graded piece of the decrease space and 0 elsewhere.
    Eigen::JacobiSVD<Mat> svd(part, Eigen::ComputeThinU);
    int k = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 0.5) ++k;
    const Mat basis = svd.matrixU().leftCols(k);
    const int block = static_cast<int>(sectors[s]->size());
    std::vector<double> sines;
    const int rank = rank_above(basis.topRows(static_cast<Eigen::Index>(R) * block), tol.kernel, &sines);
    while (static_cast<int>(sines.size()) < k) sines.insert(sines.begin(), 0.0);
    for (double v : sines)
      if (v <= std::sqrt(tol.kernel)) rep.singular_values_near_zero.push_back(v);
    dims[s] = k;
    kernels[s] = k - rank;
  }
  if (dims[0] + dims[1] != split.dim_down()) {
    std::ostringstream os;
    os << "graded decrease sectors (" << dims[0] << ", " << dims[1] << ") do not add up to "
       << split.dim_down();
    throw Error(ErrorCode::NonConvergent, os.str());
  }
  rep.dim_down_plus = dims[0];
  rep.dim_down_minus = dims[1];
  rep.dim_ker_pm = kernels[0];
  rep.dim_ker_mp = kernels[1];
  rep.edge_index = rep.dim_ker_pm - rep.dim_ker_mp;
  return rep;
}

EdgeReport edge_modes_truncated(const ChiralModel& cm, double energy, int cells, const Tolerances& tol) {
  if (energy != 0.0)
    throw Error(ErrorCode::InvalidArgument, "kernel dimensions are defined at zero energy; use in_gap_scan");
  cm.require_balanced();
  require_cells(cells, cm.range());
  require_chiral_gap(cm);

  const SpMat t = sparse_toeplitz(cells, cm.range(), cm.dim_minus(), cm.dim_plus(),
                                 [&](int j) { return cm.h_pm_coefficient(j); });
  const SpMat ta = t.adjoint();
  const double smax = largest_singular_value(t);
  EdgeReport rep;
  rep.method = EdgeMethod::Truncated;
  rep.truncation_cells = cells;
  if (smax == 0.0) throw Error(ErrorCode::GapNotCertified, "H_{+-} vanishes");
  const int block = 2 * cm.range() * cm.dim_plus() + 4;
  // Near-kernel of H_{+-} and of its adjoint H_{-+}.
  const NearKernel right = near_kernel(t, tol.kernel * smax, block, cells);
  const NearKernel left = near_kernel(ta, tol.kernel * smax, block, cells);
  for (double v : right.values) rep.singular_values_near_zero.push_back(v / smax);
  std::sort(rep.singular_values_near_zero.begin(), rep.singular_values_near_zero.end());
  rep.kernel_pm = left_part(right.basis, left_weight(cells, cm.dim_plus()));
  rep.kernel_mp = left_part(left.basis, left_weight(cells, cm.dim_minus()));
  rep.dim_ker_pm = static_cast<int>(rep.kernel_pm.cols());
  rep.dim_ker_mp = static_cast<int>(rep.kernel_mp.cols());
  rep.edge_index = rep.dim_ker_pm - rep.dim_ker_mp;
  for (Eigen::Index i = 0; i < rep.kernel_pm.cols(); ++i)
    rep.localization_lengths.push_back(localization_length(cell_norms(rep.kernel_pm.col(i), cm.dim_plus())));
  for (Eigen::Index i = 0; i < rep.kernel_mp.cols(); ++i)
    rep.localization_lengths.push_back(localization_length(cell_norms(rep.kernel_mp.col(i), cm.dim_minus())));
  return rep;
}

int recommended_cells(const ChiralModel& cm, const Tolerances& tol) {
  const double q = slowest_decay_factor(cm, tol);
  int n = 64;
  if (q >= 1.0) return kMaxCells;
  if (q > 0.0) {
    const double need = std::ceil(std::log(tol.kernel) / std::log(q)) + 8.0 * cm.range();
    n = static_cast<int>(std::min<double>(kMaxCells, std::max(64.0, need)));
  }
  return std::max(n, 4 * cm.range());
}

EdgeReport edge_modes_auto(const ChiralModel& cm, const Tolerances& tol, int min_cells) {
  int cells = std::max(recommended_cells(cm, tol), min_cells);
  for (;;) {
    try {
      return edge_modes_truncated(cm, 0.0, cells, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AmbiguousKernel || cells * 2 > kMaxCells) throw;
      cells *= 2;
    }
  }
}

std::vector<InGapState> in_gap_scan(const ModelParams& model, int cells, double lo, double hi,
                                    const Tolerances& tol, bool chiral_pairs) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "energy window must satisfy lo < hi");
  const GapReport gap = certify_gap(model, 0.5 * (lo + hi));
  if (!gap.gapped || lo < gap.e_minus || hi > gap.e_plus) {
    std::ostringstream os;
    os << "window (" << lo << ", " << hi << ") is not inside a certified band gap";
    throw Error(ErrorCode::GapNotCertified, os.str());
  }
  const TruncatedHamiltonian th = truncate_halfspace(model, cells);
  const int d = model.dim_v();
  const Mat h = 0.5 * (th.matrix + th.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double cut = tol.numeric * scale;

  std::vector<Eigen::Index> picked;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > lo && ev(i) < hi) picked.push_back(i);
  auto key = [&](Eigen::Index i) { return chiral_pairs ? std::abs(ev(i)) : ev(i); };
  std::stable_sort(picked.begin(), picked.end(), [&](auto a, auto b) { return key(a) < key(b); });

  const Eigen::VectorXd weight = left_weight(cells, d);
  std::vector<InGapState> out;
  std::size_t start = 0;
  while (start < picked.size()) {
    std::size_t stop = start + 1;
    while (stop < picked.size() && key(picked[stop]) - key(picked[stop - 1]) <= cut) ++stop;
    const std::vector<Eigen::Index> group(picked.begin() + static_cast<std::ptrdiff_t>(start),
                                          picked.begin() + static_cast<std::ptrdiff_t>(stop));
    const Mat s = es.eigenvectors()(Eigen::all, group);
    const Mat m = s.adjoint() * weight.asDiagonal() * s;
    Eigen::SelfAdjointEigenSolver<Mat> loc(0.5 * (m + m.adjoint()));
    std::vector<Eigen::Index> parts[3];
    for (Eigen::Index i = 0; i < loc.eigenvalues().size(); ++i) {
      const double w = loc.eigenvalues()(i);
      parts[w > 0.9 ? 0 : (w < 0.1 ? 1 : 2)].push_back(i);
    }
    const EdgeSide sides[3] = {EdgeSide::Left, EdgeSide::Right, EdgeSide::Delocalized};
    for (int p = 0; p < 3; ++p) {
      if (parts[p].empty()) continue;
      const Mat g = s * loc.eigenvectors()(Eigen::all, parts[p]);
      const Mat k = g.adjoint() * h * g;
      Eigen::SelfAdjointEigenSolver<Mat> ritz(0.5 * (k + k.adjoint()));
      for (Eigen::Index i = 0; i < ritz.eigenvalues().size(); ++i) {
        InGapState st;
        st.energy = ritz.eigenvalues()(i);
        st.side = sides[p];
        st.vector = (g * ritz.eigenvectors().col(i)).normalized();
        std::vector<double> norms = cell_norms(st.vector, d);
        if (st.side == EdgeSide::Right) std::reverse(norms.begin(), norms.end());
        st.localization_length = localization_length(norms);
        out.push_back(std::move(st));
      }
    }
    start = stop;
  }
  std::stable_sort(out.begin(), out.end(), [](const InGapState& a, const InGapState& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return static_cast<int>(a.side) < static_cast<int>(b.side);
  });
  return out;
}

std::vector<InGapState> in_gap_scan(const ChiralModel& cm, int cells, double lo, double hi,
                                    const Tolerances& tol) {
  return in_gap_scan(cm.base(), cells, lo, hi, tol, /*chiral_pairs=*/true);
}

}  // namespace bec
