#include "bec/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace bec {
namespace {

void check_square(const Mat& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << what << " is " << m.rows() << "x" << m.cols() << ", expected " << dim << "x" << dim;
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
}

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

ModelParams build_model(int dim_v, int range, Mat on_site, std::vector<Mat> left_hops,
                        std::vector<Mat> right_hops, const Tolerances& tol) {
  if (range < 1) throw Error(ErrorCode::RangeZero, "hopping range must be at least 1");
  if (dim_v < 1) throw Error(ErrorCode::ShapeMismatch, "cell dimension must be positive");
  check_square(on_site, dim_v, "on_site");
  if (static_cast<int>(left_hops.size()) != range || static_cast<int>(right_hops.size()) != range) {
    std::ostringstream os;
    os << "expected " << range << " left and right hops, got " << left_hops.size() << " and "
       << right_hops.size();
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
  for (const auto& m : left_hops) check_square(m, dim_v, "left_hop");
  for (const auto& m : right_hops) check_square(m, dim_v, "right_hop");

  ModelParams p;
  p.dim_v_ = dim_v;
  p.range_ = range;
  p.on_site_ = std::move(on_site);
  p.left_hops_ = std::move(left_hops);
  p.right_hops_ = std::move(right_hops);

  double scale = operator_norm(p.on_site_);
  double lip = 0.0;
  for (int r = 1; r <= range; ++r) {
    const double na = operator_norm(p.right_hop(r));
    const double nb = operator_norm(p.left_hop(r));
    scale = std::max({scale, na, nb});
    lip += r * (na + nb);
  }
  p.scale_ = std::max(scale, 1e-300);
  p.lipschitz_ = lip;

  const double cut = tol.self_adjoint * p.scale_;
  bool sa = max_abs(p.on_site_ - p.on_site_.adjoint()) <= cut;
  for (int r = 1; sa && r <= range; ++r)
    sa = max_abs(p.left_hop(r) - p.right_hop(r).adjoint()) <= cut;
  p.self_adjoint_ = sa;
  return p;
}

ModelParams build_self_adjoint_model(Mat on_site, std::vector<Mat> right_hops,
                                     const Tolerances& tol) {
  std::vector<Mat> left;
  left.reserve(right_hops.size());
  for (const auto& a : right_hops) left.push_back(a.adjoint());
  const int dim = static_cast<int>(on_site.rows());
  const int range = static_cast<int>(right_hops.size());
  return build_model(dim, range, std::move(on_site), std::move(left), std::move(right_hops), tol);
}

Mat ChiralModel::gamma() const {
  Mat g = Mat::Zero(base_.dim_v(), base_.dim_v());
  for (int i = 0; i < base_.dim_v(); ++i) g(i, i) = static_cast<double>(grading_[static_cast<std::size_t>(i)]);
  return g;
}

Mat ChiralModel::h_pm_coefficient(int j) const {
  const int R = base_.range();
  if (j < -R || j > R) return Mat::Zero(dim_minus(), dim_plus());
  if (j == 0) return base_.on_site()(minus_, plus_);
  if (j > 0) return base_.right_hop(j)(minus_, plus_);
  return base_.left_hop(-j)(minus_, plus_);
}

Mat ChiralModel::h_mp_coefficient(int j) const {
  const int R = base_.range();
  if (j < -R || j > R) return Mat::Zero(dim_plus(), dim_minus());
  if (j == 0) return base_.on_site()(plus_, minus_);
  if (j > 0) return base_.right_hop(j)(plus_, minus_);
  return base_.left_hop(-j)(plus_, minus_);
}

Mat ChiralModel::h_pm(cplx lambda) const {
  if (lambda == 0.0) throw Error(ErrorCode::ZeroMomentum, "lambda must be nonzero");
  Mat h = h_pm_coefficient(0);
  for (int r = 1; r <= base_.range(); ++r)
    h += std::pow(lambda, r) * h_pm_coefficient(r) + std::pow(lambda, -r) * h_pm_coefficient(-r);
  return h;
}

Mat ChiralModel::h_mp(cplx lambda) const {
  if (lambda == 0.0) throw Error(ErrorCode::ZeroMomentum, "lambda must be nonzero");
  Mat h = h_mp_coefficient(0);
  for (int r = 1; r <= base_.range(); ++r)
    h += std::pow(lambda, r) * h_mp_coefficient(r) + std::pow(lambda, -r) * h_mp_coefficient(-r);
  return h;
}

void ChiralModel::require_balanced() const {
  if (!balanced()) {
    std::ostringstream os;
    os << "dim V_+ = " << dim_plus() << " differs from dim V_- = " << dim_minus();
    throw Error(ErrorCode::UnbalancedGrading, os.str());
  }
}

ChiralModel chiral_split(const ModelParams& model, Grading grading, const Tolerances& tol,
                         bool allow_unbalanced) {
  if (!model.self_adjoint())
    throw Error(ErrorCode::NotSelfAdjoint, "chiral splitting requires V = V^* and B_r = A_r^*");
  if (static_cast<int>(grading.size()) != model.dim_v())
    throw Error(ErrorCode::ShapeMismatch, "grading length must equal dim_v");

  ChiralModel cm(model);
  for (int i = 0; i < model.dim_v(); ++i) {
    const int g = grading[static_cast<std::size_t>(i)];
    if (g == 1)
      cm.plus_.push_back(i);
    else if (g == -1)
      cm.minus_.push_back(i);
    else
      throw Error(ErrorCode::ShapeMismatch, "grading entries must be +1 or -1");
  }
  if (cm.plus_.empty() || cm.minus_.empty())
    throw Error(ErrorCode::UnbalancedGrading, "both graded components must be nonempty");
  cm.grading_ = std::move(grading);

  const double cut = tol.self_adjoint * model.coefficient_scale();
  auto check = [&](const Mat& m, const char* what) {
    const double pp = max_abs(m(cm.plus_, cm.plus_));
    const double mm = max_abs(m(cm.minus_, cm.minus_));
    if (pp > cut || mm > cut) {
      std::ostringstream os;
      os << what << " has a diagonal block of size " << std::max(pp, mm)
         << " (does not anticommute with Gamma)";
      throw Error(ErrorCode::NotChiral, os.str());
    }
  };
  check(model.on_site(), "V");
  for (int r = 1; r <= model.range(); ++r) check(model.right_hop(r), "A_r");

  cm.v_ = model.on_site()(cm.minus_, cm.plus_);
  for (int r = 1; r <= model.range(); ++r) {
    cm.a_pm_.push_back(model.right_hop(r)(cm.minus_, cm.plus_));
    cm.a_mp_.push_back(model.right_hop(r)(cm.plus_, cm.minus_));
  }
  if (!allow_unbalanced) cm.require_balanced();
  return cm;
}

ModelParams reassemble(const ChiralModel& cm, const Tolerances& tol) {
  const int d = cm.base().dim_v();
  const auto& p = cm.plus_indices();
  const auto& m = cm.minus_indices();
  Mat v = Mat::Zero(d, d);
  v(m, p) = cm.v_block();
  v(p, m) = cm.v_block().adjoint();
  std::vector<Mat> hops;
  for (int r = 1; r <= cm.range(); ++r) {
    Mat a = Mat::Zero(d, d);
    a(m, p) = cm.a_pm()[static_cast<std::size_t>(r - 1)];
    a(p, m) = cm.a_mp()[static_cast<std::size_t>(r - 1)];
    hops.push_back(std::move(a));
  }
  return build_self_adjoint_model(std::move(v), std::move(hops), tol);
}

ChiralModel chiral_from_blocks(const Mat& v, const std::vector<Mat>& a_pm,
                               const std::vector<Mat>& a_mp, const Tolerances& tol) {
  const int dm = static_cast<int>(v.rows());
  const int dp = static_cast<int>(v.cols());
  const int d = dp + dm;
  const int range = static_cast<int>(a_pm.size());
  if (range < 1) throw Error(ErrorCode::RangeZero, "need at least one hop block");
  if (!a_mp.empty() && a_mp.size() != a_pm.size())
    throw Error(ErrorCode::ShapeMismatch, "a_pm and a_mp must have equal length");

  Mat on_site = Mat::Zero(d, d);
  on_site.block(dp, 0, dm, dp) = v;
  on_site.block(0, dp, dp, dm) = v.adjoint();
  std::vector<Mat> hops;
  for (int r = 0; r < range; ++r) {
    const auto& lower = a_pm[static_cast<std::size_t>(r)];
    if (lower.rows() != dm || lower.cols() != dp)
      throw Error(ErrorCode::ShapeMismatch, "a_pm block has wrong shape");
    Mat a = Mat::Zero(d, d);
    a.block(dp, 0, dm, dp) = lower;
    if (!a_mp.empty()) {
      const auto& upper = a_mp[static_cast<std::size_t>(r)];
      if (upper.rows() != dp || upper.cols() != dm)
        throw Error(ErrorCode::ShapeMismatch, "a_mp block has wrong shape");
      a.block(0, dp, dp, dm) = upper;
    }
    hops.push_back(std::move(a));
  }
  Grading g(static_cast<std::size_t>(d), -1);
  std::fill(g.begin(), g.begin() + dp, 1);
  return chiral_split(build_self_adjoint_model(std::move(on_site), std::move(hops), tol),
                      std::move(g), tol, /*allow_unbalanced=*/true);
}

std::optional<Grading> detect_grading(const ModelParams& model, const Tolerances& tol) {
  const int d = model.dim_v();
  const double cut = tol.self_adjoint * model.coefficient_scale();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(d));
  auto add_edges = [&](const Mat& m) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (std::abs(m(i, j)) > cut) {
          adj[static_cast<std::size_t>(i)].push_back(j);
          adj[static_cast<std::size_t>(j)].push_back(i);
        }
  };
  add_edges(model.on_site());
  for (int r = 1; r <= model.range(); ++r) add_edges(model.right_hop(r));

  Grading color(static_cast<std::size_t>(d), 0);
  for (int start = 0; start < d; ++start) {
    if (color[static_cast<std::size_t>(start)] != 0) continue;
    color[static_cast<std::size_t>(start)] = 1;
    std::deque<int> queue{start};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int w : adj[static_cast<std::size_t>(u)]) {
        auto& cw = color[static_cast<std::size_t>(w)];
        if (cw == 0) {
          cw = -color[static_cast<std::size_t>(u)];
          queue.push_back(w);
        } else if (cw == color[static_cast<std::size_t>(u)]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

Mat bloch_matrix(const ModelParams& model, cplx lambda) {
  if (lambda == 0.0) throw Error(ErrorCode::ZeroMomentum, "lambda must be nonzero");
  Mat h = model.on_site();
  cplx up = 1.0;
  cplx down = 1.0;
  const cplx inv = 1.0 / lambda;
  for (int r = 1; r <= model.range(); ++r) {
    up *= lambda;
    down *= inv;
    h += down * model.left_hop(r) + up * model.right_hop(r);
  }
  return h;
}

BlochSample bloch_at(const ModelParams& model, cplx lambda) {
  return BlochSample{lambda, bloch_matrix(model, lambda), std::nullopt, std::nullopt};
}

BlochSample bloch_at(const ChiralModel& model, cplx lambda) {
  BlochSample s = bloch_at(model.base(), lambda);
  s.h_pm = s.matrix(model.minus_indices(), model.plus_indices());
  s.h_mp = s.matrix(model.plus_indices(), model.minus_indices());
  return s;
}

}  // namespace bec
