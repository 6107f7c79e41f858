#include "bec/loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bec/schur.hpp"
#include "bec/spectrum.hpp"
#include "bec/winding.hpp"

namespace bec {
namespace {

using LoopFn = std::function<Mat(double, cplx)>;

constexpr double kHalfPi = 0.5 * std::numbers::pi;

Mat eye(int n) { return Mat::Identity(n, n); }

HomotopyStage make_stage(std::string description, int size, LoopFn at) {
  HomotopyStage st;
  st.description = std::move(description);
  st.size = size;
  st.at = std::move(at);
  return st;
}

/// Rot(a) diag(x, 1) Rot(a)^T diag(y, 1) with Rot(a) = [[cos a, -sin a], [sin a, cos a]] (x) 1_s.
/// At a = 0 this is diag(x y, 1); at a = pi/2 it is diag(y, x).
Mat rotation_swap(double a, const Mat& x, const Mat& y) {
  const int s = static_cast<int>(x.rows());
  const double c = std::cos(a), sn = std::sin(a);
  Mat rot(2 * s, 2 * s);
  rot << c * eye(s), -sn * eye(s), sn * eye(s), c * eye(s);
  return rot * direct_sum(x, eye(s)) * rot.transpose() * direct_sum(y, eye(s));
}

/// Degree of a polynomial loop after dropping leading coefficients below rel * max norm.
int trimmed_degree(const MatrixLoop& p, double rel) {
  double peak = 0.0;
  for (const auto& c : p.coefficients) peak = std::max(peak, c.norm());
  int n = p.highest_power();
  while (n > 0 && p.coefficient(n).norm() <= rel * peak) --n;
  return std::max(n, 0);
}

/// Continuous path t in [0, 1] in GL(n) from the identity to m: a straight
/// line to omega m followed by the scalar rotation back to m. The phase omega
/// keeps the spectrum of omega m away from the negative real axis.
LoopFn gl_path(const Mat& m) {
  const Eigen::Index n = m.rows();
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  const Vec mu = es.eigenvalues();
  auto clearance = [&](double phi) {
    double worst = std::numbers::pi;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      const double a = std::arg(mu(i) * std::polar(1.0, phi));
      worst = std::min(worst, std::numbers::pi - std::abs(a));
    }
    return worst;
  };
  double phi = 0.0;
  if (clearance(0.0) < 0.25) {
    double best = -1.0;
    for (int c = 0; c < 720; ++c) {
      const double cand = -std::numbers::pi + 2.0 * std::numbers::pi * c / 720.0;
      const double v = clearance(cand);
      if (v > best) {
        best = v;
        phi = cand;
      }
    }
  }
  const cplx omega = std::polar(1.0, phi);
  return [m, n, omega, phi](double t, cplx) -> Mat {
    if (t <= 0.5) {
      const double u = 2.0 * t;
      return (1.0 - u) * Mat::Identity(n, n) + u * omega * m;
    }
    const double u = 2.0 * t - 1.0;
    return std::polar(1.0, -phi * u) * omega * m;
  };
}

/// Block layout shared by all stages: a P block of size sp holding the
/// polynomial part and an M block of s R entries collecting lambda^{-1}.
struct Frame {
  int s = 0;
  int range = 0;
  int sp = 0;
  int total() const { return sp + s * range; }
  int m_block(int j) const { return sp + j * s; }
};

/// Places `local` on the rows/cols `idx` of an identity-initialised matrix.
void place(Mat& full, const std::vector<Eigen::Index>& idx, const Mat& local) { full(idx, idx) = local; }

std::vector<Eigen::Index> span(int start, int len) {
  std::vector<Eigen::Index> v(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) v[static_cast<std::size_t>(i)] = start + i;
  return v;
}

std::vector<Eigen::Index> join(std::vector<Eigen::Index> a, const std::vector<Eigen::Index>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Stage A: h (+) 1 ~ p (+) lambda^{-R} 1 acting on P[0, s) and M_0.
HomotopyStage stabilize_stage(const Frame& f, const MatrixLoop& p) {
  HomotopyStage st;
  st.description = "stabilize: h + 1 ~ p + lambda^-R";
  st.size = f.total();
  st.at = [f, p](double t, cplx lambda) {
    Mat g = eye(f.total());
    const Mat inv_r = std::pow(lambda, -f.range) * eye(f.s);
    place(g, join(span(0, f.s), span(f.m_block(0), f.s)), rotation_swap(t * kHalfPi, inv_r, p(lambda)));
    return g;
  };
  return st;
}

/// Stage B_j: lambda^{-(R-j+1)} (+) 1 ~ lambda^{-(R-j)} (+) lambda^{-1} on M_0 and M_j.
HomotopyStage factor_stage(const Frame& f, const MatrixLoop& p, int j) {
  HomotopyStage st;
  std::ostringstream os;
  os << "factor: lambda^-" << f.range - j + 1 << " ~ lambda^-" << f.range - j << " + lambda^-1";
  st.description = os.str();
  st.size = f.total();
  st.at = [f, p, j](double t, cplx lambda) {
    Mat g = eye(f.total());
    g.topLeftCorner(f.s, f.s) = p(lambda);
    for (int i = 1; i < j; ++i) g.block(f.m_block(i), f.m_block(i), f.s, f.s) = eye(f.s) / lambda;
    place(g, join(span(f.m_block(0), f.s), span(f.m_block(j), f.s)),
          rotation_swap(t * kHalfPi, eye(f.s) / lambda, std::pow(lambda, -(f.range - j)) * eye(f.s)));
    return g;
  };
  return st;
}

/// Wraps a P-block evaluator with lambda^{-1} on the whole M block.
LoopFn with_m_block(const Frame& f, LoopFn local) {
  return [f, local](double t, cplx lambda) {
    Mat g = Mat::Zero(f.total(), f.total());
    g.topLeftCorner(f.sp, f.sp) = local(t, lambda);
    g.bottomRightCorner(f.s * f.range, f.s * f.range) = eye(f.s * f.range) / lambda;
    return g;
  };
}

/// Evaluators for the P block of the three projection stages.
struct ProjectionStages {
  LoopFn normalize, contract, diagonalize;
};

ProjectionStages projection_stages(const MatrixLoop& lin, const ProjectionData& pd) {
  const int n = lin.size;
  const int k = pd.rank;
  const LoopFn scale_path = gl_path(pd.scale);
  const LoopFn frame_path = gl_path(pd.frame);
  ProjectionStages ps;
  ps.normalize = [lin, scale_path](double t, cplx lambda) -> Mat { return scale_path(t, lambda) * lin(lambda); };
  ps.contract = [pd, n](double t, cplx lambda) -> Mat {
    const Mat c = (1.0 - t) * pd.normalized + t * pd.projection;
    return eye(n) + c * (lambda - 1.0);
  };
  ps.diagonalize = [frame_path, n, k](double t, cplx lambda) -> Mat {
    const Mat s = frame_path(1.0 - t, lambda);
    Mat d = eye(n);
    for (int i = 0; i < k; ++i) d(i, i) = lambda;
    return s * d * s.partialPivLu().inverse();
  };
  return ps;
}

}  // namespace

Mat MatrixLoop::operator()(cplx lambda) const {
  if (lambda == 0.0 && lowest_power < 0) throw Error(ErrorCode::ZeroMomentum, "lambda must be nonzero");
  Mat h = Mat::Zero(size, size);
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    h += std::pow(lambda, lowest_power + static_cast<int>(i)) * coefficients[i];
  return h;
}

Mat MatrixLoop::coefficient(int j) const {
  const int i = j - lowest_power;
  if (i < 0 || i >= static_cast<int>(coefficients.size())) return Mat::Zero(size, size);
  return coefficients[static_cast<std::size_t>(i)];
}

MatrixLoop MatrixLoop::trimmed(double rel) const {
  double peak = 0.0;
  for (const auto& c : coefficients) peak = std::max(peak, c.norm());
  std::size_t lo = 0, hi = coefficients.size();
  while (hi > lo + 1 && coefficients[hi - 1].norm() <= rel * peak) --hi;
  while (lo + 1 < hi && coefficients[lo].norm() <= rel * peak) ++lo;
  MatrixLoop out{size, lowest_power + static_cast<int>(lo), {}};
  out.coefficients.assign(coefficients.begin() + static_cast<std::ptrdiff_t>(lo),
                          coefficients.begin() + static_cast<std::ptrdiff_t>(hi));
  return out;
}

int loop_winding(const MatrixLoop& loop, const Tolerances& tol) {
  return curve_winding([&](double k) { return loop(unit(k)).partialPivLu().determinant(); }, 256, tol).winding;
}

double loop_margin(const MatrixLoop& loop, int num_k) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < num_k; ++i)
    m = std::min(m, min_singular_value(loop(unit(2.0 * std::numbers::pi * i / num_k))));
  return m;
}

MatrixLoop loop_from_model(const ChiralModel& cm) {
  cm.require_balanced();
  MatrixLoop loop{cm.dim_plus(), -cm.range(), {}};
  for (int j = -cm.range(); j <= cm.range(); ++j) loop.coefficients.push_back(cm.h_pm_coefficient(j));
  return loop;
}

ChiralModel model_from_loop(const MatrixLoop& loop, const Tolerances& tol) {
  const int range = std::max({-loop.lowest_power, loop.highest_power(), 1});
  std::vector<Mat> pm, mp;
  for (int r = 1; r <= range; ++r) {
    pm.push_back(loop.coefficient(r));
    mp.push_back(loop.coefficient(-r).adjoint());
  }
  return chiral_from_blocks(loop.coefficient(0), pm, mp, tol);
}

bool HomotopyPath::certified() const {
  for (const auto& s : stages)
    if (!(s.certificate > 0.0)) return false;
  return !stages.empty();
}

bool HomotopyPath::winding_constant() const {
  if (stages.empty()) return false;
  const int w = stages.front().winding;
  for (const auto& s : stages)
    for (int v : s.windings)
      if (v != w) return false;
  return true;
}

double HomotopyPath::min_certificate() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : stages) m = std::min(m, s.certificate);
  return m;
}

void certify_stage(HomotopyStage& stage, const Tolerances& tol) {
  constexpr int kCap = 4096;
  auto grid_min = [&](int t_int, int num_k) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= t_int; ++i) {
      const double t = static_cast<double>(i) / t_int;
      for (int j = 0; j < num_k; ++j)
        m = std::min(m, min_singular_value(stage.at(t, unit(2.0 * std::numbers::pi * j / num_k))));
    }
    return m;
  };
  int t_int = 16, num_k = 64;
  double prev = grid_min(t_int, num_k);
  while (t_int * 2 <= kCap && num_k * 2 <= kCap) {
    const double next = grid_min(t_int * 2, num_k * 2);
    t_int *= 2;
    num_k *= 2;
    const double change = prev > 0.0 ? (prev - next) / prev : 1.0;
    prev = next;
    if (change < 0.05) break;
  }
  stage.certificate = prev;
  stage.t_samples = t_int + 1;
  stage.k_samples = num_k;
  if (!(prev > 1e-10)) {
    std::ostringstream os;
    os << "stage '" << stage.description << "' has min singular value " << prev;
    throw Error(ErrorCode::CertificateFailed, os.str());
  }
  stage.windings.clear();
  for (int i = 0; i <= t_int; ++i) {
    const double t = static_cast<double>(i) / t_int;
    try {
      stage.windings.push_back(
          curve_winding([&](double k) { return stage.at(t, unit(k)).partialPivLu().determinant(); }, num_k, tol)
              .winding);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "stage '" << stage.description << "' at t = " << t << ": " << e.what();
      throw Error(ErrorCode::CertificateFailed, os.str());
    }
  }
  stage.winding = stage.windings.front();
}

void certify_path(HomotopyPath& path, const Tolerances& tol) {
  for (auto& s : path.stages) certify_stage(s, tol);
}

MatrixLoop polynomial_part(const MatrixLoop& loop) {
  const int range = -loop.lowest_power;
  if (range < 1) throw Error(ErrorCode::InvalidArgument, "loop must have lowest power -R with R >= 1");
  MatrixLoop p = loop;
  p.lowest_power = 0;
  return p;
}

HomotopyPath stabilize_and_factor(const MatrixLoop& loop, const Tolerances& tol) {
  const MatrixLoop p = polynomial_part(loop);
  const Frame f{loop.size, -loop.lowest_power, loop.size};
  HomotopyPath path;
  path.stages.push_back(stabilize_stage(f, p));
  for (int j = 1; j < f.range; ++j) path.stages.push_back(factor_stage(f, p, j));
  certify_path(path, tol);
  return path;
}

MatrixLoop linearize(const MatrixLoop& poly_loop, const Tolerances& tol) {
  if (poly_loop.lowest_power < 0) throw Error(ErrorCode::InvalidArgument, "linearize needs a polynomial loop");
  const int n = trimmed_degree(poly_loop, tol.coeff);
  const int s = poly_loop.size;
  if (n <= 1) return MatrixLoop{s, 0, {poly_loop.coefficient(0), poly_loop.coefficient(1)}};
  Mat d = Mat::Zero(s * n, s * n);
  Mat c = Mat::Zero(s * n, s * n);
  for (int i = 0; i < n; ++i) d.block(0, i * s, s, s) = poly_loop.coefficient(i);
  c.block(0, (n - 1) * s, s, s) = poly_loop.coefficient(n);
  for (int i = 1; i < n; ++i) {
    d.block(i * s, i * s, s, s) = eye(s);
    c.block(i * s, (i - 1) * s, s, s) = -eye(s);
  }
  return MatrixLoop{s * n, 0, {d, c}};
}

HomotopyStage linearize_stage(const MatrixLoop& poly_loop, const Tolerances& tol) {
  const int n = trimmed_degree(poly_loop, tol.coeff);
  const int s = poly_loop.size;
  HomotopyStage st;
  st.description = "linearize: p + 1 ~ D + lambda C";
  if (n <= 1) {
    const MatrixLoop lin = linearize(poly_loop, tol);
    st.size = s;
    st.at = [lin](double, cplx lambda) { return lin(lambda); };
    return st;
  }
  st.size = s * n;
  std::vector<Mat> a;
  for (int i = 0; i <= n; ++i) a.push_back(poly_loop.coefficient(i));
  st.at = [a, s, n](double t, cplx z) {
    const int size = s * n;
    Mat left = eye(size);
    // Horner tails q_i = a_i + z q_{i+1}, q_{n-1} = a_{n-1} + z a_n.
    Mat q = a[static_cast<std::size_t>(n - 1)] + z * a[static_cast<std::size_t>(n)];
    for (int i = n - 1; i >= 1; --i) {
      left.block(0, i * s, s, s) = t * q;
      q = a[static_cast<std::size_t>(i - 1)] + z * q;
    }
    // q now equals p(z).
    Mat middle = eye(size);
    middle.topLeftCorner(s, s) = q;
    Mat right = eye(size);
    for (int i = 1; i < n; ++i) right.block(i * s, (i - 1) * s, s, s) = -t * z * eye(s);
    return Mat(left * middle * right);
  };
  return st;
}

ProjectionData projection_data(const MatrixLoop& linear_loop, const Tolerances& tol) {
  if (linear_loop.lowest_power != 0 || linear_loop.highest_power() > 1)
    throw Error(ErrorCode::InvalidArgument, "projection needs a linear loop D + lambda C");
  const int n = linear_loop.size;
  const Mat d = linear_loop.coefficient(0);
  const Mat c = linear_loop.coefficient(1);
  const Mat at_one = c + d;
  if (!(condition_number(at_one) <= tol.max_condition))
    throw Error(ErrorCode::InvalidArgument, "C + D is singular; the loop is not invertible at lambda = 1");
  ProjectionData pd;
  pd.scale = at_one.partialPivLu().inverse();
  pd.normalized = pd.scale * c;

  const OrderedSchur base = schur_form(pd.normalized);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx mu = base.T(i, i);
    if (std::abs(mu.real() - 0.5) <= tol.cluster * std::max(1.0, std::abs(mu))) {
      std::ostringstream os;
      os << "eigenvalue " << mu << " of (C+D)^{-1} C lies on Re = 1/2";
      throw Error(ErrorCode::SpectrumOnCriticalLine, os.str());
    }
  }
  const OrderedSchur sch = reorder_schur(base, [](cplx mu) { return mu.real() > 0.5; });
  const int k = sch.selected;
  pd.rank = k;
  const int m = n - k;
  // Solve T11 X - X T22 = T12 column by column (both blocks upper triangular).
  const Mat t11 = sch.T.topLeftCorner(k, k);
  const Mat t12 = sch.T.topRightCorner(k, m);
  const Mat t22 = sch.T.bottomRightCorner(m, m);
  Mat x = Mat::Zero(k, m);
  for (int j = 0; j < m; ++j) {
    Vec rhs = t12.col(j);
    for (int i = 0; i < j; ++i) rhs += x.col(i) * t22(i, j);
    const Mat lhs = t11 - t22(j, j) * eye(k);
    x.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  Mat p = Mat::Zero(n, n);
  p.topLeftCorner(k, k) = eye(k);
  p.topRightCorner(k, m) = x;
  pd.projection = sch.Q * p * sch.Q.adjoint();
  Mat kernel_coords(n, m);
  kernel_coords << -x, eye(m);
  pd.frame = Mat(n, n);
  pd.frame << sch.Q.leftCols(k), sch.Q * kernel_coords;
  return pd;
}

std::pair<HomotopyPath, int> projectionize(const MatrixLoop& linear_loop, const Tolerances& tol) {
  const ProjectionData pd = projection_data(linear_loop, tol);
  const ProjectionStages ps = projection_stages(linear_loop, pd);
  HomotopyPath path;
  const int n = linear_loop.size;
  path.stages.push_back(make_stage("normalize: l ~ (C+D)^-1 l", n, ps.normalize));
  path.stages.push_back(make_stage("contract: C' ~ Q", n, ps.contract));
  path.stages.push_back(make_stage("diagonalize: lambda Q + 1 - Q ~ diag(lambda, 1)", n, ps.diagonalize));
  certify_path(path, tol);
  return {std::move(path), pd.rank};
}

DeformationResult full_deformation(const ChiralModel& cm, const Tolerances& tol) {
  cm.require_balanced();
  require_chiral_gap(cm);
  DeformationResult res;
  res.winding = compute_winding(cm, 512, tol).winding;

  const MatrixLoop loop = loop_from_model(cm);
  const MatrixLoop p = polynomial_part(loop);
  const int s = loop.size;
  const int range = cm.range();
  const int degree = trimmed_degree(p, tol.coeff);
  const Frame f{s, range, s * std::max(degree, 1)};
  res.half_rank = s * range;

  HomotopyPath& path = res.path;
  path.stages.push_back(stabilize_stage(f, p));
  for (int j = 1; j < range; ++j) path.stages.push_back(factor_stage(f, p, j));

  HomotopyStage lin_stage = linearize_stage(p, tol);
  path.stages.push_back(make_stage(lin_stage.description, f.total(), with_m_block(f, lin_stage.at)));

  const MatrixLoop lin = linearize(p, tol);
  const ProjectionData pd = projection_data(lin, tol);
  const ProjectionStages ps = projection_stages(lin, pd);
  path.stages.push_back(make_stage("normalize: l ~ (C+D)^-1 l", f.total(), with_m_block(f, ps.normalize)));
  path.stages.push_back(make_stage("contract: C' ~ Q", f.total(), with_m_block(f, ps.contract)));
  path.stages.push_back(make_stage("diagonalize: lambda Q + 1 - Q ~ diag(lambda, 1)", f.total(), with_m_block(f, ps.diagonalize)));

  // Unitary path from 1 to the permutation moving the lambda^{-1} block in
  // front of the constant entries.
  const int k = pd.rank;
  const int total = f.total();
  std::vector<int> order;
  for (int i = 0; i < k; ++i) order.push_back(i);
  for (int i = f.sp; i < total; ++i) order.push_back(i);
  for (int i = k; i < f.sp; ++i) order.push_back(i);
  Mat perm = Mat::Zero(total, total);
  for (int j = 0; j < total; ++j) perm(order[static_cast<std::size_t>(j)], j) = 1.0;
  const OrderedSchur ps_perm = schur_form(perm);
  Eigen::VectorXd phases(total);
  for (int i = 0; i < total; ++i) phases(i) = std::arg(ps_perm.T(i, i));
  const Mat basis = ps_perm.Q;
  auto before = [f, k](cplx lambda) {
    Mat x = eye(f.total());
    for (int i = 0; i < k; ++i) x(i, i) = lambda;
    for (int i = f.sp; i < f.total(); ++i) x(i, i) = 1.0 / lambda;
    return x;
  };
  path.stages.push_back(make_stage("permute: diag(lambda, 1, lambda^-1) ~ diag(lambda, lambda^-1, 1)", total,
                         [basis, phases, before](double t, cplx lambda) -> Mat {
                           Vec rot(phases.size());
                           for (Eigen::Index i = 0; i < phases.size(); ++i) rot(i) = std::polar(1.0, t * phases(i));
                           const Mat u = basis * rot.asDiagonal() * basis.adjoint();
                           return u.adjoint() * before(lambda) * u;
                         }));
  certify_path(path, tol);

  // Read the endpoint off the last stage and check it is the expected diagonal loop.
  const Mat end_at_two = path.stages.back().at(1.0, 2.0);
  for (int i = 0; i < total; ++i) {
    const cplx v = end_at_two(i, i);
    if (std::abs(v - 2.0) < 1e-8)
      ++res.count_lambda;
    else if (std::abs(v - 0.5) < 1e-8)
      ++res.count_inverse;
    else if (std::abs(v - 1.0) < 1e-8)
      ++res.count_one;
  }
  res.endpoint = MatrixLoop{total, -1, {Mat::Zero(total, total), Mat::Zero(total, total), Mat::Zero(total, total)}};
  for (int i = 0; i < total; ++i) {
    if (i < res.count_lambda)
      res.endpoint.coefficients[2](i, i) = 1.0;
    else if (i < res.count_lambda + res.count_inverse)
      res.endpoint.coefficients[0](i, i) = 1.0;
    else
      res.endpoint.coefficients[1](i, i) = 1.0;
  }
  double mismatch = 0.0;
  for (cplx probe : {cplx(2.0), cplx(0.3, 0.9), cplx(-1.7, 0.2)})
    mismatch = std::max(mismatch, (path.stages.back().at(1.0, probe) - res.endpoint(probe)).norm());
  if (res.count_lambda + res.count_inverse + res.count_one != total || mismatch > 1e-8) {
    std::ostringstream os;
    os << "endpoint is not diagonal in lambda, lambda^-1, 1 (mismatch " << mismatch << ")";
    throw Error(ErrorCode::NonConvergent, os.str());
  }
  res.endpoint_edge = edge_modes_auto(model_from_loop(res.endpoint, tol), tol);
  return res;
}

}  // namespace bec
