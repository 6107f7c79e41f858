#include "bec/companion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bec/schur.hpp"

namespace bec {
namespace {

void require_invertible(const Mat& m, const Tolerances& tol, ErrorCode code, const char* what) {
  const double c = condition_number(m);
  if (!(c <= tol.max_condition)) {
    std::ostringstream os;
    os << what << " has condition number " << c << " above " << tol.max_condition;
    throw Error(code, os.str());
  }
}

/// Coefficient multiplying psi_{m + j} in the energy-E recurrence centred at m.
Mat stencil(const ModelParams& model, cplx energy, int j) {
  const int d = model.dim_v();
  if (j == 0) return model.on_site() - energy * Mat::Identity(d, d);
  if (j > 0) return model.right_hop(j);
  return model.left_hop(-j);
}

}  // namespace

std::string_view to_string(ModeClass c) {
  switch (c) {
    case ModeClass::Decrease: return "decrease";
    case ModeClass::Bloch: return "bloch";
    case ModeClass::Increase: return "increase";
    case ModeClass::Mixed: return "mixed";
  }
  return "mixed";
}

CompanionMatrix build_companion(const ModelParams& model, cplx energy, const Tolerances& tol) {
  const int d = model.dim_v();
  const int R = model.range();
  require_invertible(model.right_hop(R), tol, ErrorCode::SingularLeadingHop,
                     "A_R (use the truncated-operator route)");
  const int n = 2 * R * d;
  Mat c = Mat::Zero(n, n);
  for (int j = 0; j + 1 < 2 * R; ++j) c.block(j * d, (j + 1) * d, d, d).setIdentity();
  Mat row(d, n);
  for (int j = 0; j < 2 * R; ++j) row.middleCols(j * d, d) = stencil(model, energy, j - R);
  c.bottomRows(d) = -model.right_hop(R).partialPivLu().solve(row);
  return CompanionMatrix{energy, std::move(c), model};
}

double char_poly_residual(const CompanionMatrix& cm, const std::vector<cplx>& probes) {
  const ModelParams& model = cm.model;
  const int d = model.dim_v();
  const cplx det_a = model.right_hop(model.range()).partialPivLu().determinant();
  const int n = cm.size();
  double worst = 0.0;
  for (cplx lambda : probes) {
    const cplx lhs = (lambda * Mat::Identity(n, n) - cm.matrix).partialPivLu().determinant();
    const Mat h = bloch_matrix(model, lambda) - cm.energy * Mat::Identity(d, d);
    const cplx rhs = std::pow(lambda, model.range() * d) * h.partialPivLu().determinant() / det_a;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  return worst;
}

std::vector<EigenCluster> cluster_eigenvalues(const Vec& eigenvalues, double rel_tol) {
  const auto n = static_cast<std::size_t>(eigenvalues.size());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx a = eigenvalues(static_cast<Eigen::Index>(i));
      const cplx b = eigenvalues(static_cast<Eigen::Index>(j));
      const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
      if (std::abs(a - b) <= rel_tol * scale) parent[find(i)] = find(j);
    }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<EigenCluster> out;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    cplx sum = 0.0;
    for (std::size_t i : g) sum += eigenvalues(static_cast<Eigen::Index>(i));
    out.push_back({sum / static_cast<double>(g.size()), static_cast<int>(g.size())});
  }
  std::sort(out.begin(), out.end(), [](const EigenCluster& a, const EigenCluster& b) {
    const double ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma < mb;
    return std::arg(a.value) < std::arg(b.value);
  });
  return out;
}

CompanionSplit spectral_split(const CompanionMatrix& cm, const Tolerances& tol, bool require_clean) {
  const double rho = tol.unit_circle;
  const OrderedSchur base = schur_form(cm.matrix);
  CompanionSplit s;
  s.unit_circle_tolerance = rho;
  s.eigenvalues = base.T.diagonal();
  s.clusters = cluster_eigenvalues(s.eigenvalues, tol.cluster);
  if (require_clean) {
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
      const double gap = std::abs(std::abs(s.eigenvalues(i)) - 1.0);
      if (gap <= rho) {
        std::ostringstream os;
        os << "eigenvalue " << s.eigenvalues(i) << " of C_E lies within " << rho
           << " of the unit circle";
        throw Error(ErrorCode::BorderlineEigenvalue, os.str());
      }
    }
  }
  auto take = [&](auto pred) {
    OrderedSchur r = reorder_schur(base, pred);
    return Mat(r.Q.leftCols(r.selected));
  };
  s.basis_down = take([rho](cplx z) { return std::abs(z) < 1.0 - rho; });
  s.basis_bloch = take([rho](cplx z) { return std::abs(std::abs(z) - 1.0) <= rho; });
  s.basis_up = take([rho](cplx z) { return std::abs(z) > 1.0 + rho; });
  return s;
}

std::vector<int> jordan_rank_profile(const CompanionMatrix& cm, cplx mu, int max_power,
                                     const Tolerances& tol) {
  const int n = cm.size();
  const Mat m = cm.matrix - mu * Mat::Identity(n, n);
  const double base = std::max(1.0, operator_norm(m));
  std::vector<int> ranks;
  Mat p = Mat::Identity(n, n);
  for (int k = 1; k <= max_power; ++k) {
    p = (p * m).eval();
    Eigen::JacobiSVD<Mat> svd(p);
    const double cut = tol.kernel * std::pow(base, k);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > cut) ++rank;
    ranks.push_back(rank);
  }
  return ranks;
}

bool duality_check(const CompanionSplit& split, const Tolerances& tol) {
  const auto& cl = split.clusters;
  for (const auto& c : cl) {
    if (c.value == 0.0) return false;
    const cplx image = std::conj(1.0 / c.value);
    bool found = false;
    for (const auto& d : cl) {
      const double scale = std::max(std::abs(image), std::abs(d.value));
      if (std::abs(d.value - image) <= tol.cluster * scale && d.multiplicity == c.multiplicity) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

double recurrence_residual(const ModelParams& model, cplx energy, int n_min,
                           const std::vector<Vec>& window) {
  const int R = model.range();
  const int len = static_cast<int>(window.size());
  double worst = 0.0;
  for (int i = R; i + R < len; ++i) {
    Vec acc = Vec::Zero(model.dim_v());
    for (int j = -R; j <= R; ++j) acc += stencil(model, energy, j) * window[static_cast<std::size_t>(i + j)];
    worst = std::max(worst, acc.norm());
  }
  (void)n_min;
  return worst;
}

LatticeMode propagate(const CompanionMatrix& cm, const Vec& initial, int steps, int steps_left,
                      const Tolerances& tol) {
  const int d = cm.block();
  const int R = cm.range();
  if (initial.size() != cm.size()) throw Error(ErrorCode::ShapeMismatch, "initial data must have size 2 R d_V");
  if (steps < 1 || steps_left < 0) throw Error(ErrorCode::InvalidArgument, "steps must be at least 1");

  std::vector<Vec> right;
  for (int j = 0; j < 2 * R; ++j) right.push_back(initial.segment(j * d, d));
  Vec state = initial;
  for (int s = 0; s < steps; ++s) {
    state = cm.matrix * state;
    right.push_back(state.tail(d));
  }

  std::vector<Vec> left;
  if (steps_left > 0) {
    const Mat& b_r = cm.model.left_hop(R);
    require_invertible(b_r, tol, ErrorCode::SingularRightHop, "B_R (leftward propagation)");
    const auto lu = b_r.partialPivLu();
    // Cells currently known: left (reversed) followed by right.
    std::vector<Vec> front(right.begin(), right.begin() + 2 * R);
    for (int s = 0; s < steps_left; ++s) {
      // Recurrence centred at the cell R-1 to the right of the new one.
      Vec rhs = Vec::Zero(d);
      for (int j = -R + 1; j <= R; ++j) rhs += stencil(cm.model, cm.energy, j) * front[static_cast<std::size_t>(R - 1 + j)];
      Vec fresh = -lu.solve(rhs);
      front.insert(front.begin(), fresh);
      front.pop_back();
      left.push_back(std::move(fresh));
    }
  }

  LatticeMode mode;
  mode.energy = cm.energy;
  mode.range = R;
  mode.n_min = 1 - R - steps_left;
  mode.window.assign(left.rbegin(), left.rend());
  mode.window.insert(mode.window.end(), right.begin(), right.end());
  mode.max_residual = recurrence_residual(cm.model, cm.energy, mode.n_min, mode.window);

  const double nrm = initial.norm();
  if (nrm > 0.0) {
    const CompanionSplit split = spectral_split(cm, tol);
    auto inside = [&](const Mat& b) {
      if (b.cols() == 0) return false;
      return (initial - b * (b.adjoint() * initial)).norm() <= 1e-6 * nrm;
    };
    if (inside(split.basis_down))
      mode.classification = ModeClass::Decrease;
    else if (inside(split.basis_bloch))
      mode.classification = ModeClass::Bloch;
    else if (inside(split.basis_up))
      mode.classification = ModeClass::Increase;
  }
  return mode;
}

DecayFit fit_decay(const std::vector<double>& norms, double floor) {
  double peak = 0.0;
  for (double v : norms) peak = std::max(peak, v);
  if (!(peak >= floor) || peak == 0.0) throw Error(ErrorCode::ZeroMode, "all window entries vanish");
  const double noise = 1e-14 * peak;
  std::vector<double> xs, ys;
  int first = -1;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] <= noise) continue;
    if (first < 0) first = static_cast<int>(i);
    xs.push_back(static_cast<double>(static_cast<int>(i) - first + 1));
    ys.push_back(std::log(norms[i]));
  }
  DecayFit fit;
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    fit.rate = 0.0;
    return fit;
  }
  const bool with_power = xs.size() >= 4;
  const Eigen::Index cols = with_power ? 3 : 2;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), cols);
  Eigen::VectorXd y(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    a(r, 1) = xs[i];
    if (with_power) a(r, 2) = std::log(xs[i]);
    y(r) = ys[i];
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  fit.intercept = coef(0);
  fit.rate = std::exp(coef(1));
  fit.log_power = with_power ? coef(2) : 0.0;
  return fit;
}

double decay_rate(const LatticeMode& mode, const Tolerances& tol) {
  if (static_cast<int>(mode.window.size()) < 4 * mode.range)
    throw Error(ErrorCode::InvalidArgument, "window must hold at least 4R cells");
  std::vector<double> norms;
  norms.reserve(mode.window.size());
  for (const auto& v : mode.window) norms.push_back(v.norm());
  return fit_decay(norms, tol.numeric).rate;
}

}  // namespace bec
