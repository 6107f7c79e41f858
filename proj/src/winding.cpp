#include "bec/winding.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace bec {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx det_of(const Mat& m) { return m.size() == 0 ? cplx(1.0) : m.partialPivLu().determinant(); }

}  // namespace

PhaseWinding curve_winding(const std::function<cplx(double)>& f, int initial_samples,
                           const Tolerances& tol) {
  constexpr int kCap = 1 << 20;
  int n = std::max(initial_samples, 8);
  for (;;) {
    std::vector<cplx> vals(static_cast<std::size_t>(n));
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < n; ++i) {
      vals[static_cast<std::size_t>(i)] = f(kTwoPi * i / n);
      const double a = std::abs(vals[static_cast<std::size_t>(i)]);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    if (!(lo > tol.numeric * hi)) {
      std::ostringstream os;
      os << "curve passes within " << lo << " of zero (max modulus " << hi << ")";
      throw Error(ErrorCode::GapNotCertified, os.str());
    }
    double sum = 0.0, carry = 0.0, worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const cplx a = vals[static_cast<std::size_t>(i)];
      const cplx b = vals[static_cast<std::size_t>((i + 1) % n)];
      const double inc = std::arg(b / a);
      worst = std::max(worst, std::abs(inc));
      const double y = inc - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
    if (worst < 0.5 * std::numbers::pi) {
      const double turns = sum / kTwoPi;
      const double rounded = std::round(turns);
      if (std::abs(turns - rounded) > 1e-6) {
        std::ostringstream os;
        os << "total phase " << sum << " is not a multiple of 2 pi";
        throw Error(ErrorCode::NonConvergent, os.str());
      }
      return PhaseWinding{static_cast<int>(rounded), n, lo, hi, sum};
    }
    if (n >= kCap) throw Error(ErrorCode::NonConvergent, "phase increments still exceed pi/2 at 2^20 samples");
    n *= 2;
  }
}

WindingResult winding_phase(const ChiralModel& cm, int initial_samples, const Tolerances& tol) {
  cm.require_balanced();
  const PhaseWinding pw =
      curve_winding([&](double k) { return det_of(cm.h_pm(unit(k))); }, initial_samples, tol);
  WindingResult r;
  r.winding = r.method_phase = pw.winding;
  r.samples_used = pw.samples;
  r.min_abs_det = pw.min_abs;
  return r;
}

int winding_phase_mp(const ChiralModel& cm, int initial_samples, const Tolerances& tol) {
  cm.require_balanced();
  return curve_winding([&](double k) { return det_of(cm.h_mp(unit(k))); }, initial_samples, tol).winding;
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  if (coeffs.empty()) return {};
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n == 0) return {};
  if (coeffs.back() == 0.0) throw Error(ErrorCode::InvalidArgument, "leading coefficient must be nonzero");
  Mat c = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
  Eigen::ComplexEigenSolver<Mat> es(c, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NonConvergent, "root finding failed");
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return roots;
}

std::vector<cplx> det_polynomial(const ChiralModel& cm) {
  cm.require_balanced();
  const int shift = cm.range() * cm.dim_plus();
  const int m = 4 * shift + 1;
  std::vector<cplx> vals(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const cplx lambda = unit(kTwoPi * j / m);
    vals[static_cast<std::size_t>(j)] = std::pow(lambda, shift) * det_of(cm.h_pm(lambda));
  }
  std::vector<cplx> coeffs(static_cast<std::size_t>(m));
  double peak = 0.0;
  for (int p = 0; p < m; ++p) {
    cplx acc = 0.0;
    for (int j = 0; j < m; ++j)
      acc += vals[static_cast<std::size_t>(j)] * unit(-kTwoPi * static_cast<double>((static_cast<long long>(p) * j) % m) / m);
    coeffs[static_cast<std::size_t>(p)] = acc / static_cast<double>(m);
    peak = std::max(peak, std::abs(coeffs[static_cast<std::size_t>(p)]));
  }
  double excess = 0.0;
  for (int p = 2 * shift + 1; p < m; ++p) excess = std::max(excess, std::abs(coeffs[static_cast<std::size_t>(p)]));
  if (peak > 0.0 && excess > 1e-9 * peak) {
    std::ostringstream os;
    os << "interpolation residual " << excess / peak << " above 1e-9";
    throw Error(ErrorCode::NonConvergent, os.str());
  }
  coeffs.resize(static_cast<std::size_t>(2 * shift + 1));
  return coeffs;
}

RootCount count_roots(const ChiralModel& cm, const Tolerances& tol) {
  std::vector<cplx> coeffs = det_polynomial(cm);
  double peak = 0.0;
  for (const auto& c : coeffs) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) throw Error(ErrorCode::GapNotCertified, "det h_{+-} vanishes identically");
  while (!coeffs.empty() && std::abs(coeffs.back()) < tol.coeff * peak) coeffs.pop_back();
  RootCount rc;
  rc.shift = cm.range() * cm.dim_plus();
  rc.degree = static_cast<int>(coeffs.size()) - 1;
  rc.roots = polynomial_roots(coeffs);
  for (const auto& z : rc.roots) {
    if (std::abs(std::abs(z) - 1.0) < tol.unit_circle) {
      std::ostringstream os;
      os << "root " << z << " of det h_{+-} lies on the unit circle";
      throw Error(ErrorCode::GapNotCertified, os.str());
    }
    if (std::abs(z) < 1.0) ++rc.inside;
  }
  rc.winding = rc.inside - rc.shift;
  return rc;
}

int winding_roots(const ChiralModel& cm, const Tolerances& tol) { return count_roots(cm, tol).winding; }

WindingResult compute_winding(const ChiralModel& cm, int initial_samples, const Tolerances& tol) {
  WindingResult r = winding_phase(cm, initial_samples, tol);
  r.method_roots = winding_roots(cm, tol);
  if (*r.method_roots != r.method_phase) {
    std::ostringstream os;
    os << "phase winding " << r.method_phase << " disagrees with root count " << *r.method_roots;
    throw Error(ErrorCode::NonConvergent, os.str());
  }
  return r;
}

double slowest_decay_factor(const ChiralModel& cm, const Tolerances& tol) {
  std::vector<cplx> coeffs = det_polynomial(cm);
  double peak = 0.0;
  for (const auto& c : coeffs) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return 1.0;
  while (!coeffs.empty() && std::abs(coeffs.back()) < tol.coeff * peak) coeffs.pop_back();
  double q = 0.0;
  for (const auto& z : polynomial_roots(coeffs)) {
    const double a = std::abs(z);
    if (a == 0.0) continue;
    q = std::max(q, a < 1.0 ? a : 1.0 / a);
  }
  return q;
}

}  // namespace bec
