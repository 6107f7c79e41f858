#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace bec {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Numerical thresholds shared by every module.
///
/// The defaults are the values the test suites are pinned against. The CLI
/// exposes each field as `--tol.<name>` using the names in `tolerance_names()`.
struct Tolerances {
  double self_adjoint = 1e-10;  ///< structural checks, relative to the largest coefficient norm
  double numeric = 1e-9;        ///< derived identities
  double max_condition = 1e8;   ///< a hop matrix is "invertible" below this condition number
  double unit_circle = 1e-6;    ///< half-width of the Bloch band around |lambda| = 1
  double cluster = 1e-7;        ///< relative eigenvalue clustering
  double kernel = 1e-7;         ///< relative singular-value cutoff for kernels
  double coeff = 1e-10;         ///< relative cutoff for polynomial degree deflation
};

/// Field names and member pointers of Tolerances, in declaration order.
struct ToleranceField {
  std::string_view name;
  double Tolerances::*member;
};
const std::vector<ToleranceField>& tolerance_names();

enum class ErrorCode {
  ShapeMismatch,
  RangeZero,
  NotChiral,
  UnbalancedGrading,
  ZeroMomentum,
  NotSelfAdjoint,
  SingularLeadingHop,
  SingularRightHop,
  BorderlineEigenvalue,
  ZeroMode,
  TooFewCells,
  GapNotCertified,
  AmbiguousKernel,
  NonConvergent,
  CertificateFailed,
  SpectrumOnCriticalLine,
  ExhaustedRedraws,
  InvalidArgument,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Largest singular value.
double operator_norm(const Mat& m);

/// sigma_max / sigma_min; infinity for singular or empty-rank matrices.
double condition_number(const Mat& m);

/// Smallest singular value.
double min_singular_value(const Mat& m);

/// Direct sum of two square blocks.
Mat direct_sum(const Mat& a, const Mat& b);

/// Unit-circle point e^{ik}.
inline cplx unit(double k) { return std::polar(1.0, k); }

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is handled
/// exactly once and callers write results into per-index slots, so the outcome
/// never depends on the thread count. The first exception (by index) is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bec
