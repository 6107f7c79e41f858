#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bec/model.hpp"

namespace bec {

struct WindingResult {
  int winding = 0;
  int method_phase = 0;
  std::optional<int> method_roots;
  int samples_used = 0;
  double min_abs_det = 0.0;
};

/// Winding of a closed curve k -> f(k), k in [0, 2 pi], by summed phase increments.
struct PhaseWinding {
  int winding = 0;
  int samples = 0;
  double min_abs = 0.0;
  double max_abs = 0.0;
  double total_phase = 0.0;  ///< Kahan-summed increments, close to 2 pi * winding
};

/// Doubles the sample count from `initial_samples` until every increment is
/// below pi/2 in magnitude (cap 2^20, then NonConvergent). Throws
/// GapNotCertified when min |f| <= tol.numeric * max |f|, and NonConvergent if
/// the total phase is not within 1e-6 of a multiple of 2 pi.
PhaseWinding curve_winding(const std::function<cplx(double)>& f, int initial_samples,
                           const Tolerances& tol = {});

/// Winding of det h_{+-}(e^{ik}). Requires a balanced chiral model.
WindingResult winding_phase(const ChiralModel& cm, int initial_samples = 512, const Tolerances& tol = {});

/// Winding of det h_{-+}(e^{ik}); equals minus the bulk winding.
int winding_phase_mp(const ChiralModel& cm, int initial_samples = 512, const Tolerances& tol = {});

/// Roots of c_0 + c_1 z + ... + c_n z^n with c_n != 0 (ascending coefficients).
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs);

/// Coefficients of p(lambda) = lambda^{R d_V/2} det h_{+-}(lambda), recovered by
/// an inverse DFT over 4 R d_V/2 + 1 roots of unity. Throws NonConvergent when
/// the coefficients above degree R d_V are not negligible (relative 1e-9).
std::vector<cplx> det_polynomial(const ChiralModel& cm);

struct RootCount {
  int winding = 0;
  int inside = 0;
  int shift = 0;   ///< R d_V / 2
  int degree = 0;  ///< degree after trimming leading coefficients below tol.coeff
  std::vector<cplx> roots;
};

/// Argument-principle count: W = #{roots with |z| < 1} - R d_V / 2.
/// Throws GapNotCertified when a root lies within tol.unit_circle of |z| = 1.
RootCount count_roots(const ChiralModel& cm, const Tolerances& tol = {});
int winding_roots(const ChiralModel& cm, const Tolerances& tol = {});

/// Both methods; throws NonConvergent if they disagree.
WindingResult compute_winding(const ChiralModel& cm, int initial_samples = 512, const Tolerances& tol = {});

/// Decay factor max over nonzero roots of min(|z|, 1/|z|) of det h_{+-}; the
/// slowest exponential rate of zero-energy edge modes. Returns 0 when there are no roots.
double slowest_decay_factor(const ChiralModel& cm, const Tolerances& tol = {});

}  // namespace bec
