#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bec/halfspace.hpp"
#include "bec/spectrum.hpp"
#include "bec/winding.hpp"

namespace bec {

enum class Verdict { Pass, Fail, Skip };
std::string_view to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::Skip;
  std::string diagnostics;
};

/// Outcome of the theorem-level checks on one model. A check is pass/fail only
/// when its hypotheses hold, otherwise skip with the reason in `diagnostics`.
struct VerificationCase {
  ChiralModel model;
  std::optional<WindingResult> winding;
  std::optional<EdgeReport> edge;            ///< truncated route
  std::optional<EdgeReport> companion_edge;  ///< companion route (A_R invertible only)
  std::optional<GapReport> gap;
  std::optional<ChiralGapCertificate> chiral_gap;
  std::vector<InGapState> in_gap;            ///< verify_gap_exclusion only
  std::map<std::string, CheckResult> verdicts;

  bool passed() const;  ///< no check failed
  int count(Verdict v) const;
};

/// Checks "winding_methods", "bec_equality", "routes_agree" and "sandwich".
/// Throws GapNotCertified.
VerificationCase verify_bec(const ChiralModel& cm, const Tolerances& tol = {});

/// Two-band strong form: "winding_range" (|W| <= R), "kernel_pm" (= max(0, W)),
/// "kernel_mp" (= max(0, -W)) and "coburn" (one kernel vanishes). Skipped unless d_V = 2.
VerificationCase verify_two_band_strong(const ChiralModel& cm, const Tolerances& tol = {});

/// "no_nonzero_edge_energy": no left-localized in-gap state of the N-cell
/// truncation with |E| > eps_N = 10 q^N (q from C_0 when A_R is invertible,
/// else eps_N = 1e-7). Window (E_- + delta, E_+ - delta), delta = 0.05 (E_+ - E_-).
/// Skipped unless R = 1 and d_V = 2.
VerificationCase verify_gap_exclusion(const ChiralModel& cm, int cells, const Tolerances& tol = {});

struct EnsembleSpec {
  std::uint64_t seed = 1;
  int count = 1;
  int dim_v = 2;
  int range = 1;
  double coefficient_scale = 1.0;
  double gap_floor = 0.05;
  double singular_probability = 0.2;
};

struct EnsembleMember {
  ChiralModel model;
  bool singular_leading = false;  ///< last column of a_{R,+-} zeroed
  int draws = 0;                  ///< attempts until the gap floor was met
  double margin = 0.0;            ///< chiral_gap_margin at 512 samples
};

/// Model i uses its own mt19937_64 seeded with seed_seq{seed, i}: first a
/// Bernoulli draw for the singular flag, then complex Gaussian blocks, redrawn
/// until the margin reaches gap_floor (ExhaustedRedraws after 1000 draws).
/// Output is independent of `threads`.
std::vector<EnsembleMember> random_chiral_ensemble(const EnsembleSpec& spec, int threads = 1);

}  // namespace bec
