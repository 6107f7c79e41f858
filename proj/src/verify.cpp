#include "bec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bec/companion.hpp"

namespace bec {
namespace {

CheckResult pass_if(bool ok, const std::string& diag) {
  return CheckResult{ok ? Verdict::Pass : Verdict::Fail, diag};
}

CheckResult skip(const std::string& reason) { return CheckResult{Verdict::Skip, reason}; }

bool leading_hop_invertible(const ChiralModel& cm, const Tolerances& tol) {
  return condition_number(cm.base().right_hop(cm.range())) <= tol.max_condition;
}

Mat gaussian_block(std::mt19937_64& rng, int rows, int cols, double scale) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = scale * cplx(re, im);
    }
  return m;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skip: return "skip";
  }
  return "skip";
}

bool VerificationCase::passed() const { return count(Verdict::Fail) == 0; }

int VerificationCase::count(Verdict v) const {
  return static_cast<int>(std::count_if(verdicts.begin(), verdicts.end(),
                                        [v](const auto& kv) { return kv.second.verdict == v; }));
}

VerificationCase verify_bec(const ChiralModel& cm, const Tolerances& tol) {
  cm.require_balanced();
  VerificationCase vc{cm, {}, {}, {}, {}, {}, {}, {}};
  vc.chiral_gap = require_chiral_gap(cm);
  vc.gap = certify_gap(cm.base(), 0.0);

  WindingResult w = winding_phase(cm, 512, tol);
  w.method_roots = winding_roots(cm, tol);
  vc.winding = w;
  {
    std::ostringstream os;
    os << "phase " << w.method_phase << ", roots " << *w.method_roots;
    vc.verdicts["winding_methods"] = pass_if(w.method_phase == *w.method_roots, os.str());
  }

  vc.edge = edge_modes_auto(cm, tol);
  const int wind = w.winding;
  {
    std::ostringstream os;
    os << "edge index " << vc.edge->edge_index << " (" << vc.edge->dim_ker_pm << " - " << vc.edge->dim_ker_mp
       << " at " << vc.edge->truncation_cells << " cells), W = " << wind;
    vc.verdicts["bec_equality"] = pass_if(vc.edge->edge_index == wind, os.str());
  }

  if (!leading_hop_invertible(cm, tol)) {
    vc.verdicts["routes_agree"] = skip("A_R singular; companion route unavailable");
    vc.verdicts["sandwich"] = skip("A_R singular; |I_+| and |I_-| unavailable");
    return vc;
  }
  try {
    vc.companion_edge = edge_modes_companion(cm, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BorderlineEigenvalue) throw;
    vc.verdicts["routes_agree"] = skip(e.what());
    vc.verdicts["sandwich"] = skip(e.what());
    return vc;
  }
  const EdgeReport& c = *vc.companion_edge;
  {
    std::ostringstream os;
    os << "companion (" << c.dim_ker_pm << ", " << c.dim_ker_mp << "), truncated (" << vc.edge->dim_ker_pm << ", "
       << vc.edge->dim_ker_mp << ")";
    vc.verdicts["routes_agree"] =
        pass_if(c.dim_ker_pm == vc.edge->dim_ker_pm && c.dim_ker_mp == vc.edge->dim_ker_mp, os.str());
  }
  {
    const int ip = *c.dim_down_plus, im = *c.dim_down_minus;
    std::ostringstream os;
    os << "max(0,W)=" << std::max(0, wind) << " <= " << c.dim_ker_pm << " <= |I_+|=" << ip
       << "; max(0,-W)=" << std::max(0, -wind) << " <= " << c.dim_ker_mp << " <= |I_-|=" << im;
    const bool ok = std::max(0, wind) <= c.dim_ker_pm && c.dim_ker_pm <= ip && std::max(0, -wind) <= c.dim_ker_mp &&
                    c.dim_ker_mp <= im;
    vc.verdicts["sandwich"] = pass_if(ok, os.str());
  }
  return vc;
}

VerificationCase verify_two_band_strong(const ChiralModel& cm, const Tolerances& tol) {
  VerificationCase vc{cm, {}, {}, {}, {}, {}, {}, {}};
  if (cm.base().dim_v() != 2) {
    for (const char* name : {"winding_range", "kernel_pm", "kernel_mp", "coburn"})
      vc.verdicts[name] = skip("hypothesis d_V = 2 fails");
    return vc;
  }
  vc.chiral_gap = require_chiral_gap(cm);
  vc.winding = compute_winding(cm, 512, tol);
  vc.edge = edge_modes_auto(cm, tol);
  const int w = vc.winding->winding;
  const int pm = vc.edge->dim_ker_pm, mp = vc.edge->dim_ker_mp;
  std::ostringstream os;
  os << "W = " << w << ", R = " << cm.range() << ", kernels (" << pm << ", " << mp << ")";
  vc.verdicts["winding_range"] = pass_if(std::abs(w) <= cm.range(), os.str());
  vc.verdicts["kernel_pm"] = pass_if(pm == std::max(0, w), os.str());
  vc.verdicts["kernel_mp"] = pass_if(mp == std::max(0, -w), os.str());
  vc.verdicts["coburn"] = pass_if(pm == 0 || mp == 0, os.str());
  return vc;
}

VerificationCase verify_gap_exclusion(const ChiralModel& cm, int cells, const Tolerances& tol) {
  VerificationCase vc{cm, {}, {}, {}, {}, {}, {}, {}};
  if (cm.range() != 1 || cm.base().dim_v() != 2) {
    vc.verdicts["no_nonzero_edge_energy"] = skip("hypothesis R = 1, d_V = 2 fails");
    return vc;
  }
  const GapReport gap = certify_gap(cm.base(), 0.0);
  vc.gap = gap;
  if (!gap.gapped) throw Error(ErrorCode::GapNotCertified, "no certified band gap around zero energy");
  const double delta = 0.05 * (gap.e_plus - gap.e_minus);
  vc.in_gap = in_gap_scan(cm, cells, gap.e_minus + delta, gap.e_plus - delta, tol);

  double eps = 1e-7;
  std::string eps_source = "fixed";
  if (leading_hop_invertible(cm, tol)) {
    const CompanionSplit split = spectral_split(build_companion(cm.base(), 0.0, tol), tol);
    double q = 0.0;
    for (Eigen::Index i = 0; i < split.eigenvalues.size(); ++i) {
      const double a = std::abs(split.eigenvalues(i));
      if (a < 1.0) q = std::max(q, a);
    }
    eps = 10.0 * std::pow(q, cells);
    eps_source = "10 q^N";
  }
  double worst = 0.0;
  int left = 0;
  for (const auto& s : vc.in_gap)
    if (s.side == EdgeSide::Left) {
      ++left;
      worst = std::max(worst, std::abs(s.energy));
    }
  std::ostringstream os;
  os << left << " left-localized in-gap states, max |E| = " << worst << ", eps_N = " << eps << " (" << eps_source
     << ")";
  vc.verdicts["no_nonzero_edge_energy"] = pass_if(worst <= eps, os.str());
  return vc;
}

std::vector<EnsembleMember> random_chiral_ensemble(const EnsembleSpec& spec, int threads) {
  if (spec.count < 0 || spec.dim_v < 2 || spec.dim_v % 2 != 0 || spec.range < 1 || !(spec.coefficient_scale > 0.0))
    throw Error(ErrorCode::InvalidArgument, "ensemble needs count >= 0, even dim_v >= 2, range >= 1, scale > 0");
  const int half = spec.dim_v / 2;
  std::vector<std::optional<EnsembleMember>> slots(static_cast<std::size_t>(spec.count));
  parallel_for(slots.size(), threads, [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint64_t>(spec.seed), static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    std::bernoulli_distribution singular(spec.singular_probability);
    const bool sing = singular(rng);
    for (int draw = 1; draw <= 1000; ++draw) {
      const Mat v = gaussian_block(rng, half, half, spec.coefficient_scale);
      std::vector<Mat> pm, mp;
      for (int r = 0; r < spec.range; ++r) {
        pm.push_back(gaussian_block(rng, half, half, spec.coefficient_scale));
        mp.push_back(gaussian_block(rng, half, half, spec.coefficient_scale));
      }
      if (sing) pm.back().col(half - 1).setZero();
      ChiralModel cm = chiral_from_blocks(v, pm, mp);
      const double margin = chiral_gap_margin(cm, 512);
      if (margin >= spec.gap_floor) {
        slots[i] = EnsembleMember{std::move(cm), sing, draw, margin};
        return;
      }
    }
    std::ostringstream os;
    os << "model " << i << ": gap floor " << spec.gap_floor << " not reached after 1000 draws";
    throw Error(ErrorCode::ExhaustedRedraws, os.str());
  });
  std::vector<EnsembleMember> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace bec
