#include "bec/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace bec {
namespace {

double grid_k(int i, int num_k) { return -std::numbers::pi + 2.0 * std::numbers::pi * i / num_k; }

}  // namespace

double BandStructure::spacing() const { return 2.0 * std::numbers::pi / std::max(num_k(), 1); }

BandStructure band_structure(const ModelParams& model, int num_k, int threads) {
  if (!model.self_adjoint())
    throw Error(ErrorCode::NotSelfAdjoint, "band structure needs a self-adjoint model");
  if (num_k < 8) throw Error(ErrorCode::InvalidArgument, "num_k must be at least 8");
  BandStructure bs;
  bs.lipschitz_bound = model.lipschitz_bound();
  bs.k.resize(static_cast<std::size_t>(num_k));
  bs.energies.resize(static_cast<std::size_t>(num_k));
  parallel_for(static_cast<std::size_t>(num_k), threads, [&](std::size_t i) {
    const double k = grid_k(static_cast<int>(i), num_k);
    Mat h = bloch_matrix(model, unit(k));
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    bs.k[i] = k;
    bs.energies[i] = es.eigenvalues();
  });
  return bs;
}

GapReport detect_gap(const BandStructure& bands, std::optional<double> around_energy) {
  GapReport best;
  best.num_k = bands.num_k();
  if (bands.energies.empty()) return best;
  const int d = static_cast<int>(bands.energies.front().size());
  const double slack = 0.5 * bands.lipschitz_bound * bands.spacing();
  bool have = false;
  for (int j = 1; j < d; ++j) {
    double top = -std::numeric_limits<double>::infinity();
    double bottom = std::numeric_limits<double>::infinity();
    for (const auto& e : bands.energies) {
      top = std::max(top, e(j - 1));
      bottom = std::min(bottom, e(j));
    }
    if (around_energy && !(top < *around_energy && *around_energy < bottom)) continue;
    GapReport r;
    r.num_k = bands.num_k();
    r.gap_index = j;
    r.e_minus = top;
    r.e_plus = bottom;
    r.certified_minus = top + slack;
    r.certified_plus = bottom - slack;
    r.certificate_margin = r.certified_plus - r.certified_minus;
    r.gapped = r.certificate_margin > 0.0;
    if (!have || r.certificate_margin > best.certificate_margin) {
      best = r;
      have = true;
    }
  }
  if (!have) best.certificate_margin = -std::numeric_limits<double>::infinity();
  if (!best.gapped) best.gap_index.reset();
  return best;
}

GapReport certify_gap(const ModelParams& model, std::optional<double> around_energy, int initial_k,
                      int max_k, int threads) {
  int num_k = std::max(initial_k, 8);
  for (;;) {
    GapReport r = detect_gap(band_structure(model, num_k, threads), around_energy);
    const bool open = r.e_plus > r.e_minus && std::isfinite(r.certificate_margin);
    if (r.gapped || !open || num_k * 2 > max_k) return r;
    num_k *= 2;
  }
}

double h_pm_lipschitz(const ChiralModel& cm) {
  double lip = 0.0;
  for (int r = 1; r <= cm.range(); ++r)
    lip += r * (operator_norm(cm.h_pm_coefficient(r)) + operator_norm(cm.h_pm_coefficient(-r)));
  return lip;
}

double chiral_gap_margin(const ChiralModel& cm, int num_k) {
  cm.require_balanced();
  if (num_k < 1) throw Error(ErrorCode::InvalidArgument, "num_k must be positive");
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < num_k; ++i) m = std::min(m, min_singular_value(cm.h_pm(unit(grid_k(i, num_k)))));
  return m;
}

ChiralGapCertificate certify_chiral_gap(const ChiralModel& cm, int initial_k, int max_k) {
  const double lip = h_pm_lipschitz(cm);
  int num_k = std::max(initial_k, 8);
  for (;;) {
    ChiralGapCertificate c;
    c.num_k = num_k;
    c.sampled_margin = chiral_gap_margin(cm, num_k);
    c.certified_margin = c.sampled_margin - 0.5 * lip * 2.0 * std::numbers::pi / num_k;
    if (c.certified() || c.sampled_margin <= 0.0 || num_k * 2 > max_k) return c;
    num_k *= 2;
  }
}

ChiralGapCertificate require_chiral_gap(const ChiralModel& cm) {
  ChiralGapCertificate c = certify_chiral_gap(cm);
  if (!c.certified()) {
    std::ostringstream os;
    os << "zero-energy gap not certified (sampled margin " << c.sampled_margin << ", certified "
       << c.certified_margin << " at " << c.num_k << " samples)";
    throw Error(ErrorCode::GapNotCertified, os.str());
  }
  return c;
}

}  // namespace bec
