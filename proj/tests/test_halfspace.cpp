#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bec/companion.hpp"
#include "bec/fixtures.hpp"
#include "bec/halfspace.hpp"
#include "bec/spectrum.hpp"
#include "bec/winding.hpp"
#include "helpers.hpp"

using namespace bec;

TEST(Truncate, BlockStructure) {
  std::mt19937_64 rng(1);
  const ModelParams m = test::random_self_adjoint(rng, 2, 2);
  const TruncatedHamiltonian th = truncate_halfspace(m, 10);
  ASSERT_EQ(th.matrix.rows(), 20);
  EXPECT_LT((th.matrix.block(0, 0, 2, 2) - m.on_site()).norm(), 1e-15);
  EXPECT_LT((th.matrix.block(0, 4, 2, 2) - m.right_hop(2)).norm(), 1e-15);
  EXPECT_LT((th.matrix.block(4, 0, 2, 2) - m.left_hop(2)).norm(), 1e-15);
  EXPECT_LT(th.matrix.block(0, 6, 2, 2).norm(), 1e-15);
  EXPECT_LT((th.matrix - th.matrix.adjoint()).norm(), 1e-14);
  EXPECT_BEC_ERROR(truncate_halfspace(m, 7), ErrorCode::TooFewCells);
}

TEST(Truncate, ChiralBlocks) {
  const ChiralModel cm = fixtures::appendix_b(0.5);
  const Mat pm = truncated_pm(cm, 8);
  const Mat mp = truncated_mp(cm, 8);
  EXPECT_LT((pm.adjoint() - mp).norm(), 1e-14);
  EXPECT_EQ(pm(0, 1), cm.h_pm_coefficient(1)(0, 0));
  EXPECT_EQ(pm(1, 0), cm.h_pm_coefficient(-1)(0, 0));
}

TEST(Truncate, ChiralSpectrumSymmetric) {
  std::mt19937_64 rng(6);
  const ChiralModel cm = test::random_chiral(rng, 2, 2);
  const TruncatedHamiltonian th = truncate_halfspace(cm.base(), 20);
  Eigen::SelfAdjointEigenSolver<Mat> es(th.matrix, Eigen::EigenvaluesOnly);
  const auto& e = es.eigenvalues();
  for (Eigen::Index i = 0; i < e.size(); ++i) EXPECT_NEAR(e(i), -e(e.size() - 1 - i), 1e-9);
}

TEST(EdgeTruncated, Fixtures) {
  struct Case {
    ChiralModel cm;
    int pm, mp;
  };
  for (const auto& c : {Case{fixtures::dimerized_plus(), 1, 0}, Case{fixtures::dimerized_minus(), 0, 1},
                        Case{fixtures::dimerized_trivial(), 0, 0}, Case{fixtures::ssh(1.0, 2.0), 1, 0},
                        Case{fixtures::ssh(2.0, 1.0), 0, 0}}) {
    const EdgeReport r = edge_modes_auto(c.cm);
    EXPECT_EQ(r.dim_ker_pm, c.pm);
    EXPECT_EQ(r.dim_ker_mp, c.mp);
    EXPECT_EQ(r.edge_index, c.pm - c.mp);
    EXPECT_EQ(r.method, EdgeMethod::Truncated);
  }
}

TEST(EdgeTruncated, KernelVectorsSolveHalfSpaceEquation) {
  // Padded with zeros on the left, each kernel vector is annihilated by the
  // half-space block up to the truncation edge.
  const ChiralModel cm = fixtures::appendix_b(1.2);
  const int n = 80;
  const EdgeReport r = edge_modes_truncated(cm, 0.0, n);
  ASSERT_EQ(r.kernel_pm.cols(), 1);
  const Mat t = truncated_pm(cm, n);
  const Vec resid = t * r.kernel_pm.col(0);
  EXPECT_LT(resid.head(n - 1).norm(), 1e-9 * operator_norm(t));
  // Closed form 1, -e^{-i theta}, 3/4 e^{-2 i theta}, ... in the first cells.
  EXPECT_NEAR(std::abs(r.kernel_pm(1, 0) / r.kernel_pm(0, 0)), 1.0, 1e-8);
  EXPECT_NEAR(std::abs(r.kernel_pm(2, 0) / r.kernel_pm(0, 0)), 0.75, 1e-8);
}

TEST(EdgeTruncated, StableUnderDoubling) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int trial = 0; trial < 20 && checked < 8; ++trial) {
    const ChiralModel cm = test::random_chiral(rng, 1, 2);
    if (chiral_gap_margin(cm, 512) < 0.1) continue;
    const int n = recommended_cells(cm);
    const EdgeReport a = edge_modes_truncated(cm, 0.0, n);
    const EdgeReport b = edge_modes_truncated(cm, 0.0, 2 * n);
    EXPECT_EQ(a.dim_ker_pm, b.dim_ker_pm);
    EXPECT_EQ(a.dim_ker_mp, b.dim_ker_mp);
    ++checked;
  }
  EXPECT_GE(checked, 4);
}

TEST(EdgeTruncated, Errors) {
  const ChiralModel cm = fixtures::ssh(1.0, 2.0);
  EXPECT_BEC_ERROR(edge_modes_truncated(cm, 0.3, 64), ErrorCode::InvalidArgument);
  EXPECT_BEC_ERROR(edge_modes_truncated(cm, 0.0, 3), ErrorCode::TooFewCells);
  EXPECT_BEC_ERROR(edge_modes_truncated(fixtures::ssh(1.0, 1.0), 0.0, 64), ErrorCode::GapNotCertified);
}

TEST(RecommendedCells, FollowsDecay) {
  // q = 1/2: ceil(log 1e-7 / log 0.5) + 8 = 24 + 8, below the floor of 64.
  EXPECT_EQ(recommended_cells(fixtures::ssh(1.0, 2.0)), 64);
  // q = 0.95 needs more.
  const int n = recommended_cells(fixtures::ssh(0.95, 1.0));
  EXPECT_EQ(n, static_cast<int>(std::ceil(std::log(1e-7) / std::log(0.95))) + 8);
}

TEST(EdgeCompanion, ThetaFamily) {
  const EdgeReport r = edge_modes_companion(fixtures::appendix_b(-2.5));
  EXPECT_EQ(r.method, EdgeMethod::Companion);
  EXPECT_EQ(r.dim_ker_pm, 1);
  EXPECT_EQ(r.dim_ker_mp, 0);
  ASSERT_TRUE(r.dim_down_plus && r.dim_down_minus);
  EXPECT_EQ(*r.dim_down_plus, 2);
  EXPECT_EQ(*r.dim_down_minus, 0);
}

TEST(EdgeCompanion, RoutesAgreeOnRandomModels) {
  std::mt19937_64 rng(23);
  int compared = 0;
  for (int trial = 0; trial < 30 && compared < 10; ++trial) {
    const ChiralModel cm = test::random_chiral(rng, 2, 1 + trial % 2);
    if (chiral_gap_margin(cm, 512) < 0.05) continue;
    const EdgeReport c = edge_modes_companion(cm);
    const EdgeReport t = edge_modes_auto(cm);
    EXPECT_EQ(c.dim_ker_pm, t.dim_ker_pm);
    EXPECT_EQ(c.dim_ker_mp, t.dim_ker_mp);
    // Kernel dimensions never exceed the graded decrease sectors, which
    // together fill at most the Dirichlet dimension R d_V.
    EXPECT_LE(c.dim_ker_pm, *c.dim_down_plus);
    EXPECT_LE(c.dim_ker_mp, *c.dim_down_minus);
    EXPECT_LE(*c.dim_down_plus + *c.dim_down_minus, cm.range() * cm.base().dim_v());
    ++compared;
  }
  EXPECT_GE(compared, 5);
}

TEST(EdgeModeCount, ZeroAndNonzeroEnergy) {
  const ModelParams m = fixtures::appendix_b(0.0).base();
  EXPECT_EQ(edge_mode_count(m, 0.0), 1);
  EXPECT_EQ(edge_mode_count(m, 0.1), 0);
  EXPECT_BEC_ERROR(edge_mode_count(fixtures::ssh(1.0, 2.0).base(), 0.0), ErrorCode::SingularLeadingHop);
}

TEST(InGapScan, SshEdgePair) {
  const auto states = in_gap_scan(fixtures::ssh(1.0, 2.0), 60, -0.9, 0.9);
  ASSERT_EQ(states.size(), 2u);
  int left = 0, right = 0;
  for (const auto& s : states) {
    EXPECT_LT(std::abs(s.energy), 1e-12);
    EXPECT_NEAR(s.localization_length, 1.0 / std::log(2.0), 1e-3);
    left += s.side == EdgeSide::Left;
    right += s.side == EdgeSide::Right;
  }
  EXPECT_EQ(left, 1);
  EXPECT_EQ(right, 1);
}

TEST(InGapScan, TrivialHasNoStates) {
  EXPECT_TRUE(in_gap_scan(fixtures::ssh(2.0, 1.0), 60, -0.9, 0.9).empty());
}

TEST(InGapScan, WindowMustBeInGap) {
  EXPECT_BEC_ERROR(in_gap_scan(fixtures::ssh(1.0, 2.0), 60, -2.0, 2.0), ErrorCode::GapNotCertified);
}

TEST(Localization, GeometricSequence) {
  std::vector<double> norms;
  for (int n = 0; n < 40; ++n) norms.push_back(std::pow(0.25, n));
  EXPECT_NEAR(localization_length(norms), 1.0 / std::log(4.0), 1e-9);
  EXPECT_TRUE(std::isinf(localization_length(std::vector<double>(20, 1.0))));

  Vec v(6);
  v << 3.0, 4.0, 0.0, 0.0, 1.0, 0.0;
  const auto c = cell_norms(v, 2);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c[0], 5.0);
  EXPECT_DOUBLE_EQ(c[2], 1.0);
}
