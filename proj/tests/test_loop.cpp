#include <gtest/gtest.h>

#include "bec/fixtures.hpp"
#include "bec/loop.hpp"
#include "bec/schur.hpp"
#include "bec/winding.hpp"
#include "helpers.hpp"

using namespace bec;

namespace {

MatrixLoop scalar_loop(int lowest, std::vector<cplx> c) {
  MatrixLoop l{1, lowest, {}};
  for (cplx x : c) l.coefficients.push_back(Mat::Constant(1, 1, x));
  return l;
}

}  // namespace

TEST(Schur, OrderedSelection) {
  std::mt19937_64 rng(41);
  const Mat a = test::gaussian(rng, 6, 6);
  auto inside = [](cplx mu) { return std::abs(mu) < 0.8; };
  const OrderedSchur s = ordered_schur(a, inside);
  EXPECT_LT((s.Q * s.T * s.Q.adjoint() - a).norm(), 1e-12 * a.norm());
  EXPECT_LT((s.Q.adjoint() * s.Q - Mat::Identity(6, 6)).norm(), 1e-12);
  EXPECT_LT(s.T.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm(), 1e-14);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(inside(s.T(i, i)), i < s.selected);

  const Mat x = invariant_subspace(a, inside);
  ASSERT_EQ(x.cols(), s.selected);
  const Mat ax = a * x;
  EXPECT_LT((ax - x * (x.adjoint() * ax)).norm(), 1e-10);
}

TEST(Loop, ModelRoundTrip) {
  std::mt19937_64 rng(42);
  const ChiralModel cm = test::random_chiral(rng, 2, 2);
  const MatrixLoop l = loop_from_model(cm);
  EXPECT_EQ(l.lowest_power, -2);
  EXPECT_EQ(l.highest_power(), 2);
  const ChiralModel back = model_from_loop(l);
  for (double k : {0.1, 1.7, 4.0}) EXPECT_LT((back.h_pm(unit(k)) - cm.h_pm(unit(k))).norm(), 1e-12);
  EXPECT_EQ(loop_winding(l), compute_winding(cm).winding);
}

TEST(Loop, Margin) {
  EXPECT_NEAR(loop_margin(loop_from_model(fixtures::ssh(1.0, 3.0)), 256), 2.0, 1e-9);
}

TEST(Linearize, PreservesDeterminant) {
  std::mt19937_64 rng(43);
  MatrixLoop p{2, 0, {}};
  for (int j = 0; j <= 3; ++j) p.coefficients.push_back(test::gaussian(rng, 2, 2));
  const MatrixLoop l = linearize(p);
  EXPECT_EQ(l.size, 6);
  EXPECT_EQ(l.lowest_power, 0);
  EXPECT_LE(l.highest_power(), 1);
  for (int i = 0; i < 6; ++i) {
    const cplx z = std::polar(0.3 + 0.4 * i, 0.9 * i);
    const cplx dp = p(z).determinant(), dl = l(z).determinant();
    EXPECT_LT(std::abs(dp - dl), 1e-10 * (1.0 + std::abs(dp)));
  }
}

TEST(Linearize, StageIsCertified) {
  const MatrixLoop p = polynomial_part(loop_from_model(fixtures::appendix_b(0.0)));
  HomotopyStage st = linearize_stage(p);
  certify_stage(st);
  EXPECT_GT(st.certificate, 0.0);
  for (int w : st.windings) EXPECT_EQ(w, 2);
}

TEST(Projection, ScalarLambdaAndOne) {
  // l = lambda: C' = 1, every eigenvalue above 1/2.
  const auto [path_l, rank_l] = projectionize(scalar_loop(0, {0.0, 1.0}));
  EXPECT_EQ(rank_l, 1);
  EXPECT_TRUE(path_l.certified());
  // l = 1: C' = 0.
  const auto [path_1, rank_1] = projectionize(scalar_loop(0, {1.0}));
  EXPECT_EQ(rank_1, 0);
  EXPECT_TRUE(path_1.certified());
}

TEST(Projection, RankEqualsWinding) {
  // For a linear loop the rank of Q is the winding number.
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    MatrixLoop l{3, 0, {test::gaussian(rng, 3, 3), test::gaussian(rng, 3, 3)}};
    int w;
    try {
      w = loop_winding(l);
    } catch (const Error&) {
      continue;
    }
    const ProjectionData pd = projection_data(l);
    EXPECT_EQ(pd.rank, w);
    EXPECT_LT((pd.projection * pd.projection - pd.projection).norm(), 1e-8);
  }
}

TEST(Projection, CriticalLine) {
  // C' = 1/2 exactly.
  EXPECT_BEC_ERROR(projection_data(scalar_loop(0, {1.0, 1.0})), ErrorCode::SpectrumOnCriticalLine);
}

TEST(StabilizeFactor, Certified) {
  std::mt19937_64 rng(45);
  const ChiralModel cm = test::random_chiral(rng, 1, 3);
  const int w = compute_winding(cm).winding;
  const HomotopyPath path = stabilize_and_factor(loop_from_model(cm));
  EXPECT_TRUE(path.certified());
  EXPECT_TRUE(path.winding_constant());
  for (const auto& s : path.stages) EXPECT_EQ(s.winding, w);
}

TEST(Deformation, EndpointCounts) {
  std::mt19937_64 rng(46);
  std::vector<ChiralModel> models = {fixtures::dimerized_minus(), fixtures::dimerized_trivial(),
                                     fixtures::ssh(2.0, 1.0), fixtures::appendix_b(-2.5)};
  models.push_back(test::random_chiral(rng, 1, 2));
  models.push_back(test::random_chiral(rng, 2, 1));
  for (const auto& cm : models) {
    const DeformationResult d = full_deformation(cm);
    const int half = cm.range() * cm.dim_plus();
    EXPECT_EQ(d.half_rank, half);
    EXPECT_EQ(d.count_lambda, d.winding + half);
    EXPECT_EQ(d.count_inverse, half);
    EXPECT_EQ(d.endpoint_edge.edge_index, d.winding);
    EXPECT_TRUE(d.path.certified());
    EXPECT_TRUE(d.path.winding_constant());
    EXPECT_EQ(d.winding, compute_winding(cm).winding);
  }
}
