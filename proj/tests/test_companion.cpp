#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bec/companion.hpp"
#include "bec/fixtures.hpp"
#include "helpers.hpp"

using namespace bec;

namespace {

/// Scalar model with characteristic polynomial (lambda - mu)^2 at E = 0.
ModelParams double_root_model(cplx mu) {
  Mat a = Mat::Ones(1, 1), b(1, 1), v(1, 1);
  b << mu * mu;
  v << -2.0 * mu;
  return build_model(1, 1, v, {b}, {a});
}

}  // namespace

TEST(Companion, CharacteristicPolynomialRandom) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> e(-2.0, 2.0);
  std::vector<cplx> probes;
  for (int k = 0; k < 6; ++k) probes.push_back(std::polar(0.4 + 0.3 * k, 1.1 * k));
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 3, r = 1 + trial % 2;
    const CompanionMatrix c = build_companion(test::random_self_adjoint(rng, d, r), e(rng));
    EXPECT_EQ(c.size(), 2 * r * d);
    EXPECT_LT(char_poly_residual(c, probes), 1e-8);
  }
}

TEST(Companion, SingularLeadingHop) {
  EXPECT_BEC_ERROR(build_companion(fixtures::dimerized_plus().base(), 0.0), ErrorCode::SingularLeadingHop);
  EXPECT_BEC_ERROR(build_companion(fixtures::ssh(1.0, 2.0).base(), 0.0), ErrorCode::SingularLeadingHop);
}

TEST(Companion, AdvancesSolutions) {
  // A Bloch wave e^{ikn} u with H(e^{ik}) u = E u solves the recurrence.
  std::mt19937_64 rng(2);
  const ModelParams m = test::random_self_adjoint(rng, 2, 2);
  const double k = 0.7;
  Eigen::SelfAdjointEigenSolver<Mat> es(bloch_matrix(m, unit(k)));
  const double energy = es.eigenvalues()(0);
  const Vec u = es.eigenvectors().col(0);
  const CompanionMatrix c = build_companion(m, energy);
  Vec window(8);
  for (int n = -1; n <= 2; ++n) window.segment(2 * (n + 1), 2) = unit(k * n) * u;
  const Vec next = c.matrix * window;
  for (int n = 0; n <= 3; ++n)
    EXPECT_LT((next.segment(2 * n, 2) - unit(k * n) * u).norm(), 1e-10);
}

TEST(Clusters, GroupsAndSorts) {
  Vec v(4);
  v << 2.0, 1.0, 1.0 + 1e-10, cplx(0.0, -1.0);
  const auto c = cluster_eigenvalues(v, 1e-7);
  ASSERT_EQ(c.size(), 3u);
  // Equal moduli are ordered by argument: -i, then the double cluster at 1.
  EXPECT_NEAR(std::abs(c[0].value - cplx(0.0, -1.0)), 0.0, 1e-12);
  EXPECT_EQ(c[1].multiplicity, 2);
  int total = 0;
  for (const auto& x : c) total += x.multiplicity;
  EXPECT_EQ(total, 4);
  EXPECT_NEAR(std::abs(c.back().value), 2.0, 1e-12);
}

TEST(Split, ThetaFamilyDimensions) {
  const CompanionMatrix c = build_companion(fixtures::appendix_b(0.3).base(), 0.0);
  const CompanionSplit s = spectral_split(c, {}, true);
  EXPECT_EQ(s.dim_down(), 2);
  EXPECT_EQ(s.dim_bloch(), 0);
  EXPECT_EQ(s.dim_up(), 2);
  EXPECT_TRUE(duality_check(s));
  // Invariance of the decrease subspace.
  const Mat img = c.matrix * s.basis_down;
  EXPECT_LT((img - s.basis_down * (s.basis_down.adjoint() * img)).norm(), 1e-10);
}

TEST(Split, BorderlineWhenInBand) {
  // E inside a band puts eigenvalues on the unit circle.
  const CompanionMatrix c = build_companion(fixtures::appendix_b(0.0).base(), 1.5);
  const CompanionSplit s = spectral_split(c);
  EXPECT_GT(s.dim_bloch(), 0);
  EXPECT_TRUE(duality_check(s));
  EXPECT_BEC_ERROR(spectral_split(c, {}, true), ErrorCode::BorderlineEigenvalue);
}

TEST(Split, DualityRandomSelfAdjoint) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> e(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const CompanionMatrix c = build_companion(test::random_self_adjoint(rng, 2, 1 + trial % 3), e(rng));
    EXPECT_TRUE(duality_check(spectral_split(c)));
  }
}

TEST(Jordan, ThetaFamilyDefective) {
  const CompanionMatrix c = build_companion(fixtures::appendix_b(0.0).base(), 0.0);
  const auto ranks = jordan_rank_profile(c, -0.5, 3);
  ASSERT_EQ(ranks.size(), 3u);
  EXPECT_EQ(ranks[0], 3);
  EXPECT_EQ(ranks[1], 2);
  EXPECT_EQ(ranks[2], 2);
}

TEST(Propagate, PolynomialExponential) {
  const cplx mu = 0.5;
  const CompanionMatrix c = build_companion(double_root_model(mu), 0.0);
  Vec init(2);
  init << 0.0, mu;  // psi_0 = 0, psi_1 = mu
  const LatticeMode mode = propagate(c, init, 30);
  for (int n = 0; n <= 31; ++n) EXPECT_NEAR(std::abs(mode.at(n)(0) - double(n) * std::pow(mu, n)), 0.0, 1e-12);
  EXPECT_EQ(mode.classification, ModeClass::Decrease);
  EXPECT_LT(mode.max_residual, 1e-12);

  const DecayFit fit = fit_decay([&] {
    std::vector<double> norms;
    for (const auto& v : mode.window) norms.push_back(v.norm());
    return norms;
  }(), 1e-300);
  EXPECT_NEAR(fit.rate, 0.5, 1e-6);
  EXPECT_NEAR(fit.log_power, 1.0, 1e-6);
  EXPECT_NEAR(decay_rate(mode), 0.5, 1e-6);
}

TEST(Propagate, LeftStepsAndResidual) {
  std::mt19937_64 rng(4);
  const ModelParams m = test::random_self_adjoint(rng, 2, 2);
  const CompanionMatrix c = build_companion(m, 0.3);
  const Vec init = test::gaussian(rng, 8, 1);
  const LatticeMode mode = propagate(c, init, 6, 3);
  EXPECT_EQ(mode.n_min, 1 - 2 - 3);
  EXPECT_EQ(mode.n_max(), 2 + 6);
  EXPECT_LT(recurrence_residual(m, 0.3, mode.n_min, mode.window), 1e-8);
  // The initial data sits at cells -1..2.
  for (int n = -1; n <= 2; ++n) EXPECT_LT((mode.at(n) - init.segment(2 * (n + 1), 2)).norm(), 1e-10);
}

TEST(Propagate, SingularRightHop) {
  const Mat one = Mat::Ones(1, 1);
  const ModelParams m = build_model(1, 1, 0.5 * one, {Mat::Zero(1, 1)}, {one});
  const CompanionMatrix c = build_companion(m, 0.0);
  Vec init(2);
  init << 1.0, 0.0;
  EXPECT_NO_THROW(propagate(c, init, 3));
  EXPECT_BEC_ERROR(propagate(c, init, 3, 1), ErrorCode::SingularRightHop);
}

TEST(Decay, ZeroModeAndShortWindow) {
  const CompanionMatrix c = build_companion(double_root_model(0.5), 0.0);
  EXPECT_BEC_ERROR(decay_rate(propagate(c, Vec::Zero(2), 10)), ErrorCode::ZeroMode);
  Vec init(2);
  init << 0.0, 1.0;
  EXPECT_BEC_ERROR(decay_rate(propagate(c, init, 1)), ErrorCode::InvalidArgument);
}
