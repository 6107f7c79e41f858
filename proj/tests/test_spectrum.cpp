#include <gtest/gtest.h>

#include <cmath>

#include "bec/fixtures.hpp"
#include "bec/spectrum.hpp"
#include "helpers.hpp"

using namespace bec;

TEST(BandStructure, SortedAndChiralSymmetric) {
  std::mt19937_64 rng(3);
  const ChiralModel cm = test::random_chiral(rng, 2, 2);
  const BandStructure b = band_structure(cm.base(), 64);
  ASSERT_EQ(b.num_k(), 64);
  for (const auto& e : b.energies) {
    for (Eigen::Index j = 1; j < e.size(); ++j) EXPECT_LE(e(j - 1), e(j));
    // Chiral spectrum is symmetric about zero.
    for (Eigen::Index j = 0; j < e.size(); ++j) EXPECT_NEAR(e(j), -e(e.size() - 1 - j), 1e-12);
  }
}

TEST(BandStructure, SshDispersion) {
  // E(k) = +-|t1 + t2 e^{ik}|.
  const BandStructure b = band_structure(fixtures::ssh(1.0, 2.0).base(), 32);
  for (int i = 0; i < b.num_k(); ++i) {
    const double k = b.k[static_cast<std::size_t>(i)];
    const double e = std::abs(1.0 + 2.0 * unit(k));
    EXPECT_NEAR(b.energies[static_cast<std::size_t>(i)](1), e, 1e-12);
  }
  EXPECT_DOUBLE_EQ(b.k.front(), -M_PI);
}

TEST(BandStructure, ThreadCountDoesNotMatter) {
  std::mt19937_64 rng(8);
  const ModelParams m = test::random_self_adjoint(rng, 3, 2);
  const BandStructure a = band_structure(m, 128, 1);
  const BandStructure b = band_structure(m, 128, 3);
  for (std::size_t i = 0; i < a.energies.size(); ++i) EXPECT_EQ(a.energies[i], b.energies[i]);
}

TEST(BandStructure, RejectsNonSelfAdjoint) {
  const Mat a = Mat::Ones(1, 1);
  const ModelParams p = build_model(1, 1, Mat::Zero(1, 1), {2.0 * a}, {a});
  EXPECT_BEC_ERROR(band_structure(p, 64), ErrorCode::NotSelfAdjoint);
}

TEST(Gap, SshGapIsTwiceMargin) {
  for (auto [t1, t2] : {std::pair{1.0, 2.0}, std::pair{2.0, 1.0}, std::pair{1.0, -2.0}}) {
    const GapReport g = certify_gap(fixtures::ssh(t1, t2).base(), 0.0);
    ASSERT_TRUE(g.gapped);
    const double m = std::abs(std::abs(t1) - std::abs(t2));
    EXPECT_NEAR(g.e_plus, m, 1e-9);
    EXPECT_NEAR(g.e_minus, -m, 1e-9);
    EXPECT_GT(g.certificate_margin, 0.0);
    EXPECT_LE(g.certified_plus, g.e_plus);
  }
}

TEST(Gap, GaplessSshNotCertified) {
  const GapReport g = certify_gap(fixtures::ssh(1.0, 1.0).base(), 0.0, 64, 1024);
  EXPECT_FALSE(g.gapped);
}

TEST(Gap, DimerizedFlatBands) {
  const GapReport g = certify_gap(fixtures::dimerized_plus().base(), 0.0);
  ASSERT_TRUE(g.gapped);
  EXPECT_NEAR(g.e_minus, -1.0, 1e-12);
  EXPECT_NEAR(g.e_plus, 1.0, 1e-12);
}

TEST(ChiralGap, SshMarginIsAbsDifference) {
  EXPECT_NEAR(chiral_gap_margin(fixtures::ssh(1.0, 2.0), 512), 1.0, 1e-9);
  EXPECT_NEAR(chiral_gap_margin(fixtures::ssh(0.5, -2.0), 512), 1.5, 1e-9);
  EXPECT_NEAR(chiral_gap_margin(fixtures::ssh(1.0, 1.0), 512), 0.0, 1e-9);
}

TEST(ChiralGap, CertificateAndRequire) {
  const ChiralGapCertificate c = certify_chiral_gap(fixtures::appendix_b(0.4));
  EXPECT_TRUE(c.certified());
  EXPECT_LE(c.certified_margin, c.sampled_margin);
  EXPECT_BEC_ERROR(require_chiral_gap(fixtures::ssh(1.0, 1.0)), ErrorCode::GapNotCertified);
}

TEST(ChiralGap, LipschitzBoundsDerivative) {
  std::mt19937_64 rng(5);
  const ChiralModel cm = test::random_chiral(rng, 2, 2);
  const double lip = h_pm_lipschitz(cm);
  const double dk = 1e-5;
  for (int i = 0; i < 50; ++i) {
    const double k = 0.12 * i;
    const Mat d = (cm.h_pm(unit(k + dk)) - cm.h_pm(unit(k))) / dk;
    EXPECT_LE(operator_norm(d), lip * (1 + 1e-6));
  }
}
