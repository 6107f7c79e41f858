#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "bec/fixtures.hpp"
#include "bec/io.hpp"
#include "bec/winding.hpp"
#include "helpers.hpp"

using namespace bec;

namespace {

const char* kSsh = R"({
  "dim_v": 2,
  "range": 1,
  "on_site": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
  "right_hops": [[[[0, 0], [0, 0]], [[2, 0], [0, 0]]]],
  "grading": [1, -1]
})";

}  // namespace

TEST(ParseModel, SshFile) {
  const ModelFile f = parse_model(kSsh);
  ASSERT_TRUE(f.grading.has_value());
  EXPECT_EQ(f.model.dim_v(), 2);
  EXPECT_EQ(f.model.range(), 1);
  // Left hop defaults to the adjoint of the right hop.
  EXPECT_LT((f.model.left_hop(1) - f.model.right_hop(1).adjoint()).norm(), 1e-15);
  const ChiralModel cm = chiral_model(f);
  EXPECT_EQ(compute_winding(cm).winding, 1);
  const ChiralModel ref = fixtures::ssh(1.0, 2.0);
  for (double k : {0.2, 2.9}) EXPECT_LT((cm.h_pm(unit(k)) - ref.h_pm(unit(k))).norm(), 1e-14);
}

TEST(ParseModel, RoundTrip) {
  std::mt19937_64 rng(3);
  const ModelParams m = test::random_self_adjoint(rng, 3, 2);
  const ModelFile f = parse_model(model_to_json(m).dump());
  EXPECT_FALSE(f.grading.has_value());
  EXPECT_EQ((f.model.on_site() - m.on_site()).norm(), 0.0);
  for (int r = 1; r <= 2; ++r) {
    EXPECT_EQ((f.model.right_hop(r) - m.right_hop(r)).norm(), 0.0);
    EXPECT_EQ((f.model.left_hop(r) - m.left_hop(r)).norm(), 0.0);
  }
}

TEST(ParseModel, Errors) {
  EXPECT_BEC_ERROR(parse_model("{"), ErrorCode::ParseError);
  EXPECT_BEC_ERROR(parse_model(R"({"dim_v": 1, "range": 1, "on_site": [[[0,0]]], "right_hops": [[[[1,0]]]], "foo": 1})"),
                   ErrorCode::ParseError);
  EXPECT_BEC_ERROR(parse_model(R"({"dim_v": 1, "range": 1, "on_site": [[[0,0]]], "right_hops": [[[[1]]]]})"),
                   ErrorCode::ParseError);
  // Grading with an empty minus component.
  const ModelFile unbalanced = parse_model(R"({"dim_v": 2, "range": 1, "on_site": [[[0,0],[1,0]],[[1,0],[0,0]]],
                                   "right_hops": [[[[1,0],[0,0]],[[0,0],[1,0]]]], "grading": [1, 1]})");
  EXPECT_BEC_ERROR(chiral_model(unbalanced),
                   ErrorCode::ValidationError);
  EXPECT_BEC_ERROR(parse_model(R"({"dim_v": 0, "range": 1, "on_site": [], "right_hops": [[]]})"),
                   ErrorCode::ParseError);
  try {
    parse_model(R"({"dim_v": 1, "range": 1, "on_site": [[[0,0]]], "right_hops": [[[[1,0]]]], "foo": 1})");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }
}

TEST(ParseFamily, SshGrid) {
  const ModelFamily fam = parse_family(R"({
    "dim_v": 2, "range": 1, "grading": [1, -1],
    "param1": {"name": "t1", "min": -2, "max": 2, "on_site": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
    "param2": {"name": "t2", "min": -2, "max": 2, "right_hops": [[[[0, 0], [0, 0]], [[1, 0], [0, 0]]]]}
  })");
  EXPECT_EQ(fam.param1.name, "t1");
  EXPECT_EQ(fam.param2.max, 2.0);
  for (auto [t1, t2] : {std::pair{1.0, 2.0}, {2.0, 1.0}, {-0.5, 1.5}, {1.5, -0.2}}) {
    const ChiralModel cm = fam.at(t1, t2);
    EXPECT_EQ(compute_winding(cm).winding, std::abs(t2) > std::abs(t1) ? 1 : 0);
  }
}

TEST(Format, Doubles) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
