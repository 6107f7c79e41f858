#pragma once

#include <gtest/gtest.h>

#include <random>

#include "bec/model.hpp"

namespace bec::test {

inline Mat gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline ModelParams random_self_adjoint(std::mt19937_64& rng, int dim, int range) {
  Mat v = gaussian(rng, dim, dim);
  v = (v + v.adjoint()).eval() / 2.0;
  std::vector<Mat> hops;
  for (int r = 0; r < range; ++r) hops.push_back(gaussian(rng, dim, dim));
  return build_self_adjoint_model(v, hops);
}

/// Random balanced chiral model with blocks of size `half`.
inline ChiralModel random_chiral(std::mt19937_64& rng, int half, int range) {
  std::vector<Mat> pm, mp;
  for (int r = 0; r < range; ++r) {
    pm.push_back(gaussian(rng, half, half));
    mp.push_back(gaussian(rng, half, half));
  }
  return chiral_from_blocks(gaussian(rng, half, half), pm, mp);
}

}  // namespace bec::test

/// Expects `stmt` to throw bec::Error with the given code.
#define EXPECT_BEC_ERROR(stmt, expected_code)                                   \
  do {                                                                         \
    try {                                                                      \
      stmt;                                                                    \
      ADD_FAILURE() << "expected " << bec::to_string(expected_code);           \
    } catch (const bec::Error& e) {                                            \
      EXPECT_EQ(e.code(), expected_code) << e.what();                          \
    }                                                                          \
  } while (0)
