#pragma once

#include "bec/model.hpp"

namespace bec::fixtures {

/// V = 0, A = [[0,0],[1,0]]: hops V_+ of cell n+1 onto V_- of cell n. h_{+-} = lambda.
ChiralModel dimerized_plus();
/// Roles of V_+ and V_- exchanged: A = [[0,1],[0,0]]. h_{+-} = lambda^{-1}.
ChiralModel dimerized_minus();
/// V = [[0,1],[1,0]], A = 0. h_{+-} = 1.
ChiralModel dimerized_trivial();
/// V = [[0,t1],[t1,0]], A = [[0,0],[t2,0]]. h_{+-} = t1 + t2 lambda.
ChiralModel ssh(double t1, double t2);
/// V = [[0,1],[1,0]], A = e^{i theta} [[0,1/4],[1,0]]. C_0 is defective at E = 0.
ChiralModel appendix_b(double theta);

}  // namespace bec::fixtures
