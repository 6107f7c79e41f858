#include "bec/fixtures.hpp"

namespace bec::fixtures {
namespace {

ChiralModel two_band(cplx v, cplx a_pm, cplx a_mp) {
  Mat vb(1, 1), lower(1, 1), upper(1, 1);
  vb << v;
  lower << a_pm;
  upper << a_mp;
  return chiral_from_blocks(vb, {lower}, {upper});
}

}  // namespace

ChiralModel dimerized_plus() { return two_band(0.0, 1.0, 0.0); }

ChiralModel dimerized_minus() { return two_band(0.0, 0.0, 1.0); }

ChiralModel dimerized_trivial() { return two_band(1.0, 0.0, 0.0); }

ChiralModel ssh(double t1, double t2) { return two_band(t1, t2, 0.0); }

ChiralModel appendix_b(double theta) {
  const cplx phase = std::polar(1.0, theta);
  return two_band(1.0, phase, 0.25 * phase);
}

}  // namespace bec::fixtures
