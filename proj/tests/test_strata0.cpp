#include <doctest.h>

#include "rtcalc/cycles.hpp"

using namespace rtcalc;

namespace {

Tree divisor(Mask legs, Mask side) {
  Tree t = one_vertex(legs);
  t.edges.push_back({side, 0, 0});
  return normalize(t);
}

}  // namespace

TEST_CASE("psi integrals") {
  Tree p = one_vertex(range_mask(0, 3));
  p.leg_exp[1] = 1;
  CHECK(integrate_term(p) == 1);
  Tree q = one_vertex(range_mask(0, 4));
  q.leg_exp[1] = 1;
  q.leg_exp[2] = 1;
  CHECK(integrate_term(q) == 2);
  q.leg_exp[1] = 2;
  q.leg_exp[2] = 0;
  CHECK(integrate_term(q) == 1);
}

TEST_CASE("boundary divisor pairings on M_{0,5}") {
  const Mask L = range_mask(0, 4);
  CHECK(pair_term(divisor(L, 0b00110), divisor(L, 0b00110)) == -1);
  CHECK(pair_term(divisor(L, 0b00110), divisor(L, 0b11000)) == 1);
  CHECK(pair_term(divisor(L, 0b00110), divisor(L, 0b01010)) == 0);
}

TEST_CASE("dilaton: pushing psi_x times a pullback multiplies by n-2") {
  for (int n = 4; n <= 6; ++n)
    for (const auto& T : enumerate_strata(range_mask(0, n - 1))) {
      Class0 a(range_mask(0, n - 1));
      a.add(T, 1);
      const Class0 lhs = pushforward_forget(times_psi(pullback_forget(a, n), n), n);
      Class0 rhs = a;
      rhs *= n - 2;
      CHECK(lhs == rhs);
    }
}

TEST_CASE("collide: direct rule equals the product route") {
  for (int n = 4; n <= 5; ++n) {
    const Class0 z = z_cycle(n, 2, 1);
    CHECK(compare_classes("c", {n}, collide(z, 1, 2), collide_via_product(z, 1, 2)).pass);
  }
}

TEST_CASE("zero test finds a witness for a nonzero class") {
  Class0 c(range_mask(0, 3));
  Tree p = one_vertex(range_mask(0, 3));
  p.leg_exp[0] = 1;
  c.add(p, 1);
  const ZeroReport r = zero_test(c);
  CHECK_FALSE(r.zero);
  REQUIRE(r.witness.has_value());
  CHECK(r.value == 1);
  CHECK(zero_test(c, Exec::Serial).value == r.value);
}
