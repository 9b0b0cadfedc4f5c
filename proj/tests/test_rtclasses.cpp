#include <doctest.h>

#include "rtcalc/io.hpp"
#include "rtcalc/rational.hpp"
#include "rtcalc/rtclasses.hpp"

using namespace rtcalc;

namespace {

Tree rt(Mask legs, std::vector<Edge> edges = {}) {
  Tree t;
  t.legs = legs;
  t.edges = std::move(edges);
  return normalize(t);
}

const Sym kEta{Sym::Kind::Eta, 0};
Sym kappa(int i) { return {Sym::Kind::Kappa, static_cast<Mask>(i)}; }

}  // namespace

TEST_CASE("polynomials in k") {
  const Poly k = Poly::k_power(1);
  const Poly p = (k + Poly(1)) * (k - Poly(1));
  CHECK(p == Poly::k_power(2) - Poly(1));
  CHECK(p.eval(3) == 8);
  CHECK((p - p).zero());
}

TEST_CASE("F for one and two points") {
  RtClass f1(1);
  f1.add({rt(0b11), {{0b10, 1}}}, 1);
  CHECK(f_class(1) == f1);

  RtClass f2(2);
  f2.add({rt(0b111), {{0b010, 1}, {0b100, 1}}}, 1);
  f2.add({rt(0b111, {{0b110, 0, 0}}), {{0b110, 1}}}, -1);
  CHECK(f_class(2) == f2);

  // F_2 = (pullback of F_1) (k w_2 - eta) - E_{1}.
  const RtClass prod = multiply_divisor(pullback_forget_rt(f_class(1), 2), 2);
  CHECK(prod - e_class(2, 0b10) == f2);
  CHECK(e_class(2, 0b10).size() == 1);
}

TEST_CASE("F for three points by shape") {
  const RtClass f = f_class(3);
  CHECK(f.size() == 14);
  const auto groups = shape_groups(f, range_mask(1, 3));
  CHECK(groups.size() == 8);
  std::map<std::string, int> by_coeff;
  for (const auto& g : groups) {
    CHECK(g.uniform);
    by_coeff[to_string(g.coefficient)] += 1;
  }
  CHECK(by_coeff == std::map<std::string, int>{{"-1", 1}, {"-2", 1}, {"-3", 1}, {"-6", 1},
                                              {"-7", 1}, {"1", 1}, {"2", 1}, {"3", 1}});
}

TEST_CASE("pullback of an undecorated coda term has two placements") {
  const RtClass pb = pullback_forget_rt(e_class(2, 0b10), 3);
  CHECK(pb.size() == 2);
}

TEST_CASE("recursion and colliding") {
  CHECK(verify_frec(2).pass);
  CHECK(verify_frec(3).pass);
  for (const std::vector<int>& m : {std::vector<int>{2}, {1, 2}, {2, 1}, {3}})
    CHECK(verify_colliding_rt(m).pass);
  CHECK(verify_dropped_vanish({1, 1, 1}).pass);
}

TEST_CASE("recursion without the coda correction fails with a witness") {
  const RtClass bad = multiply_divisor(pullback_forget_rt(f_class(2), 3), 3);
  const auto r = compare_rt("no-coda", {3}, bad, f_class(3));
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.witness.empty());
}

TEST_CASE("heavy point") {
  for (int a = 1; a <= 4; ++a) {
    const RtClass F = f_class_m({a});
    CHECK(F == heavy_point_eb(a));
    CHECK(one_leg_polynomial(F) == heavy_point_product(a));
  }
  // pi_* F_{(2)} = k(k+1) kappa_1 - (2k+1) kappa_0 eta.
  const Tree base = one_vertex(bit(0));
  const Poly k = Poly::k_power(1);
  PushedClass want;
  want.add({base, {{kappa(1), 1}}}, k * (k + Poly(1)));
  want.add({base, {{kEta, 1}, {kappa(0), 1}}}, Poly(-1) - k - k);
  CHECK(pushforward_point(f_class_m({2}), std::nullopt) == want);
  PushedClass want3;  // g = 3: kappa_0 = 4
  want3.add({base, {{kappa(1), 1}}}, k * (k + Poly(1)));
  want3.add({base, {{kEta, 1}}}, (Poly(-1) - k - k) * Poly(4));
  CHECK(pushforward_point(f_class_m({2}), 3) == want3);
}

TEST_CASE("phi pushforward of F^2_{2,(2)} with rank 3 is 1") {
  const PushedClass p = pushforward_phi(f_class_m({2}), 2, 2, 3);
  REQUIRE(p.terms().size() == 1);
  CHECK(p.terms().begin()->first.mono.empty());
  CHECK(p.terms().begin()->second == Poly(1));
  CHECK_THROWS_AS((void)pushforward_phi(f_class_m({2}), 2, 2), invalid_argument);
}

TEST_CASE("Logan divisor for g = 2") { CHECK(pushforward_phi(f_class(2), 1, 2) == logan_expected(2)); }

TEST_CASE("relations need n > 2g-2") {
  CHECK_THROWS_AS((void)emit_relation(3, 4), invalid_argument);
  CHECK_FALSE(emit_relation(2, 3).empty());
}
