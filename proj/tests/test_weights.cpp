#include <doctest.h>

#include "rtcalc/weights.hpp"

using namespace rtcalc;

namespace {

Tree rt(Mask legs, std::vector<Edge> edges) {
  Tree t;
  t.legs = legs;
  t.edges = std::move(edges);
  return normalize(t);
}

}  // namespace

TEST_CASE("coefficient anchors 7, 6, 42") {
  CHECK(coeff_c(rt(range_mask(0, 3), {{0b1110, 1, 0}})) == 7);
  CHECK(coeff_c(rt(range_mask(0, 3), {{0b1110, 1, 1}})) == 6);
  const Tree chain = rt(range_mask(0, 4), {{0b11110, 0, 0}, {0b01110, 1, 0}});
  CHECK(coeff_c(chain) == 42);
  CHECK(coeff_brute(chain, WeightContext::plain()).coefficient == 42);
}

TEST_CASE("DP agrees with brute force on decorated rational-tails graphs") {
  for (int n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_rt_graphs(n))
      for (const auto& d : enumerate_decorations(t, DecoContext::half_edges(true), 3)) {
        const auto ctx = WeightContext::plain();
        CHECK(coeff_dp(d, ctx).coefficient == coeff_brute(d, ctx).coefficient);
      }
}

TEST_CASE("allowing zero values does not change the sum") {
  const Tree t = rt(range_mask(0, 4), {{0b11110, 1, 1}, {0b01110, 1, 0}});
  mpz_class with_zero = 0;
  for (const auto& w : enumerate_weightings(t, WeightContext::plain(), true)) with_zero += w.product();
  CHECK(with_zero == coeff_c(t));
}

TEST_CASE("symmetric functions") {
  CHECK(h_sym(2, 2) == 7);   // 1 + 2 + 4
  CHECK(e_sym(2, 3) == 11);  // 2 + 3 + 6
  CHECK(e_sym(0, 5) == 1);
  CHECK(e_sym(4, 3) == 0);
}
