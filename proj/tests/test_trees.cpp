#include <doctest.h>

#include <algorithm>
#include <random>

#include "rtcalc/trees.hpp"

using namespace rtcalc;

namespace {

Tree make(Mask legs, std::vector<Edge> edges) {
  Tree t;
  t.legs = legs;
  t.edges = std::move(edges);
  return normalize(t);
}

}  // namespace

TEST_CASE("rooted tree counts agree with the partition oracle") {
  for (int n = 2; n <= 5; ++n) {
    const auto a = enumerate_trees0(n);
    auto b = enumerate_by_partitions(range_mask(0, n), false);
    std::sort(b.begin(), b.end());
    auto s = a;
    std::sort(s.begin(), s.end());
    CHECK(s == b);
  }
  // M_{0,4}: the smooth stratum plus three boundary points.
  CHECK(enumerate_trees0(3).size() == 4);
}

TEST_CASE("rational-tails graph counts") {
  CHECK(enumerate_rt_graphs(1).size() == 1);
  CHECK(enumerate_rt_graphs(2).size() == 2);
  CHECK(enumerate_rt_graphs(3).size() == 8);
  for (int n = 1; n <= 5; ++n)
    CHECK(enumerate_rt_graphs(n).size() == enumerate_by_partitions(range_mask(0, n), true).size());
  CHECK_THROWS_AS((void)enumerate_rt_graphs(0), invalid_argument);
}

TEST_CASE("capacities at the genus vertex add up to n") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& t : enumerate_rt_graphs(n)) {
      const Layout L(t);
      int sum = popcount(L.v[0].legs & ~bit(0));
      for (int e : L.v[0].children) sum += capacity(t, e, unit_weights());
      CHECK(sum == n);
    }
}

TEST_CASE("normalize flips splits recorded from the anchor side") {
  const Tree a = make(range_mask(0, 4), {{0b00110, 1, 2}});
  const Tree b = make(range_mask(0, 4), {{0b11001, 2, 1}});
  CHECK(a == b);
  CHECK(encode(a) == encode(b));
}

TEST_CASE("stability and dimension pruning") {
  CHECK(is_stable(one_vertex(range_mask(0, 2))));
  CHECK_FALSE(is_stable(make(range_mask(0, 3), {{0b0110, 0, 0}, {0b0010, 0, 0}})));
  Tree t = make(range_mask(0, 3), {{0b0110, 0, 0}});
  t.edges[0].head = 1;  // trivalent vertex beyond the edge
  CHECK_FALSE(psi_within_dimension(t));
}

TEST_CASE("half-edge decorations of the one-edge tail") {
  // genus vertex -- {1,2,3}: the rational end is 4-valent (psi <= 1), the
  // genus end is unconstrained; deg <= 2 leaves 5 decorations.
  const Tree t = make(range_mask(0, 3), {{0b1110, 0, 0}});
  const auto d = enumerate_decorations(t, DecoContext::half_edges(true), 2);
  CHECK(d.size() == 5);
  CHECK(enumerate_decorations(t, DecoContext::half_edges(true), 2, true).size() == 2);
}

TEST_CASE("split_vertex reproduces the T-circle and T-tail example") {
  // h0 = 0, leg n = 6; root {0,1}, middle {6,2,3} with psi on h_n, child
  // {4,5} hanging off a tail with psi.
  const Tree t = make(range_mask(0, 6), {{0b1111100, 1, 0}, {0b0110000, 0, 1}});
  const Tree circ = split_vertex(t, 6, SplitMode::Circ);
  CHECK(circ == make(range_mask(0, 6), {{0b1111100, 0, 0}, {0b0111100, 0, 0}, {0b0110000, 0, 1}}));
  const int tail = t.find_edge(0b0110000);
  REQUIRE(tail >= 0);
  const Tree tl = split_vertex(t, 6, SplitMode::Tail, tail);
  CHECK(tl == make(range_mask(0, 6), {{0b1111100, 1, 0}, {0b1110000, 0, 0}, {0b0110000, 0, 0}}));
  // No psi on h_n: the construction is zero.
  Tree bare = t;
  bare.edges[static_cast<std::size_t>(t.find_edge(0b1111100))].head = 0;
  CHECK(split_vertex(bare, 6, SplitMode::Circ).legs == 0);
}

TEST_CASE("canonical form is stable under relabeling") {
  std::mt19937 rng(7);
  for (const auto& t : enumerate_trees0(5)) {
    std::array<int, kMaxLabel> perm = identity_labels();
    std::shuffle(perm.begin() + 1, perm.begin() + 6, rng);
    std::array<int, kMaxLabel> inv = identity_labels();
    for (int l = 0; l < kMaxLabel; ++l) inv[perm[l]] = l;
    const Tree r = relabel(t, perm);
    CHECK(relabel(r, inv) == t);
    CHECK(shape_key(r, range_mask(1, 5)) == shape_key(t, range_mask(1, 5)));
  }
}
