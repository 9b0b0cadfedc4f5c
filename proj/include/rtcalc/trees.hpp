#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtcalc {

// Leg labels are small integers; label 0 is special: h0 in rooted rational
// trees, and the (virtual) attachment point of the genus-g vertex in
// rational-tails graphs.
using Mask = std::uint32_t;
inline constexpr int kMaxLabel = 24;

[[nodiscard]] constexpr Mask bit(int l) { return Mask{1} << l; }
[[nodiscard]] constexpr int popcount(Mask m) { return std::popcount(m); }
[[nodiscard]] constexpr int lowest(Mask m) { return std::countr_zero(m); }
[[nodiscard]] constexpr Mask range_mask(int lo, int hi) {  // {lo..hi}
  Mask m = 0;
  for (int l = lo; l <= hi; ++l) m |= bit(l);
  return m;
}
[[nodiscard]] std::vector<int> labels_of(Mask m);

struct invalid_argument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An edge is recorded by the set of legs on the side away from the anchor
// (the lowest label of the ambient).  Its head is the half on that far side.
struct Edge {
  Mask side = 0;
  int head = 0;  // psi exponent on the head half-edge
  int tail = 0;  // psi exponent on the tail half-edge
  auto operator<=>(const Edge&) const = default;
};

// A labeled tree with psi-decoration.  Labeled legs make automorphisms
// trivial, so the sorted split list plus exponents is a canonical form:
// equal trees compare equal regardless of how they were built.
struct Tree {
  Mask legs = 0;
  std::vector<Edge> edges;  // sorted by side
  std::array<std::uint8_t, kMaxLabel> leg_exp{};

  auto operator<=>(const Tree&) const = default;

  [[nodiscard]] int anchor() const { return lowest(legs); }
  [[nodiscard]] int n_legs() const { return popcount(legs); }
  [[nodiscard]] int n_edges() const { return static_cast<int>(edges.size()); }
  [[nodiscard]] int deg_psi() const;
  [[nodiscard]] int degree() const { return n_edges() + deg_psi(); }
  [[nodiscard]] bool undecorated() const { return deg_psi() == 0; }
  [[nodiscard]] int find_edge(Mask side) const;  // -1 if absent
};

// Re-anchors splits, sorts edges.  Builders may record a split from either
// side; normalize flips those containing the anchor (swapping head/tail).
[[nodiscard]] Tree normalize(Tree t);
[[nodiscard]] Tree strip(Tree t);  // drop all psi exponents
[[nodiscard]] Tree one_vertex(Mask legs);
[[nodiscard]] bool compatible(Mask a, Mask b);

// ---- derived vertex structure ----

struct Slot {
  enum class Kind : std::uint8_t { Leg, Head, Tail };
  Kind kind;
  int id;  // leg label or edge index
  auto operator<=>(const Slot&) const = default;
};

struct Vertex {
  Mask legs = 0;
  int parent = -1;  // edge whose head sits here, -1 for the root
  std::vector<int> children;
  [[nodiscard]] int valence() const {
    return popcount(legs) + static_cast<int>(children.size()) + (parent >= 0);
  }
};

// Vertex 0 is the root (carries the anchor); vertex e+1 sits beyond edge e.
struct Layout {
  std::vector<Vertex> v;
  explicit Layout(const Tree& t);
  [[nodiscard]] int vertex_of_leg(int l) const;
  [[nodiscard]] std::vector<Slot> slots(int vi) const;
  [[nodiscard]] int size() const { return static_cast<int>(v.size()); }
};

[[nodiscard]] int slot_exp(const Tree& t, const Slot& s);
void set_slot_exp(Tree& t, const Slot& s, int e);
// Legs reached through the slot, looking away from its vertex.
[[nodiscard]] Mask slot_legs(const Tree& t, const Slot& s);
[[nodiscard]] int vertex_psi(const Tree& t, const Layout& L, int vi);
// Every rational vertex has valence >= 3 and psi degree <= valence - 3.
// With genus_root the root is exempt (rational-tails graphs).
[[nodiscard]] bool psi_within_dimension(const Tree& t, bool genus_root = false);
[[nodiscard]] bool is_stable(const Tree& t, bool genus_root = false);

// ---- enumeration ----

// All stable trees on the given labels, grouped by edge count then ordered.
[[nodiscard]] std::vector<Tree> enumerate_strata(Mask legs);
[[nodiscard]] std::vector<Tree> enumerate_strata(Mask legs, int codim);
// Cached, thread-safe variant used by the zero test.  The environment
// variable RTCALC_STRATA_CACHE_MB caps the cache; when an insertion would
// exceed it the cache is flushed (holders keep their families alive).
using StrataFamily = std::shared_ptr<const std::vector<Tree>>;
[[nodiscard]] StrataFamily strata_cached(Mask legs, int codim);
// Rooted rational trees with legs {1..n, h0}.
[[nodiscard]] std::vector<Tree> enumerate_trees0(int n);
// Rational-tails graphs with legs 1..n; label 0 marks the genus-g vertex.
[[nodiscard]] std::vector<Tree> enumerate_rt_graphs(int n);
// Independent oracle: recursive set partitions around the root.
[[nodiscard]] std::vector<Tree> enumerate_by_partitions(Mask legs, bool genus_root);

struct DecoContext {
  enum class Kind { HalfEdges, Leg1, AllLegs };
  Kind kind = Kind::HalfEdges;
  bool h0 = false;          // label 0 is a decorated root leg (rooted rational)
  bool genus_root = false;  // root is the opaque genus-g vertex
  std::array<int, kMaxLabel> leg_bound{};  // exponent must stay < bound

  [[nodiscard]] static DecoContext half_edges(bool genus_root);
  [[nodiscard]] static DecoContext rooted(int m);  // h0, leg 1 below m
  [[nodiscard]] static DecoContext all_legs(const std::vector<int>& mult);
};

// Decorations with deg psi <= degree_cap (exactly == when exact is set),
// pruned by vertex dimension at rational vertices.
[[nodiscard]] std::vector<Tree> enumerate_decorations(const Tree& t, const DecoContext& ctx,
                                                      int degree_cap, bool exact = false);

// ---- heads and capacities ----

// Head ids: 0..E-1 for edge heads, -1 for h0.
[[nodiscard]] int capacity(const Tree& t, int head, const std::array<int, kMaxLabel>& weights);
[[nodiscard]] std::array<int, kMaxLabel> unit_weights();

// ---- local surgery ----

// Splits vertex vi into a trivalent vertex carrying `a`, `b` and a new edge,
// and the rest.  The new edge's half at the rest receives exponent `rest_exp`,
// the half at the new vertex 0; slots a,b keep their exponents except that
// the caller may reset them.
[[nodiscard]] Tree split_off(const Tree& t, int vi, const std::vector<Slot>& moved, int new_exp,
                             int rest_exp);

// T-circle / T^{h-} construction for the pullback along forgetting leg n.
// The slot is h_n (Head or the h0 leg) for circ, a Tail for tail mode.
// Returns an empty optional-like marker (legs == 0) when the exponent is 0.
enum class SplitMode { Circ, Tail };
[[nodiscard]] Tree split_vertex(const Tree& t, int leg_n, SplitMode mode, int tail_edge = -1);

// Permute/rename legs; labels absent from the map are kept.
[[nodiscard]] Tree relabel(const Tree& t, const std::array<int, kMaxLabel>& to);
[[nodiscard]] std::array<int, kMaxLabel> identity_labels();

// Text key: bottom-up nested encoding (children sorted, then legs, with exps).
[[nodiscard]] std::string encode(const Tree& t);
// Key that forgets the names of the given legs (for "sum over labelings").
[[nodiscard]] std::string shape_key(const Tree& t, Mask anonymous);

}  // namespace rtcalc
