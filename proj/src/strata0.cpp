#include "rtcalc/strata0.hpp"

#include "rtcalc/rational.hpp"

#include <omp.h>

#include <algorithm>
#include <functional>
#include <limits>

namespace rtcalc {

namespace {

mpz_class factorial(int k) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

// Top psi-integrals vertex by vertex: (k-3)!/prod a! on each k-valent factor.
mpq_class integrate_with(const Tree& t, const Layout& L) {
  mpz_class num = 1, den = 1;
  for (int vi = 0; vi < L.size(); ++vi) {
    const int dim = L.v[vi].valence() - 3;
    int sum = 0;
    for (const auto& s : L.slots(vi)) {
      const int a = slot_exp(t, s);
      sum += a;
      if (a > 1) den *= factorial(a);
    }
    if (sum != dim) return 0;
    num *= factorial(dim);
  }
  return frac(num, den);
}

// The common degeneration of T and S (same anchor), with the indices of the
// edges shared by both; nullopt when some pair of splits crosses.
std::optional<std::pair<Tree, std::vector<Mask>>> meet(const Tree& T, const Tree& S) {
  if (T.legs != S.legs) throw invalid_argument("ambient mismatch");
  Tree G = T;
  std::vector<Mask> excess;
  for (const auto& s : S.edges) {
    bool shared = false;
    for (const auto& e : T.edges) {
      if (!compatible(e.side, s.side)) return std::nullopt;
      shared |= e.side == s.side;
    }
    if (shared)
      excess.push_back(s.side);
    else
      G.edges.push_back({s.side, 0, 0});
  }
  std::sort(G.edges.begin(), G.edges.end());
  return std::make_pair(std::move(G), std::move(excess));
}

// Expands prod over shared edges of (-psi' - psi'') on G and feeds each term.
template <class F>
void expand_excess(const Tree& G, const std::vector<Mask>& excess, F&& sink) {
  const int X = static_cast<int>(excess.size());
  std::vector<int> idx(X);
  for (int k = 0; k < X; ++k) idx[k] = G.find_edge(excess[k]);
  const int sign = X % 2 ? -1 : 1;
  for (unsigned choice = 0; choice < (1u << X); ++choice) {
    Tree t = G;
    for (int k = 0; k < X; ++k) {
      auto& e = t.edges[idx[k]];
      if (choice >> k & 1)
        ++e.head;
      else
        ++e.tail;
    }
    sink(t, sign);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void Class0::add(const Tree& t0, const mpq_class& c) {
  if (c == 0) return;
  Tree t = normalize(t0);
  if (ambient_ == 0) ambient_ = t.legs;
  if (t.legs != ambient_) throw invalid_argument("Class0: term ambient mismatch");
  if (!is_stable(t)) throw std::logic_error("Class0: unstable tree " + encode(t));
  if (t.degree() > dim() || !psi_within_dimension(t)) return;
  auto [it, fresh] = terms_.try_emplace(std::move(t), c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Class0& Class0::operator+=(const Class0& o) {
  if (ambient_ == 0) ambient_ = o.ambient_;
  if (o.ambient_ != 0 && o.ambient_ != ambient_) throw invalid_argument("Class0: ambient mismatch");
  for (const auto& [t, c] : o.terms_) {
    auto [it, fresh] = terms_.try_emplace(t, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Class0& Class0::operator-=(const Class0& o) {
  Class0 neg = o;
  neg *= -1;
  return *this += neg;
}

Class0& Class0::operator*=(const mpq_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [t, x] : terms_) x *= c;
  return *this;
}

int Class0::degree() const {
  if (terms_.empty()) return -1;
  if (!homogeneous()) throw invalid_argument("Class0: inhomogeneous class");
  return terms_.begin()->first.degree();
}

bool Class0::homogeneous() const {
  if (terms_.empty()) return true;
  const int d = terms_.begin()->first.degree();
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const auto& kv) { return kv.first.degree() == d; });
}

// ---------------------------------------------------------------------------

Class0 push_tree(const Tree& t) {
  Class0 c(t.legs);
  c.add(t, 1);
  return c;
}

mpq_class integrate_term(const Tree& t) {
  if (t.degree() != t.n_legs() - 3) return 0;
  return integrate_with(t, Layout(t));
}

mpq_class integrate(const Class0& c) {
  mpq_class s = 0;
  for (const auto& [t, x] : c.terms()) s += x * integrate_term(t);
  return s;
}

Class0 product_with_stratum(const Class0& c, const Tree& S0) {
  const Tree S = normalize(strip(S0));
  if (c.ambient() != 0 && S.legs != c.ambient()) throw invalid_argument("ambient mismatch");
  Class0 out(S.legs);
  for (const auto& [T, x] : c.terms()) {
    auto m = meet(T, S);
    if (!m) continue;
    expand_excess(m->first, m->second, [&](const Tree& t, int sign) { out.add(t, sign * x); });
  }
  return out;
}

mpq_class pair_term(const Tree& T, const Tree& S) {
  if (T.degree() + S.n_edges() != T.n_legs() - 3) return 0;
  auto m = meet(T, S);
  if (!m) return 0;
  const Layout L(m->first);  // exponent changes do not alter the layout
  mpq_class s = 0;
  expand_excess(m->first, m->second,
                [&](const Tree& t, int sign) { s += sign * integrate_with(t, L); });
  return s;
}

mpq_class pair(const Class0& c, const Tree& S) {
  const int d = c.degree();
  if (d >= 0 && d + S.n_edges() != c.dim()) throw invalid_argument("pair: degree mismatch");
  mpq_class s = 0;
  for (const auto& [T, x] : c.terms()) s += x * pair_term(T, normalize(strip(S)));
  return s;
}

ZeroReport zero_test(const Class0& c, Exec exec) {
  ZeroReport rep;
  if (c.empty()) return rep;
  const int d = c.degree();
  const StrataFamily family = strata_cached(c.ambient(), c.dim() - d);
  const auto& strata = *family;
  const std::vector<std::pair<Tree, mpq_class>> terms(c.terms().begin(), c.terms().end());
  const long N = static_cast<long>(strata.size());
  rep.strata_tested = strata.size();

  auto value = [&](long k) {
    mpq_class s = 0;
    for (const auto& [T, x] : terms) s += x * pair_term(T, strata[k]);
    return s;
  };

  long first = std::numeric_limits<long>::max();
  if (exec == Exec::Serial) {
    for (long k = 0; k < N; ++k)
      if (value(k) != 0) {
        first = k;
        break;
      }
  } else {
#pragma omp parallel for schedule(dynamic, 4) reduction(min : first)
    for (long k = 0; k < N; ++k)
      if (k < first && value(k) != 0) first = k;
  }
  if (first < N) {
    rep.zero = false;
    rep.witness = strata[first];
    rep.value = value(first);
  }
  return rep;
}

bool is_zero(const Class0& c, Exec exec) { return zero_test(c, exec).zero; }

// ---------------------------------------------------------------------------

Tree remove_leg(const Tree& t, int x) {
  Tree r = t;
  r.legs &= ~bit(x);
  r.leg_exp[x] = 0;
  for (auto& e : r.edges) e.side &= ~bit(x);
  return normalize(std::move(r));
}

Tree attach_leg(const Tree& t, int vi, int x) {
  Tree r = t;
  r.legs |= bit(x);
  if (vi > 0) {
    const Mask s = t.edges[vi - 1].side;
    for (auto& e : r.edges)
      if ((e.side & s) == s) e.side |= bit(x);
  }
  return r;  // not normalized: edge indices still match t
}

Class0 pullback_forget(const Class0& c, int x) {
  if (c.ambient() & bit(x)) throw invalid_argument("pullback_forget: label already present");
  Class0 out(c.ambient() | bit(x));
  for (const auto& [T, coeff] : c.terms()) {
    const Layout L(T);
    for (int vi = 0; vi < L.size(); ++vi) {
      const Tree R = attach_leg(T, vi, x);
      out.add(R, coeff);
      // psi_s = pi^* psi_s + D_{s,x}: each decorated slot spawns a bubble
      // {s, x} with the lowered exponent moved to the new half at the rest.
      for (const auto& s : L.slots(vi)) {
        const int d = slot_exp(T, s);
        if (d == 0) continue;
        Tree B = R;
        set_slot_exp(B, s, 0);
        B.edges.push_back({slot_legs(R, s) | bit(x), 0, d - 1});
        out.add(B, -coeff);
      }
    }
  }
  return out;
}

namespace {

int far_exp(const Tree& t, const Slot& s) {
  return s.kind == Slot::Kind::Head ? t.edges[s.id].tail : t.edges[s.id].head;
}

void push_term(const Tree& T, const mpq_class& coeff, int x, Class0& out) {
  const Layout L(T);
  const int v = L.vertex_of_leg(x);
  std::vector<Slot> others;
  for (const auto& s : L.slots(v))
    if (!(s.kind == Slot::Kind::Leg && s.id == x)) others.push_back(s);
  const int a = T.leg_exp[x];

  if (L.v[v].valence() == 3) {
    if (vertex_psi(T, L, v) != 0) return;
    const Slot s1 = others[0], s2 = others[1];
    const bool leg1 = s1.kind == Slot::Kind::Leg, leg2 = s2.kind == Slot::Kind::Leg;
    if (leg1 && leg2) throw invalid_argument("pushforward_forget: target has fewer than 3 legs");
    Tree R = T;
    if (leg1 || leg2) {
      const Slot& l = leg1 ? s1 : s2;
      const Slot& e = leg1 ? s2 : s1;
      R.leg_exp[l.id] = static_cast<std::uint8_t>(far_exp(T, e));
      R.edges.erase(R.edges.begin() + e.id);
    } else {
      const Edge merged{slot_legs(T, s1), far_exp(T, s1), far_exp(T, s2)};
      R.edges.erase(R.edges.begin() + std::max(s1.id, s2.id));
      R.edges.erase(R.edges.begin() + std::min(s1.id, s2.id));
      R.edges.push_back(merged);
    }
    out.add(remove_leg(R, x), coeff);
    return;
  }

  if (a == 0) {  // string equation at the vertex
    for (const auto& s : others) {
      const int d = slot_exp(T, s);
      if (d == 0) continue;
      Tree R = T;
      set_slot_exp(R, s, d - 1);
      out.add(remove_leg(R, x), coeff);
    }
  } else if (a == 1) {  // dilaton: kappa_0 on the vertex with the x removed
    out.add(remove_leg(T, x), coeff * (L.v[v].valence() - 3));
  } else {
    // psi_x = sum of boundary divisors separating x from two fixed slots.
    const std::vector<Slot> rest(others.begin() + 2, others.end());
    const unsigned R = static_cast<unsigned>(rest.size());
    for (unsigned b = 1; b < (1u << R); ++b) {
      std::vector<Slot> moved{{Slot::Kind::Leg, x}};
      for (unsigned k = 0; k < R; ++k)
        if (b >> k & 1) moved.push_back(rest[k]);
      Tree U = T;
      U.leg_exp[x] = static_cast<std::uint8_t>(a - 1);
      push_term(split_off(U, v, moved, 0, 0), coeff, x, out);
    }
  }
}

}  // namespace

Class0 pushforward_forget(const Class0& c, int x) {
  if (!(c.ambient() & bit(x))) throw invalid_argument("pushforward_forget: leg not present");
  Class0 out(c.ambient() & ~bit(x));
  for (const auto& [T, coeff] : c.terms()) push_term(T, coeff, x, out);
  return out;
}

Class0 collide(const Class0& c, int i, int j) {
  if (i == j) throw invalid_argument("collide: legs must differ");
  if (!(c.ambient() & bit(i)) || !(c.ambient() & bit(j)))
    throw invalid_argument("collide: leg not present");
  if (popcount(c.ambient()) < 4) throw invalid_argument("collide: need at least 4 legs");
  Class0 out(c.ambient() & ~bit(j));
  for (const auto& [T, coeff] : c.terms()) {
    const Layout L(T);
    const int v = L.vertex_of_leg(i);
    if (L.vertex_of_leg(j) != v) continue;
    if (L.v[v].valence() == 3) {
      // Bubble {i, j}: the excess factor leaves -psi on the far half, which
      // becomes psi on the merged leg once the bubble is contracted.
      Slot third{};
      for (const auto& s : L.slots(v))
        if (!(s.kind == Slot::Kind::Leg && (s.id == i || s.id == j))) third = s;
      Tree R = T;
      R.leg_exp[i] = static_cast<std::uint8_t>(far_exp(T, third) + 1);
      R.edges.erase(R.edges.begin() + third.id);
      out.add(remove_leg(R, j), -coeff);
    } else {
      if (T.leg_exp[i] || T.leg_exp[j]) continue;
      out.add(remove_leg(T, j), coeff);
    }
  }
  return out;
}

Class0 collide_via_product(const Class0& c, int i, int j) {
  Tree S = one_vertex(c.ambient());
  S.edges.push_back({bit(i) | bit(j), 0, 0});
  return pushforward_forget(product_with_stratum(c, normalize(S)), j);
}

Class0 relabel(const Class0& c, const std::array<int, kMaxLabel>& to) {
  Mask amb = 0;
  for (int l : labels_of(c.ambient())) amb |= bit(to[l]);
  Class0 out(amb);
  for (const auto& [t, x] : c.terms()) out.add(relabel(t, to), x);
  return out;
}

Class0 glue_push_gamma(const Class0& c, Mask I, int n) {
  const int m = popcount(I);
  if (m < 1 || (I & ~range_mask(1, n - 1))) throw invalid_argument("gamma: bad I");
  if (c.ambient() != range_mask(0, n - m)) throw invalid_argument("gamma: label-set mismatch");
  const std::vector<int> others = labels_of(range_mask(1, n - 1) & ~I);
  const Mask coda = I | bit(n);
  auto map = [&](Mask s) {
    Mask r = s & bit(0);
    if (s & bit(1)) r |= coda;
    for (int l = 2; l <= n - m; ++l)
      if (s & bit(l)) r |= bit(others[l - 2]);
    return r;
  };
  Class0 out(range_mask(0, n));
  for (const auto& [T, x] : c.terms()) {
    Tree R;
    R.legs = range_mask(0, n);
    R.leg_exp[0] = T.leg_exp[0];
    for (int l = 2; l <= n - m; ++l) R.leg_exp[others[l - 2]] = T.leg_exp[l];
    for (const auto& e : T.edges) R.edges.push_back({map(e.side), e.head, e.tail});
    R.edges.push_back({coda, 0, T.leg_exp[1]});
    out.add(R, x);
  }
  return out;
}

Class0 glue_push_sigma0(const Class0& c) {
  const int n = 32 - std::countl_zero(c.ambient());  // new leg label
  if (c.ambient() != range_mask(0, n - 1) || n < 3) throw invalid_argument("sigma0: bad ambient");
  Class0 out(range_mask(0, n));
  for (const auto& [T, x] : c.terms()) {
    Tree R = T;
    R.legs |= bit(n);
    R.edges.push_back({range_mask(1, n - 1), T.leg_exp[0], 0});
    R.leg_exp[0] = 0;
    out.add(R, x);
  }
  return out;
}

}  // namespace rtcalc
