#include "rtcalc/rtclasses.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

#include "rtcalc/rational.hpp"
#include "rtcalc/weights.hpp"

namespace rtcalc {

// ---------------------------------------------------------------------------
// Poly

Poly Poly::k_power(int e, const mpq_class& c) {
  Poly p;
  p.add(e, c);
  return p;
}

void Poly::add(int e, const mpq_class& c) {
  if (c == 0) return;
  auto [it, fresh] = c_.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) c_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [e, c] : o.c_) add(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [e, c] : o.c_) add(e, -c);
  return *this;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [e1, c1] : c_)
    for (const auto& [e2, c2] : o.c_) r.add(e1 + e2, c1 * c2);
  return r;
}

mpq_class Poly::eval(const mpq_class& k) const {
  mpq_class s = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    mpq_class p = 1;
    for (int i = 0; i < it->first; ++i) p *= k;
    s += it->second * p;
  }
  return s;
}

std::string Poly::str() const {
  if (c_.empty()) return "0";
  std::string out;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string coeff = to_string(abs(c));
    std::string term;
    if (e == 0)
      term = coeff;
    else {
      term = (abs(c) == 1 ? "" : coeff + "*") + "k";
      if (e > 1) term += "^" + std::to_string(e);
    }
    if (out.empty())
      out = (c < 0 ? "-" : "") + term;
    else
      out += (c < 0 ? " - " : " + ") + term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// RtClass

namespace {

using Fact = std::vector<std::pair<Mask, int>>;

Fact tidy(Fact f) {
  std::sort(f.begin(), f.end());
  Fact out;
  for (const auto& [m, e] : f) {
    if (!out.empty() && out.back().first == m)
      out.back().second += e;
    else
      out.push_back({m, e});
  }
  std::erase_if(out, [](const auto& p) { return p.second == 0; });
  return out;
}

Fact remap(const Fact& f, const std::function<Mask(Mask)>& map) {
  Fact out;
  for (const auto& [m, e] : f) out.push_back({map(m), e});
  return tidy(std::move(out));
}

std::string fact_str(const Fact& f) {
  std::string s;
  for (const auto& [m, e] : f) {
    s += "(k w{";
    bool first = true;
    for (int l : labels_of(m)) {
      s += (first ? "" : ",") + std::to_string(l);
      first = false;
    }
    s += "} - eta)";
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

}  // namespace

int degree(const RtKey& key) {
  int d = key.graph.degree();
  for (const auto& [m, e] : key.fact) d += e;
  return d;
}

Mask root_slot(const Tree& t, int leg) {
  Mask best = bit(leg);
  for (const auto& e : t.edges)
    if ((e.side & bit(leg)) && popcount(e.side) > popcount(best)) best = e.side;
  return best;
}

void RtClass::add(RtKey key, const mpq_class& c) {
  if (c == 0) return;
  key.graph = normalize(std::move(key.graph));
  key.fact = tidy(std::move(key.fact));
  const int top = 31 - std::countl_zero(key.graph.legs);
  if (n_ == 0) n_ = top;
  if (key.graph.legs != range_mask(0, n_)) throw invalid_argument("RtClass: term legs mismatch");
  if (!is_stable(key.graph, true))
    throw std::logic_error("RtClass: unstable graph " + encode(key.graph));
  if (!psi_within_dimension(key.graph, true)) return;
  auto [it, fresh] = terms_.try_emplace(std::move(key), c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

RtClass& RtClass::operator+=(const RtClass& o) {
  if (n_ == 0) n_ = o.n_;
  if (o.n_ != 0 && o.n_ != n_) throw invalid_argument("RtClass: leg count mismatch");
  for (const auto& [k, c] : o.terms_) {
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

RtClass& RtClass::operator-=(const RtClass& o) {
  RtClass neg = o;
  neg *= -1;
  return *this += neg;
}

RtClass& RtClass::operator*=(const mpq_class& c) {
  if (c == 0) terms_.clear();
  for (auto& [k, x] : terms_) x *= c;
  return *this;
}

// ---------------------------------------------------------------------------
// The graph formula

RtClass f_class_m(const std::vector<int>& mult, RtClass* dropped, int slack) {
  const int n = static_cast<int>(mult.size());
  if (n < 1) throw invalid_argument("f_class: need at least one leg");
  for (int m : mult)
    if (m < 1) throw invalid_argument("f_class: multiplicities must be positive");
  int total = 0;
  for (int m : mult) total += m;
  auto weight = [&](int l) { return mult[l - 1]; };

  RtClass out(n);
  if (dropped) *dropped = RtClass(n);
  const auto ctx = DecoContext::all_legs(mult);
  for (const Tree& G : enumerate_rt_graphs(n)) {
    const Layout L(G);
    const int sign = G.n_edges() % 2 ? -1 : 1;
    for (const Tree& T : enumerate_decorations(G, ctx, total - G.n_edges() + (dropped ? slack : 0))) {
      const mpz_class c = coeff_c(T, mult);
      if (c == 0) continue;
      // beta cancels part of prod (k w_l - eta)^{m_l}; w_h is w of the root slot.
      Fact fact;
      bool negative = false;
      for (int l : labels_of(L.v[0].legs & ~bit(0))) {
        fact.push_back({bit(l), weight(l) - T.leg_exp[l]});
      }
      for (int e : L.v[0].children) {
        const Mask A = T.edges[e].side;
        int x = 0;
        for (int l : labels_of(A)) x += weight(l) - T.leg_exp[l];
        for (const auto& f : T.edges)
          if ((f.side & A) == f.side) x -= 1 + f.head + f.tail;
        fact.push_back({A, x});
      }
      for (const auto& [m, e] : fact) negative |= e < 0;
      if (!negative && degree(RtKey{T, fact}) > total) continue;  // only reachable with slack
      RtKey key{T, fact};
      if (negative) {
        if (dropped) dropped->add(std::move(key), sign * c);
        continue;
      }
      if (degree(key) != total) throw std::logic_error("f_class: degree bookkeeping");
      out.add(std::move(key), sign * c);
    }
  }
  return out;
}

RtClass f_class(int n) { return f_class_m(std::vector<int>(static_cast<std::size_t>(n), 1)); }

RtClass e_class(int n, Mask I) {
  const int m = popcount(I);
  if (m < 1 || (I & ~range_mask(1, n - 1))) throw invalid_argument("e_class: bad I");
  std::vector<int> mult(static_cast<std::size_t>(n - m), 1);
  mult[0] = m;
  const RtClass F = f_class_m(mult);
  const std::vector<int> others = labels_of(range_mask(1, n - 1) & ~I);
  const Mask coda = I | bit(n);
  auto map = [&](Mask s) {
    Mask r = s & bit(0);
    if (s & bit(1)) r |= coda;
    for (int l = 2; l <= n - m; ++l)
      if (s & bit(l)) r |= bit(others[l - 2]);
    return r;
  };
  RtClass out(n);
  for (const auto& [K, x] : F.terms()) {
    const Tree& T = K.graph;
    Tree R;
    R.legs = range_mask(0, n);
    for (int l = 2; l <= n - m; ++l) R.leg_exp[others[l - 2]] = T.leg_exp[l];
    for (const auto& e : T.edges) R.edges.push_back({map(e.side), e.head, e.tail});
    R.edges.push_back({coda, 0, T.leg_exp[1]});
    out.add({R, remap(K.fact, map)}, x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pullback, divisor, collision

RtClass pullback_forget_rt(const RtClass& c, int x) {
  if (x <= c.n()) throw invalid_argument("pullback_forget_rt: label already present");
  RtClass out(x);
  for (const auto& [K, coeff] : c.terms()) {
    const Tree& T = K.graph;
    const Layout L(T);
    for (int vi = 0; vi < L.size(); ++vi) {
      const Tree R = attach_leg(T, vi, x);
      // Attaching inside a tail grows that tail's slot.
      const Mask tail = vi == 0 ? 0 : root_slot(T, lowest(T.edges[vi - 1].side));
      auto grow = [&](Mask from) {
        return [from, x](Mask s) { return s == from ? s | bit(x) : s; };
      };
      const Fact base = vi == 0 ? K.fact : remap(K.fact, grow(tail));
      out.add({R, base}, coeff);
      for (const auto& s : L.slots(vi)) {
        const int d = slot_exp(T, s);
        if (d == 0) continue;
        Tree B = R;
        set_slot_exp(B, s, 0);
        const Mask behind = slot_legs(R, s);
        B.edges.push_back({behind | bit(x), 0, d - 1});
        // At the genus vertex the bubble becomes the new root slot.
        const Fact f = vi == 0 ? remap(K.fact, grow(slot_legs(T, s))) : base;
        out.add({B, f}, -coeff);
      }
    }
  }
  return out;
}

RtClass multiply_divisor(const RtClass& c, int leg) {
  RtClass out(c.n());
  for (const auto& [K, coeff] : c.terms()) {
    RtKey R = K;
    R.fact.push_back({root_slot(K.graph, leg), 1});
    out.add(std::move(R), coeff);
  }
  return out;
}

RtClass collide_rt(const RtClass& c, int i, int j) {
  if (i == j) throw invalid_argument("collide_rt: legs must differ");
  if (i < 1 || j < 1 || i > c.n() || j > c.n()) throw invalid_argument("collide_rt: leg not present");
  std::array<int, kMaxLabel> to = identity_labels();
  for (int l = j + 1; l < kMaxLabel; ++l) to[l] = l - 1;
  to[j] = i;
  auto rename = [&](Mask s) {
    Mask r = 0;
    for (int l : labels_of(s)) r |= bit(to[l]);
    return r;
  };
  RtClass out(c.n() - 1);
  for (const auto& [K, coeff] : c.terms()) {
    const Tree& T = K.graph;
    const Layout L(T);
    const int v = L.vertex_of_leg(i);
    if (L.vertex_of_leg(j) != v) continue;
    Tree R = T;
    mpq_class x = coeff;
    if (v > 0 && L.v[v].valence() == 3) {
      // -psi on the far half of the bubble edge moves onto the merged leg.
      const int e = L.v[v].parent;
      R.leg_exp[i] = static_cast<std::uint8_t>(T.edges[e].tail + 1);
      R.edges.erase(R.edges.begin() + e);
      x = -x;
    } else if (T.leg_exp[i] || T.leg_exp[j]) {
      continue;  // psi_i . delta_{ij} = 0
    }
    const Tree merged = relabel(remove_leg(R, j), to);
    out.add({merged, remap(K.fact, rename)}, x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Profile comparison

namespace {

struct Profile {
  std::vector<std::array<int, 3>> root;  // (kind, mask, psi): 0 leg, 1 edge
  Fact fact;
  std::vector<int> tail_deg;
  auto operator<=>(const Profile&) const = default;
};

// Genus-0 tree of the tail behind root edge e: legs A and h0 = label 0.
Tree tail_tree(const Tree& t, int e) {
  const Mask A = t.edges[e].side;
  Tree r;
  r.legs = A | bit(0);
  for (int l : labels_of(A)) r.leg_exp[l] = t.leg_exp[l];
  r.leg_exp[0] = static_cast<std::uint8_t>(t.edges[e].head);
  for (const auto& f : t.edges)
    if ((f.side & A) == f.side && f.side != A) r.edges.push_back(f);
  return normalize(std::move(r));
}

std::string profile_str(const Profile& p) {
  std::string s = "root[";
  for (const auto& [kind, m, d] : p.root) {
    s += kind == 0 ? " leg" : " tail{";
    bool first = true;
    for (int l : labels_of(static_cast<Mask>(m))) {
      s += (kind == 0 || first ? "" : ",") + std::to_string(l);
      first = false;
    }
    if (kind == 1) s += "}";
    if (d) s += "^psi" + std::to_string(d);
  }
  return s + " ] " + fact_str(p.fact);
}

}  // namespace

VerificationReport profile_zero_test(const RtClass& c) {
  VerificationReport rep;
  rep.pass = true;
  std::map<Profile, std::map<std::vector<Tree>, mpq_class>> groups;
  for (const auto& [K, x] : c.terms()) {
    const Tree& T = K.graph;
    const Layout L(T);
    Profile p;
    p.fact = K.fact;
    std::vector<Tree> tails;
    for (int l : labels_of(L.v[0].legs & ~bit(0))) p.root.push_back({0, static_cast<int>(bit(l)), T.leg_exp[l]});
    for (int e : L.v[0].children) {
      p.root.push_back({1, static_cast<int>(T.edges[e].side), T.edges[e].tail});
      tails.push_back(tail_tree(T, e));
      p.tail_deg.push_back(tails.back().degree());
    }
    std::sort(p.root.begin(), p.root.end());
    groups[p][tails] += x;
  }
  std::size_t tested = 0;
  for (const auto& [p, g] : groups) {
    std::vector<std::pair<std::vector<Tree>, mpq_class>> terms;
    for (const auto& [ts, x] : g)
      if (x != 0) terms.push_back({ts, x});
    if (terms.empty()) continue;
    const std::size_t r = p.tail_deg.size();
    std::vector<StrataFamily> fam(r);
    for (std::size_t k = 0; k < r; ++k) {
      const Tree& T0 = terms[0].first[k];
      fam[k] = strata_cached(T0.legs, T0.n_legs() - 3 - p.tail_deg[k]);
    }
    // pv[t][k][s] = pairing of tail k of term t with stratum s of family k.
    std::vector<std::vector<std::vector<mpq_class>>> pv(terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) {
      pv[t].resize(r);
      for (std::size_t k = 0; k < r; ++k)
        for (const auto& S : *fam[k]) pv[t][k].push_back(pair_term(terms[t].first[k], S));
    }
    std::vector<std::size_t> idx(r, 0);
    bool done = false, failed = false;
    while (!done) {
      ++tested;
      mpq_class v = 0;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        mpq_class prod = terms[t].second;
        for (std::size_t k = 0; k < r && prod != 0; ++k) prod *= pv[t][k][idx[k]];
        v += prod;
      }
      if (v != 0) {
        failed = true;
        rep.witness = profile_str(p) + " against (";
        for (std::size_t k = 0; k < r; ++k) rep.witness += (k ? " x " : "") + encode((*fam[k])[idx[k]]);
        rep.witness += ") = " + to_string(v);
        break;
      }
      std::size_t k = 0;
      while (k < r && ++idx[k] == fam[k]->size()) idx[k++] = 0;
      done = k == r;
    }
    if (failed) {
      rep.pass = false;
      break;
    }
  }
  rep.note = "profile pairing, " + std::to_string(groups.size()) + " profiles, " +
             std::to_string(tested) + " strata tuples";
  return rep;
}

VerificationReport compare_rt(const std::string& id, std::vector<int> params, const RtClass& lhs,
                              const RtClass& rhs) {
  const auto t0 = std::chrono::steady_clock::now();
  const RtClass diff = lhs - rhs;
  VerificationReport rep;
  if (diff.empty()) {
    rep.pass = true;
    rep.note = "termwise (" + std::to_string(rhs.size()) + " terms)";
  } else {
    rep = profile_zero_test(diff);
    rep.note = std::to_string(diff.size()) + " terms differ termwise; " + rep.note;
  }
  rep.id = id;
  rep.params = std::move(params);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

RtClass frec_lhs(int n) {
  if (n < 2) throw invalid_argument("frec: n >= 2 required");
  RtClass lhs = multiply_divisor(pullback_forget_rt(f_class(n - 1), n), n);
  const Mask ground = range_mask(1, n - 1);
  for (Mask I = ground; I; I = (I - 1) & ground) {
    RtClass E = e_class(n, I);
    E *= popcount(I);
    lhs -= E;
  }
  return lhs;
}

VerificationReport verify_frec(int n) {
  const auto t0 = std::chrono::steady_clock::now();
  auto rep = compare_rt("frec", {n}, frec_lhs(n), f_class(n));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

VerificationReport verify_colliding_rt(const std::vector<int>& mult) {
  const auto t0 = std::chrono::steady_clock::now();
  int total = 0;
  for (int m : mult) total += m;
  RtClass cur = f_class(total);
  int p = 1;
  for (int m : mult) {
    for (int t = 1; t < m; ++t) cur = collide_rt(cur, p, p + 1);
    ++p;
  }
  auto rep = compare_rt("collide-rt", mult, cur, f_class_m(mult));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

VerificationReport verify_dropped_vanish(const std::vector<int>& mult, int slack) {
  const auto t0 = std::chrono::steady_clock::now();
  RtClass dropped;
  (void)f_class_m(mult, &dropped, slack);
  auto rep = profile_zero_test(dropped);
  rep.id = "dropped-vanish";
  rep.params = mult;
  rep.note = std::to_string(dropped.size()) + " dropped terms; " + rep.note;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Eta expansion and pushforwards

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r = a;
  r.insert(r.end(), b.begin(), b.end());
  std::sort(r.begin(), r.end());
  Mono out;
  for (const auto& [s, e] : r) {
    if (!out.empty() && out.back().first == s)
      out.back().second += e;
    else
      out.push_back({s, e});
  }
  std::erase_if(out, [](const auto& p) { return p.second == 0; });
  return out;
}

int mono_power(const Mono& m, Sym s) {
  for (const auto& [x, e] : m)
    if (x == s) return e;
  return 0;
}

void PushedClass::add(PushKey key, const Poly& c) {
  if (c.zero()) return;
  auto [it, fresh] = terms_.try_emplace(std::move(key), c);
  if (!fresh) {
    it->second += c;
    if (it->second.zero()) terms_.erase(it);
  }
}

PushedClass& PushedClass::operator+=(const PushedClass& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

PushedClass& PushedClass::operator-=(const PushedClass& o) {
  for (const auto& [k, c] : o.terms_) add(k, Poly(-1) * c);
  return *this;
}

PushedClass PushedClass::at_k(const mpq_class& k) const {
  PushedClass r;
  for (const auto& [key, c] : terms_) r.add(key, Poly(c.eval(k)));
  return r;
}

namespace {

constexpr Sym kEta{Sym::Kind::Eta, 0};

Mono single(Sym s, int e) { return e ? Mono{{s, e}} : Mono{}; }

// (k w - eta)^e as sum of (k-poly, monomial in w and eta).
std::vector<std::pair<Poly, Mono>> factor_power(Sym w, int e) {
  std::vector<std::pair<Poly, Mono>> out;
  for (int a = 0; a <= e; ++a) {
    const mpq_class c = binomial(e, a) * (a % 2 ? -1 : 1);
    out.push_back({Poly::k_power(e - a, c), mono_mul(single(w, e - a), single(kEta, a))});
  }
  return out;
}

Tree bare_point() { return one_vertex(bit(0) | bit(1)); }

}  // namespace

PushedClass expand_eta(const RtClass& c) {
  PushedClass out;
  for (const auto& [K, x] : c.terms()) {
    std::vector<std::pair<Poly, Mono>> acc{{Poly(x), {}}};
    for (const auto& [m, e] : K.fact) {
      if (e < 0) throw invalid_argument("expand_eta: negative factor exponent");
      std::vector<std::pair<Poly, Mono>> next;
      for (const auto& [p, mono] : acc)
        for (const auto& [q, f] : factor_power({Sym::Kind::Omega, m}, e))
          next.push_back({p * q, mono_mul(mono, f)});
      acc = std::move(next);
    }
    for (const auto& [p, mono] : acc) out.add({K.graph, mono}, p);
  }
  return out;
}

PushedClass pushforward_phi(const RtClass& c, int k, int g, std::optional<int> rank_override) {
  int r = 0;
  if (rank_override)
    r = *rank_override;
  else if (k == 1)
    r = g;
  else
    throw invalid_argument("pushforward_phi: rank of the k-th Hodge bundle must be supplied for k >= 2");
  if (r < 1) throw invalid_argument("pushforward_phi: rank must be positive");

  // X = -eta; red[a] = coefficient of X^{r-1} in the reduction of X^a.
  std::vector<std::map<Mono, mpq_class>> red;
  std::vector<std::map<Mono, mpq_class>> cur(static_cast<std::size_t>(r));  // X^a in basis X^0..X^{r-1}
  auto power = [&](int a) -> const std::map<Mono, mpq_class>& {
    while (static_cast<int>(red.size()) <= a) {
      const int step = static_cast<int>(red.size());
      if (step == 0) {
        cur.assign(static_cast<std::size_t>(r), {});
        cur[0][{}] = 1;
      } else {
        std::vector<std::map<Mono, mpq_class>> nx(static_cast<std::size_t>(r));
        for (int j = 0; j + 1 < r; ++j) nx[j + 1] = cur[j];
        for (const auto& [m, x] : cur[r - 1])  // X^r = -sum lambda_i X^{r-i}
          for (int i = 1; i <= r; ++i) {
            auto& slot = nx[r - i][mono_mul(m, single({Sym::Kind::Lambda, static_cast<Mask>(i)}, 1))];
            slot -= x;
          }
        for (auto& mp : nx) std::erase_if(mp, [](const auto& p) { return p.second == 0; });
        cur = std::move(nx);
      }
      red.push_back(cur[r - 1]);
    }
    return red[a];
  };

  const PushedClass expanded = expand_eta(c).at_k(k);
  PushedClass out;
  for (const auto& [key, p] : expanded.terms()) {
    const int a = mono_power(key.mono, kEta);
    Mono rest;
    for (const auto& [s, e] : key.mono)
      if (s.kind != Sym::Kind::Eta) rest.push_back({s, e});
    const mpq_class sign = a % 2 ? -1 : 1;  // eta^a = (-1)^a X^a
    for (const auto& [lam, x] : power(a)) out.add({key.graph, mono_mul(rest, lam)}, p * Poly(sign * x));
  }
  return out;
}

namespace {

void add_kappa(PushedClass& out, int p, const Mono& rest, const Poly& coeff, std::optional<int> g) {
  if (p == 0) return;  // the fibre has dimension one
  const Tree base = one_vertex(bit(0));
  if (p == 1 && g)
    out.add({base, rest}, coeff * Poly(mpq_class(2 * *g - 2)));
  else
    out.add({base, mono_mul(rest, single({Sym::Kind::Kappa, static_cast<Mask>(p - 1)}, 1))}, coeff);
}

}  // namespace

PushedClass one_leg_polynomial(const RtClass& c) {
  if (c.n() != 1) throw invalid_argument("one-leg class expected");
  const Sym psi{Sym::Kind::Psi, 1};
  const PushedClass expanded = expand_eta(c);
  PushedClass out;
  for (const auto& [key, p] : expanded.terms()) {
    Mono m = single(psi, key.graph.leg_exp[1]);
    for (const auto& [s, e] : key.mono) m = mono_mul(m, single(s.kind == Sym::Kind::Omega ? psi : s, e));
    out.add({bare_point(), m}, p);
  }
  return out;
}

PushedClass pushforward_point(const RtClass& c, std::optional<int> g) {
  const Sym psi{Sym::Kind::Psi, 1};
  const PushedClass poly = one_leg_polynomial(c);
  PushedClass out;
  for (const auto& [key, p] : poly.terms()) {
    Mono rest;
    for (const auto& [s, e] : key.mono)
      if (s != psi) rest.push_back({s, e});
    add_kappa(out, mono_power(key.mono, psi), rest, p, g);
  }
  return out;
}

PushedClass heavy_point_product(int a) {
  const Sym psi{Sym::Kind::Psi, 1};
  std::vector<std::pair<Poly, Mono>> acc{{Poly(1), {}}};
  for (int b = 0; b < a; ++b) {
    std::vector<std::pair<Poly, Mono>> next;
    for (const auto& [p, m] : acc) {
      next.push_back({p * (Poly::k_power(1) + Poly(b)), mono_mul(m, single(psi, 1))});
      next.push_back({p * Poly(-1), mono_mul(m, single(kEta, 1))});
    }
    acc = std::move(next);
  }
  PushedClass out;
  for (const auto& [p, m] : acc) out.add({bare_point(), m}, p);
  return out;
}

PushedClass heavy_point_kappa(int a, std::optional<int> g) {
  // e_b(k, k+1, ..., k+a-1) as coefficients of prod (1 + (k+j) t).
  std::vector<Poly> e{Poly(1)};
  for (int j = 0; j < a; ++j) {
    std::vector<Poly> nx(e.size() + 1);
    for (std::size_t b = 0; b < e.size(); ++b) {
      nx[b] += e[b];
      nx[b + 1] += e[b] * (Poly::k_power(1) + Poly(j));
    }
    e = std::move(nx);
  }
  PushedClass out;
  for (int b = 1; b <= a; ++b) {
    const Poly c = e[b] * Poly((a - b) % 2 ? -1 : 1);
    add_kappa(out, b, single(kEta, a - b), c, g);
  }
  return out;
}

RtClass heavy_point_eb(int a) {
  RtClass out(1);
  for (int b = 0; b < a; ++b) {
    Tree t = bare_point();
    t.leg_exp[1] = static_cast<std::uint8_t>(b);
    out.add({t, {{bit(1), a - b}}}, e_sym(b, a - 1));
  }
  return out;
}

PushedClass logan_expected(int g) {
  PushedClass out;
  const Mask ground = range_mask(1, g);
  const Tree smooth = one_vertex(range_mask(0, g));
  for (int i = 1; i <= g; ++i) out.add({smooth, single({Sym::Kind::Omega, bit(i)}, 1)}, Poly(1));
  out.add({smooth, single({Sym::Kind::Lambda, 1}, 1)}, Poly(-1));
  for (Mask A = ground; A; A = (A - 1) & ground) {
    if (popcount(A) < 2) continue;
    Tree t = smooth;
    t.edges.push_back({A, 0, 0});
    out.add({normalize(t), {}}, Poly(mpq_class(-binomial(popcount(A), 2))));
  }
  return out;
}

PushedClass emit_relation(int g, int n) {
  if (g < 1 || n <= 2 * g - 2) throw invalid_argument("emit_relation: needs n > 2g-2");
  return expand_eta(f_class(n)).at_k(1);
}

}  // namespace rtcalc
