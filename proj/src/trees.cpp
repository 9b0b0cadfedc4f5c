#include "rtcalc/trees.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <functional>
#include <map>
#include <mutex>

namespace rtcalc {

std::vector<int> labels_of(Mask m) {
  std::vector<int> out;
  for (; m; m &= m - 1) out.push_back(lowest(m));
  return out;
}

int Tree::deg_psi() const {
  int d = 0;
  for (const auto& e : edges) d += e.head + e.tail;
  for (auto x : leg_exp) d += x;
  return d;
}

int Tree::find_edge(Mask side) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), side,
                             [](const Edge& e, Mask s) { return e.side < s; });
  if (it != edges.end() && it->side == side) return static_cast<int>(it - edges.begin());
  return -1;
}

Tree normalize(Tree t) {
  const Mask a = bit(t.anchor());
  for (auto& e : t.edges) {
    if (e.side & a) {
      e.side = t.legs ^ e.side;
      std::swap(e.head, e.tail);
    }
  }
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

Tree strip(Tree t) {
  for (auto& e : t.edges) e.head = e.tail = 0;
  t.leg_exp.fill(0);
  return t;
}

Tree one_vertex(Mask legs) {
  Tree t;
  t.legs = legs;
  return t;
}

bool compatible(Mask a, Mask b) {
  const Mask c = a & b;
  return c == 0 || c == a || c == b;
}

// ---------------------------------------------------------------------------

Layout::Layout(const Tree& t) : v(t.edges.size() + 1) {
  const int E = t.n_edges();
  for (int e = 0; e < E; ++e) {
    const Mask s = t.edges[e].side;
    int best = -1;
    for (int f = 0; f < E; ++f) {
      const Mask o = t.edges[f].side;
      if (f == e || (o & s) != s || o == s) continue;
      if (best < 0 || popcount(o) < popcount(t.edges[best].side)) best = f;
    }
    v[e + 1].parent = e;
    v[best + 1].children.push_back(e);  // best == -1 lands on the root
  }
  for (int vi = 0; vi <= E; ++vi) {
    Mask m = vi == 0 ? t.legs : t.edges[vi - 1].side;
    for (int c : v[vi].children) m &= ~t.edges[c].side;
    v[vi].legs = m;
  }
}

int Layout::vertex_of_leg(int l) const {
  for (int i = 0; i < size(); ++i)
    if (v[i].legs & bit(l)) return i;
  throw invalid_argument("leg not in tree: " + std::to_string(l));
}

std::vector<Slot> Layout::slots(int vi) const {
  std::vector<Slot> s;
  for (int l : labels_of(v[vi].legs)) s.push_back({Slot::Kind::Leg, l});
  if (v[vi].parent >= 0) s.push_back({Slot::Kind::Head, v[vi].parent});
  for (int c : v[vi].children) s.push_back({Slot::Kind::Tail, c});
  return s;
}

int slot_exp(const Tree& t, const Slot& s) {
  switch (s.kind) {
    case Slot::Kind::Leg: return t.leg_exp[s.id];
    case Slot::Kind::Head: return t.edges[s.id].head;
    case Slot::Kind::Tail: return t.edges[s.id].tail;
  }
  return 0;
}

void set_slot_exp(Tree& t, const Slot& s, int e) {
  switch (s.kind) {
    case Slot::Kind::Leg: t.leg_exp[s.id] = static_cast<std::uint8_t>(e); break;
    case Slot::Kind::Head: t.edges[s.id].head = e; break;
    case Slot::Kind::Tail: t.edges[s.id].tail = e; break;
  }
}

Mask slot_legs(const Tree& t, const Slot& s) {
  switch (s.kind) {
    case Slot::Kind::Leg: return bit(s.id);
    case Slot::Kind::Head: return t.legs ^ t.edges[s.id].side;
    case Slot::Kind::Tail: return t.edges[s.id].side;
  }
  return 0;
}

int vertex_psi(const Tree& t, const Layout& L, int vi) {
  int d = 0;
  for (const auto& s : L.slots(vi)) d += slot_exp(t, s);
  return d;
}

bool psi_within_dimension(const Tree& t, bool genus_root) {
  Layout L(t);
  for (int vi = genus_root ? 1 : 0; vi < L.size(); ++vi) {
    const int val = L.v[vi].valence();
    if (val < 3 || vertex_psi(t, L, vi) > val - 3) return false;
  }
  return true;
}

bool is_stable(const Tree& t, bool genus_root) {
  Layout L(t);
  for (int vi = genus_root ? 1 : 0; vi < L.size(); ++vi)
    if (L.v[vi].valence() < 3) return false;
  return true;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Tree> split_families(Mask legs, const std::vector<Mask>& cand) {
  std::vector<Tree> out;
  std::vector<Mask> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == cand.size()) {
      Tree t;
      t.legs = legs;
      for (Mask s : chosen) t.edges.push_back({s, 0, 0});
      out.push_back(normalize(std::move(t)));
      return;
    }
    rec(k + 1);
    const Mask c = cand[k];
    if (std::all_of(chosen.begin(), chosen.end(), [&](Mask o) { return compatible(o, c); })) {
      chosen.push_back(c);
      rec(k + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), [](const Tree& a, const Tree& b) {
    if (a.n_edges() != b.n_edges()) return a.n_edges() < b.n_edges();
    return a < b;
  });
  return out;
}

std::vector<Mask> subsets_between(Mask ground, int lo, int hi) {
  std::vector<Mask> out;
  for (Mask s = ground;; s = (s - 1) & ground) {
    const int c = popcount(s);
    if (c >= lo && c <= hi) out.push_back(s);
    if (s == 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Tree> enumerate_strata(Mask legs) {
  const int N = popcount(legs);
  if (N < 3) throw invalid_argument("need at least 3 legs");
  const Mask ground = legs & ~bit(lowest(legs));
  return split_families(legs, subsets_between(ground, 2, N - 2));
}

std::vector<Tree> enumerate_strata(Mask legs, int codim) {
  std::vector<Tree> out;
  for (auto& t : enumerate_strata(legs))
    if (t.n_edges() == codim) out.push_back(std::move(t));
  return out;
}

namespace {

std::size_t family_bytes(const std::vector<Tree>& f) {
  std::size_t b = sizeof(f) + f.capacity() * sizeof(Tree);
  for (const auto& t : f) b += t.edges.capacity() * sizeof(Edge);
  return b;
}

std::size_t cache_cap_bytes() {
  const char* env = std::getenv("RTCALC_STRATA_CACHE_MB");
  if (!env || !*env) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(std::strtoull(env, nullptr, 10)) << 20;
}

}  // namespace

StrataFamily strata_cached(Mask legs, int codim) {
  static std::mutex mu;
  static std::map<std::pair<Mask, int>, StrataFamily> cache;
  static std::size_t bytes = 0;
  static const std::size_t cap = cache_cap_bytes();
  const auto key = std::make_pair(legs, codim);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto fam = std::make_shared<const std::vector<Tree>>(enumerate_strata(legs, codim));
  const std::size_t b = family_bytes(*fam);
  std::lock_guard lock(mu);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (bytes + b > cap) {
    cache.clear();
    bytes = 0;
  }
  if (b <= cap) {
    cache.emplace(key, fam);
    bytes += b;
  }
  return fam;
}

std::vector<Tree> enumerate_trees0(int n) {
  if (n < 2) throw invalid_argument("enumerate_trees0: n >= 2 required");
  return enumerate_strata(range_mask(0, n));
}

std::vector<Tree> enumerate_rt_graphs(int n) {
  if (n < 1) throw invalid_argument("enumerate_rt_graphs: n >= 1 required");
  const Mask ground = range_mask(1, n);
  return split_families(ground | bit(0), subsets_between(ground, 2, n));
}

std::vector<Tree> enumerate_by_partitions(Mask legs, bool genus_root) {
  // Each vertex partitions the legs below it into blocks; a block of size >= 2
  // becomes an edge to a child vertex that again has >= 2 blocks.
  using Family = std::vector<Mask>;
  std::function<std::vector<Family>(Mask, int)> below = [&](Mask set, int min_blocks) {
    std::vector<Family> res;
    std::function<void(Mask, std::vector<Mask>&)> parts = [&](Mask rest, std::vector<Mask>& blocks) {
      if (rest == 0) {
        if (static_cast<int>(blocks.size()) < min_blocks) return;
        std::vector<Family> acc{Family{}};
        for (Mask b : blocks) {
          if (popcount(b) < 2) continue;
          auto subs = below(b, 2);
          std::vector<Family> next;
          for (const auto& a : acc)
            for (const auto& s : subs) {
              Family f = a;
              f.push_back(b);
              f.insert(f.end(), s.begin(), s.end());
              next.push_back(std::move(f));
            }
          acc = std::move(next);
        }
        res.insert(res.end(), acc.begin(), acc.end());
        return;
      }
      const Mask first = bit(lowest(rest));
      const Mask others = rest ^ first;
      for (Mask s = others;; s = (s - 1) & others) {
        blocks.push_back(first | s);
        parts(others ^ s, blocks);
        blocks.pop_back();
        if (s == 0) break;
      }
    };
    std::vector<Mask> blocks;
    parts(set, blocks);
    return res;
  };
  const Mask ground = legs & ~bit(lowest(legs));
  std::vector<Tree> out;
  for (const auto& fam : below(ground, genus_root ? 1 : 2)) {
    Tree t;
    t.legs = legs;
    for (Mask s : fam) t.edges.push_back({s, 0, 0});
    out.push_back(normalize(std::move(t)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

DecoContext DecoContext::half_edges(bool genus_root) {
  DecoContext c;
  c.genus_root = genus_root;
  return c;
}

DecoContext DecoContext::rooted(int m) {
  DecoContext c;
  c.kind = Kind::Leg1;
  c.h0 = true;
  c.leg_bound[1] = m;
  return c;
}

DecoContext DecoContext::all_legs(const std::vector<int>& mult) {
  DecoContext c;
  c.kind = Kind::AllLegs;
  c.genus_root = true;
  for (std::size_t l = 0; l < mult.size(); ++l) c.leg_bound[l + 1] = mult[l];
  return c;
}

std::vector<Tree> enumerate_decorations(const Tree& t0, const DecoContext& ctx, int degree_cap,
                                        bool exact) {
  const Tree base = strip(t0);
  Layout L(base);
  struct Item {
    Slot s;
    int vertex;
    int bound;  // exclusive, large when unbounded
  };
  constexpr int kFree = 1 << 20;
  std::vector<Item> items;
  std::vector<int> budget(L.size());
  for (int vi = 0; vi < L.size(); ++vi) {
    const bool genus = ctx.genus_root && vi == 0;
    budget[vi] = genus ? kFree : L.v[vi].valence() - 3;
    for (const auto& s : L.slots(vi)) {
      int b = kFree;
      if (s.kind == Slot::Kind::Leg) {
        if (s.id == 0) {
          if (!ctx.h0) continue;
        } else if (ctx.kind == DecoContext::Kind::HalfEdges) {
          continue;
        } else if (ctx.kind == DecoContext::Kind::Leg1 && s.id != 1) {
          continue;
        } else {
          b = ctx.leg_bound[s.id];
          if (b <= 1) continue;
        }
      }
      items.push_back({s, vi, b});
    }
  }
  std::vector<Tree> out;
  Tree cur = base;
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k == items.size()) {
      if (!exact || left == 0) out.push_back(cur);
      return;
    }
    const auto& it = items[k];
    const int hi = std::min({left, budget[it.vertex], it.bound - 1});
    for (int e = 0; e <= hi; ++e) {
      set_slot_exp(cur, it.s, e);
      budget[it.vertex] -= e;
      rec(k + 1, left - e);
      budget[it.vertex] += e;
    }
    set_slot_exp(cur, it.s, 0);
  };
  if (degree_cap >= 0 && std::all_of(budget.begin(), budget.end(), [](int b) { return b >= 0; }))
    rec(0, degree_cap);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

std::array<int, kMaxLabel> unit_weights() {
  std::array<int, kMaxLabel> w{};
  w.fill(1);
  return w;
}

int capacity(const Tree& t, int head, const std::array<int, kMaxLabel>& weights) {
  Mask m;
  if (head == -1) {
    if (!(t.legs & bit(0))) throw invalid_argument("capacity: tree has no h0");
    m = t.legs & ~bit(0);
  } else if (head >= 0 && head < t.n_edges()) {
    m = t.edges[head].side;
  } else {
    throw invalid_argument("capacity: not a head");
  }
  int c = 0;
  for (int l : labels_of(m)) c += weights[l];
  return c;
}

// ---------------------------------------------------------------------------

Tree split_off(const Tree& t, int vi, const std::vector<Slot>& moved, int new_exp, int rest_exp) {
  (void)vi;
  Mask m = 0;
  for (const auto& s : moved) m |= slot_legs(t, s);
  Tree r = t;
  r.edges.push_back({m, new_exp, rest_exp});
  return normalize(std::move(r));
}

Tree split_vertex(const Tree& t, int leg_n, SplitMode mode, int tail_edge) {
  Layout L(t);
  const int v = L.vertex_of_leg(leg_n);
  if (L.v[v].valence() < 4) throw invalid_argument("split_vertex: valence < 4");
  Slot s{};
  if (mode == SplitMode::Circ) {
    s = L.v[v].parent >= 0 ? Slot{Slot::Kind::Head, L.v[v].parent}
                           : Slot{Slot::Kind::Leg, t.anchor()};
  } else {
    const auto& ch = L.v[v].children;
    if (std::find(ch.begin(), ch.end(), tail_edge) == ch.end())
      throw invalid_argument("split_vertex: tail not at the vertex of leg n");
    s = {Slot::Kind::Tail, tail_edge};
  }
  const int d = slot_exp(t, s);
  if (d == 0) return Tree{};
  Tree r = t;
  set_slot_exp(r, s, 0);
  return split_off(r, v, {{Slot::Kind::Leg, leg_n}, s}, 0, d - 1);
}

std::array<int, kMaxLabel> identity_labels() {
  std::array<int, kMaxLabel> a{};
  for (int i = 0; i < kMaxLabel; ++i) a[i] = i;
  return a;
}

Tree relabel(const Tree& t, const std::array<int, kMaxLabel>& to) {
  auto map = [&](Mask m) {
    Mask r = 0;
    for (int l : labels_of(m)) r |= bit(to[l]);
    return r;
  };
  Tree r;
  r.legs = map(t.legs);
  if (popcount(r.legs) != t.n_legs()) throw invalid_argument("relabel: labels collide");
  for (int l : labels_of(t.legs)) r.leg_exp[to[l]] = t.leg_exp[l];
  for (const auto& e : t.edges) r.edges.push_back({map(e.side), e.head, e.tail});
  return normalize(std::move(r));
}

namespace {

std::string enc_vertex(const Tree& t, const Layout& L, int vi, Mask anonymous) {
  std::vector<std::string> items;
  for (int l : labels_of(L.v[vi].legs)) {
    std::string s = (anonymous & bit(l)) ? "*" : (l == 0 ? "h0" : std::to_string(l));
    if (t.leg_exp[l]) s += "^" + std::to_string(t.leg_exp[l]);
    items.push_back(std::move(s));
  }
  for (int c : L.v[vi].children) {
    const auto& e = t.edges[c];
    items.push_back("<" + std::to_string(e.tail) + "," + std::to_string(e.head) + ">" +
                    enc_vertex(t, L, c + 1, anonymous));
  }
  std::sort(items.begin(), items.end());
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? " " : "") + items[i];
  return out + ")";
}

}  // namespace

std::string encode(const Tree& t) {
  Layout L(t);
  return enc_vertex(t, L, 0, 0);
}

std::string shape_key(const Tree& t, Mask anonymous) {
  Layout L(t);
  return enc_vertex(t, L, 0, anonymous);
}

}  // namespace rtcalc
