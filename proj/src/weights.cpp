#include "rtcalc/weights.hpp"

#include "rtcalc/rational.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace rtcalc {

WeightContext WeightContext::plain(const std::vector<int>& mult) {
  WeightContext c;
  for (std::size_t l = 0; l < mult.size(); ++l) c.weight[l + 1] = mult[l];
  return c;
}

WeightContext WeightContext::rooted(int i, int m, bool truncated) {
  WeightContext c;
  c.kind = Kind::IRooted;
  c.i = i;
  c.weight[1] = m;
  c.truncated = truncated;
  return c;
}

WeightContext WeightContext::coda(int i, Mask I, int n) {
  WeightContext c;
  c.kind = Kind::ICoda;
  c.i = i;
  c.coda_set = I;
  c.coda_leg = n;
  return c;
}

mpz_class Weighting::product() const {
  mpz_class p = 1;
  for (const auto& [k, v] : values) p *= v;
  return p;
}

bool is_coda(const Tree& t, Mask I, int n) {
  Layout L(t);
  const int v = L.vertex_of_leg(n);
  if (!L.v[v].children.empty()) return false;
  if ((L.v[v].legs & ~bit(0)) != (I | bit(n))) return false;
  const int hn = L.v[v].parent;
  return hn >= 0 ? t.edges[hn].head == 0 : t.leg_exp[0] == 0;
}

namespace {

// One weak head chain of length p+1 with top value in [lo,hi], optionally
// coupled to a strict tail chain of length q below that top value.
struct Chain {
  HIndex::Kind kind;
  int id;
  int p;
  int lo, hi;
  int q;  // -1: no tail (h0)
};

struct Plan {
  std::vector<Chain> heads;
  std::vector<std::pair<int, int>> legs;  // (label, exponent), values in [1, m-1]
  bool empty = false;                     // some fixed value is out of range
};

Plan make_plan(const Tree& t, const WeightContext& ctx) {
  Plan P;
  Layout L(t);
  const bool rooted = ctx.kind != WeightContext::Kind::Plain;
  if (rooted && !(t.legs & bit(0))) throw invalid_argument("rooted context needs h0");

  std::vector<int> hi(t.n_edges());
  for (int e = 0; e < t.n_edges(); ++e) hi[e] = capacity(t, e, ctx.weight) - 1;
  int h0_hi = rooted ? capacity(t, -1, ctx.weight) - 1 : 0;
  int fixed_edge = -2;  // -1 means h0

  if (ctx.kind == WeightContext::Kind::ICoda) {
    if (!is_coda(t, ctx.coda_set, ctx.coda_leg))
      throw invalid_argument("coefficient d: decorated tree is not a coda for I");
    const int v = L.vertex_of_leg(ctx.coda_leg);
    const int hn = L.v[v].parent;
    fixed_edge = hn;
    if (hn >= 0) {
      --h0_hi;
      const Mask s = t.edges[hn].side;
      for (int e = 0; e < t.n_edges(); ++e)
        if ((t.edges[e].side & s) == s && t.edges[e].side != s) --hi[e];
    }
  }
  if (ctx.truncated) {
    const int n = 31 - std::countl_zero(t.legs);  // leg n: the highest label
    const auto& r = L.v[0];
    if (r.valence() == 3 && r.legs == (bit(0) | bit(n)) && r.children.size() == 1)
      hi[r.children[0]] = std::min(hi[r.children[0]], ctx.i);
  }

  if (rooted) {
    const int top = fixed_edge == -1 ? popcount(ctx.coda_set) : ctx.i;
    if (top != ctx.i || top > h0_hi || top < 1) P.empty = true;
    P.heads.push_back({HIndex::Kind::H0, 0, t.leg_exp[0], top, top, -1});
  }
  for (int e = 0; e < t.n_edges(); ++e) {
    int lo = 1, h = hi[e];
    if (e == fixed_edge) {
      lo = h = popcount(ctx.coda_set);
      if (h > hi[e]) P.empty = true;
    }
    P.heads.push_back({HIndex::Kind::Head, e, t.edges[e].head, lo, h, t.edges[e].tail});
  }
  for (int l : labels_of(t.legs & ~bit(0)))
    if (t.leg_exp[l]) P.legs.push_back({l, t.leg_exp[l]});
  return P;
}

// Symmetric function tables, built once.
constexpr int kTab = 48;

struct Tables {
  std::vector<std::vector<mpz_class>> h, e;  // [degree][a]
  Tables() : h(kTab, std::vector<mpz_class>(kTab)), e(kTab, std::vector<mpz_class>(kTab)) {
    for (int a = 0; a < kTab; ++a) h[0][a] = e[0][a] = 1;
    for (int p = 1; p < kTab; ++p) {
      h[p][0] = e[p][0] = 0;
      for (int a = 1; a < kTab; ++a) {
        h[p][a] = h[p][a - 1] + a * h[p - 1][a];
        e[p][a] = e[p][a - 1] + a * e[p - 1][a - 1];
      }
    }
  }
};

const Tables& tables() {
  static const Tables T;
  return T;
}

}  // namespace

const mpz_class& h_sym(int p, int a) { return tables().h.at(p).at(std::max(a, 0)); }
const mpz_class& e_sym(int q, int a) { return tables().e.at(q).at(std::max(a, 0)); }

std::vector<HIndex> index_set(const Tree& t, const WeightContext& ctx) {
  std::vector<HIndex> out;
  if (ctx.kind != WeightContext::Kind::Plain)
    for (int k = 0; k <= t.leg_exp[0]; ++k) out.push_back({HIndex::Kind::H0, 0, k});
  for (int e = 0; e < t.n_edges(); ++e) {
    for (int k = 0; k <= t.edges[e].head; ++k) out.push_back({HIndex::Kind::Head, e, k});
    for (int k = 1; k <= t.edges[e].tail; ++k) out.push_back({HIndex::Kind::Tail, e, k});
  }
  for (int l : labels_of(t.legs & ~bit(0)))
    for (int k = 1; k <= t.leg_exp[l]; ++k) out.push_back({HIndex::Kind::Leg, l, k});
  return out;
}

std::vector<Weighting> enumerate_weightings(const Tree& t, const WeightContext& ctx,
                                            bool allow_zero) {
  const Plan P = make_plan(t, ctx);
  if (P.empty) return {};
  const int vmin = allow_zero ? 0 : 1;
  int vmax = 1;
  for (const auto& c : P.heads) vmax = std::max(vmax, c.hi);
  for (int l = 0; l < kMaxLabel; ++l) vmax = std::max(vmax, ctx.weight[l]);

  // All sequences of the given length over [vmin, vmax] satisfying `ok`.
  auto sequences = [&](int len, const std::function<bool(const std::vector<int>&)>& ok) {
    std::vector<std::vector<int>> res;
    std::vector<int> cur(len, vmin);
    std::function<void(int)> rec = [&](int k) {
      if (k == len) {
        if (ok(cur)) res.push_back(cur);
        return;
      }
      for (int v = vmin; v <= vmax; ++v) {
        cur[k] = v;
        rec(k + 1);
      }
    };
    rec(0);
    return res;
  };

  std::vector<Weighting> out{Weighting{}};
  auto extend = [&](const std::vector<std::pair<HIndex, int>>& tmpl_keys,
                    const std::vector<std::vector<int>>& seqs) {
    std::vector<Weighting> next;
    for (const auto& w : out)
      for (const auto& s : seqs) {
        Weighting x = w;
        for (std::size_t k = 0; k < s.size(); ++k) x.values.push_back({tmpl_keys[k].first, s[k]});
        next.push_back(std::move(x));
      }
    out = std::move(next);
  };

  for (const auto& c : P.heads) {
    const int len = 1 + c.p + std::max(c.q, 0);
    std::vector<std::pair<HIndex, int>> keys;
    for (int k = 0; k <= c.p; ++k) keys.push_back({{c.kind, c.id, k}, 0});
    for (int k = 1; k <= c.q; ++k) keys.push_back({{HIndex::Kind::Tail, c.id, k}, 0});
    auto ok = [&](const std::vector<int>& s) {
      if (s[0] < c.lo || s[0] > c.hi) return false;
      for (int k = 1; k <= c.p; ++k)
        if (s[k] > s[k - 1]) return false;
      for (int k = 1; k <= c.q; ++k) {
        const int v = s[c.p + k];
        if (v >= s[0]) return false;
        if (k > 1 && v <= s[c.p + k - 1]) return false;
      }
      return true;
    };
    extend(keys, sequences(len, ok));
  }
  for (auto [l, d] : P.legs) {
    std::vector<std::pair<HIndex, int>> keys;
    for (int k = 1; k <= d; ++k) keys.push_back({{HIndex::Kind::Leg, l, k}, 0});
    const int m = ctx.weight[l];
    auto ok = [&](const std::vector<int>& s) {
      for (int k = 0; k < d; ++k) {
        if (s[k] >= m) return false;
        if (k > 0 && s[k] <= s[k - 1]) return false;
      }
      return true;
    };
    extend(keys, sequences(d, ok));
  }
  if (!allow_zero) return out;
  std::vector<Weighting> pruned;
  for (auto& w : out)
    if (w.product() != 0) pruned.push_back(std::move(w));
  return pruned;
}

namespace {

mpq_class finish(const Tree& t, const WeightContext& ctx, mpz_class sum) {
  mpq_class r(sum);
  if (ctx.kind == WeightContext::Kind::ICoda) {
    r = frac(sum, popcount(ctx.coda_set));
    if (r.get_den() != 1) throw std::logic_error("coefficient d is not an integer");
  }
  (void)t;
  return r;
}

}  // namespace

CoeffReport coeff_brute(const Tree& t, const WeightContext& ctx) {
  mpz_class sum = 0, count = 0;
  for (const auto& w : enumerate_weightings(t, ctx)) {
    sum += w.product();
    ++count;
  }
  return {finish(t, ctx, sum), count, CoeffReport::Method::Brute};
}

CoeffReport coeff_dp(const Tree& t, const WeightContext& ctx) {
  const Plan P = make_plan(t, ctx);
  if (P.empty) return {0, 0, CoeffReport::Method::DP};
  mpz_class sum = 1, count = 1;
  for (const auto& c : P.heads) {
    mpz_class f = 0, n = 0;
    for (int a = c.lo; a <= c.hi; ++a) {
      const int q = std::max(c.q, 0);
      f += a * h_sym(c.p, a) * e_sym(q, a - 1);
      n += binomial(a + c.p - 1, c.p) * binomial(a - 1, q);
    }
    sum *= f;
    count *= n;
  }
  for (auto [l, d] : P.legs) {
    sum *= e_sym(d, ctx.weight[l] - 1);
    count *= binomial(ctx.weight[l] - 1, d);
  }
  return {finish(t, ctx, sum), count, CoeffReport::Method::DP};
}

mpz_class coeff_c(const Tree& t, const std::vector<int>& mult) {
  return coeff_dp(t, WeightContext::plain(mult)).coefficient.get_num();
}

mpz_class coeff_c_im(const Tree& t, int i, int m, bool truncated) {
  return coeff_dp(t, WeightContext::rooted(i, m, truncated)).coefficient.get_num();
}

mpq_class coeff_d(const Tree& t, int i, Mask I, int n) {
  return coeff_dp(t, WeightContext::coda(i, I, n)).coefficient;
}

}  // namespace rtcalc
