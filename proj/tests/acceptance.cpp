// Acceptance run: one PASS/FAIL line per criterion.  Expected values are
// built here from the published displays and closed forms, not taken from
// library helpers; tolerances (all exact) and time budgets are pinned below.
#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rtcalc/io.hpp"
#include "rtcalc/rational.hpp"
#include "rtcalc/weights.hpp"

using namespace rtcalc;

namespace {

// Wall-clock budgets in seconds.
constexpr double kBudget1 = 1, kBudget2 = 10, kBudget3Small = 120, kBudget3Six = 1800, kBudget4 = 60,
                 kBudget5 = 600, kBudget6 = 5, kBudget7 = 10, kBudget8 = 60, kBudget9 = 600,
                 kBudget10 = 600, kBudget11 = 300;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  long checks = 0;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void expect(bool ok, const std::string& why) {
    ++checks;
    if (!ok) fail(why);
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  if (s > budget) o.fail("over budget (" + std::to_string(budget) + " s)");
  if (o.checks == 0) o.fail("no checks ran");
  if (!o.pass) ++failures;
  std::ostringstream line;
  line.precision(3);
  line << std::fixed << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " [" << s << " s / "
       << budget << " s, " << o.checks << " checks]";
  if (!o.detail.empty()) line << " -- " << o.detail;
  std::cout << line.str() << std::endl;
}

Tree tree(Mask legs, std::vector<Edge> edges = {}, std::vector<std::pair<int, int>> leg_exps = {}) {
  Tree t;
  t.legs = legs;
  t.edges = std::move(edges);
  for (auto [l, d] : leg_exps) t.leg_exp[l] = static_cast<std::uint8_t>(d);
  return normalize(t);
}

std::string params(std::initializer_list<int> p) {
  std::string s;
  for (int x : p) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "(" + s + ")";
}

// Every permutation of the labels 1..n applied to the representative trees.
std::vector<std::array<int, kMaxLabel>> permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::array<int, kMaxLabel>> out;
  do {
    auto a = identity_labels();
    for (int i = 0; i < n; ++i) a[i + 1] = p[static_cast<std::size_t>(i)];
    out.push_back(a);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Mask map_mask(Mask m, const std::array<int, kMaxLabel>& to) {
  Mask r = 0;
  for (int l : labels_of(m)) r |= bit(to[l]);
  return r;
}

// Sum over labelings: one copy of each distinct relabeled representative.
Class0 symmetrize(int n, const std::vector<std::pair<Tree, int>>& reps) {
  Class0 out(range_mask(0, n));
  for (const auto& [t, c] : reps) {
    std::map<Tree, int> seen;
    for (const auto& p : permutations(n)) seen[relabel(t, p)] = c;
    for (const auto& [u, x] : seen) out.add(u, x);
  }
  return out;
}

struct RtRep {
  Tree graph;
  std::vector<std::pair<Mask, int>> fact;
  int coeff;
};

RtClass symmetrize_rt(int n, const std::vector<RtRep>& reps) {
  RtClass out(n);
  for (const auto& r : reps) {
    std::map<RtKey, int> seen;
    for (const auto& p : permutations(n)) {
      RtKey k{relabel(r.graph, p), {}};
      for (auto [m, e] : r.fact) k.fact.push_back({map_mask(m, p), e});
      std::sort(k.fact.begin(), k.fact.end());
      seen[k] = r.coeff;
    }
    for (const auto& [k, x] : seen) out.add(k, x);
  }
  return out;
}

const Sym kEta{Sym::Kind::Eta, 0};
const Sym kPsi1{Sym::Kind::Psi, 1};
Sym kappa(int i) { return {Sym::Kind::Kappa, static_cast<Mask>(i)}; }
Mono mono(std::vector<std::pair<Sym, int>> f) {
  std::erase_if(f, [](const auto& p) { return p.second == 0; });
  std::sort(f.begin(), f.end());
  return f;
}

// e_q of the given numbers, as polynomials in k: numbers are k + shift.
std::vector<Poly> elementary_in_k(int from, int count) {
  std::vector<Poly> e{Poly(1)};
  for (int j = 0; j < count; ++j) {
    std::vector<Poly> nx(e.size() + 1);
    for (std::size_t q = 0; q < e.size(); ++q) {
      nx[q] += e[q];
      nx[q + 1] += e[q] * (Poly::k_power(1) + Poly(from + j));
    }
    e = std::move(nx);
  }
  return e;
}

mpz_class elementary(int q, int a) {  // e_q(1, ..., a) by the recurrence on a
  std::vector<mpz_class> e(static_cast<std::size_t>(a) + 2, 0);
  e[0] = 1;
  for (int x = 1; x <= a; ++x)
    for (int j = x; j >= 1; --j) e[j] += x * e[j - 1];
  return q <= a ? e[static_cast<std::size_t>(q)] : mpz_class(0);
}

}  // namespace

int main() {
  // 1. The three coefficient anchors.
  criterion(1, "coefficient anchors 7, 6, 42", kBudget1, [](Outcome& o) {
    const Tree a = tree(range_mask(0, 3), {{0b1110, 1, 0}});
    const Tree b = tree(range_mask(0, 3), {{0b1110, 1, 1}});
    const Tree c = tree(range_mask(0, 4), {{0b11110, 0, 0}, {0b01110, 1, 0}});
    o.expect(coeff_c(a) == 7, "first graph gives " + coeff_c(a).get_str());
    o.expect(coeff_c(b) == 6, "second graph gives " + coeff_c(b).get_str());
    o.expect(coeff_c(c) == 42, "third graph gives " + coeff_c(c).get_str());
  });

  // 2. Worked Z-cycles, each display summed over labelings of 1..n.
  criterion(2, "worked Z-cycle displays and their vanishing", kBudget2, [](Outcome& o) {
    const Mask L3 = range_mask(0, 3), L4 = range_mask(0, 4);
    struct Case {
      int n, i, j;
      Class0 want;
    };
    const Tree smooth4 = tree(L4, {}, {{0, 2}});
    const Tree head_psi = tree(L4, {{0b11100, 1, 0}});                 // {h0,1} -- {2,3,4}, psi far side
    const Tree h0_psi_edge = tree(L4, {{0b11000, 0, 0}}, {{0, 1}});    // {h0,1,2,psi} -- {3,4}
    const Tree chain = tree(L4, {{0b11100, 0, 0}, {0b11000, 0, 0}});   // {h0,1} -- {2} -- {3,4}
    const Tree cherry = tree(L4, {{0b00110, 0, 0}, {0b11000, 0, 0}});  // {h0} with {1,2} and {3,4}
    const std::vector<Case> cases = {
        {3, 2, 1, symmetrize(3, {{tree(L3, {}, {{0, 1}}), -6}, {tree(L3, {{0b1100, 0, 0}}), 2}})},
        {4, 3, 1,
         symmetrize(4, {{tree(L4, {}, {{0, 1}}), -18},
                        {tree(L4, {{0b11000, 0, 0}}), 3},
                        {tree(L4, {{0b11100, 0, 0}}), 9}})},
        {4, 2, 1,
         symmetrize(4, {{smooth4, -14}, {head_psi, 14}, {h0_psi_edge, 6}, {chain, -6}, {cherry, -2}})},
        {4, 3, 2,
         symmetrize(4, {{smooth4, -75}, {head_psi, 21}, {h0_psi_edge, 18}, {chain, -9}, {cherry, -3}})},
    };
    for (const auto& c : cases) {
      const Class0 z = z_cycle(c.n, c.i, c.j);
      o.expect(z == c.want, "Z" + params({c.n, c.i, c.j}) + " differs from the display");
      o.expect(is_zero(z), "Z" + params({c.n, c.i, c.j}) + " is not zero");
    }
  });

  // 3. Vanishing of Z and Z^t on the full grid.
  auto vanishing = [](int n_lo, int n_hi) {
    return [=](Outcome& o) {
      int cases = 0;
      for (int n = n_lo; n <= n_hi; ++n)
        for (int i = 1; i <= n - 1; ++i)
          for (int j = 1; j < i; ++j) {
            ++cases;
            o.expect(is_zero(z_cycle(n, i, j)), "Z" + params({n, i, j}) + " not zero");
            o.expect(is_zero(z_truncated(n, i, j)), "Z^t" + params({n, i, j}) + " not zero");
          }
      o.expect(cases > 0, "empty grid");
    };
  };
  criterion(3, "vanishing of Z and Z^t, n = 3..5", kBudget3Small, vanishing(3, 5));
  criterion(3, "vanishing of Z and Z^t, n = 6", kBudget3Six, vanishing(6, 6));

  // 4. Closed form for i = n-1, j = 1, and the divisor identity.
  criterion(4, "closed form of Z(n,n-1,1) and the divisor identity", kBudget4, [](Outcome& o) {
    for (int n = 3; n <= 6; ++n) {
      const Mask legs = range_mask(0, n), ground = range_mask(1, n);
      Class0 closed(legs), divid(legs);
      const mpz_class c2 = binomial(n, 2);
      closed.add(tree(legs, {}, {{0, 1}}), -(n - 1) * c2);
      divid.add(tree(legs, {}, {{0, 1}}), c2);
      for (Mask M = ground; M; M = (M - 1) & ground) {
        const int m = popcount(M);
        if (m < 2 || m > n - 1) continue;
        closed.add(tree(legs, {{M, 0, 0}}), (n - 1) * binomial(m, 2));
        divid.add(tree(legs, {{M, 0, 0}}), -binomial(m, 2));
      }
      o.expect(z_cycle(n, n - 1, 1).terms() == closed.terms(), "termwise mismatch at n=" + std::to_string(n));
      o.expect(is_zero(divid), "divisor identity not certified at n=" + std::to_string(n));
    }
  });

  // 5. Recursions.
  criterion(5, "recursions (all, dect, decrec, collide0, E_I pushforward), n <= 5", kBudget5, [](Outcome& o) {
    for (int n = 3; n <= 5; ++n) {
      for (int i = 1; i <= n - 1; ++i) {
        auto [lo, hi] = j_range(n, i);
        for (int j = lo - 1; j <= hi; ++j) {
          auto r = verify_recursion_all(n, i, j);
          o.expect(r.pass, "recursion" + params({n, i, j}) + ": " + r.witness);
        }
        for (int j = lo; j <= hi; ++j) {
          auto r = verify_dect(n, i, j);
          o.expect(r.pass, "dect" + params({n, i, j}) + ": " + r.witness);
        }
        auto r = verify_decrec(n, i);
        o.expect(r.pass, "decrec" + params({n, i}) + ": " + r.witness);
        for (Mask I = 1; I < (Mask{1} << (n - 1)); ++I) {
          if (popcount(I) > n - 2) continue;
          auto e = verify_ei_pushforward(n, I << 1, i);
          o.expect(e.pass, "E_I" + params({n, static_cast<int>(I << 1), i}) + ": " + e.witness);
        }
      }
      for (int m = 1; m < n; ++m) {
        auto r = verify_collide0(n, m);
        o.expect(r.pass, "collide0" + params({n, m}) + ": " + r.witness);
      }
    }
  });

  // 6. F-class displays with symbolic k.
  criterion(6, "F-class expansions for n = 1, 2, 3", kBudget6, [](Outcome& o) {
    const Mask L1 = range_mask(0, 1), L2 = range_mask(0, 2), L3 = range_mask(0, 3);
    const RtClass f1 = symmetrize_rt(1, {{tree(L1), {{0b10, 1}}, 1}});
    const RtClass f2 = symmetrize_rt(2, {{tree(L2), {{0b010, 1}, {0b100, 1}}, 1},
                                         {tree(L2, {{0b110, 0, 0}}), {{0b110, 1}}, -1}});
    const Tree tail3 = tree(L3, {{0b1110, 0, 0}});
    const Tree tail3_head = tree(L3, {{0b1110, 1, 0}});
    const Tree tail3_tail = tree(L3, {{0b1110, 0, 1}});
    const Tree tail3_both = tree(L3, {{0b1110, 1, 1}});
    const Tree chain = tree(L3, {{0b1110, 0, 0}, {0b0110, 0, 0}});
    const Tree chain_tail = tree(L3, {{0b1110, 0, 1}, {0b0110, 0, 0}});
    const RtClass f3 = symmetrize_rt(3, {
                                            {tree(L3), {{0b0010, 1}, {0b0100, 1}, {0b1000, 1}}, 1},
                                            {tree(L3, {{0b0110, 0, 0}}), {{0b0110, 1}, {0b1000, 1}}, -1},
                                            {tail3, {{0b1110, 2}}, -3},
                                            {tail3_head, {{0b1110, 1}}, -7},
                                            {tail3_tail, {{0b1110, 1}}, -2},
                                            {tail3_both, {}, -6},
                                            {chain, {{0b1110, 1}}, 3},
                                            {chain_tail, {}, 2},
                                        });
    o.expect(f_class(1) == f1, "n=1 differs");
    o.expect(f_class(2) == f2, "n=2 differs");
    o.expect(f_class(3) == f3, "n=3 differs (" + std::to_string(f_class(3).size()) + " terms vs " +
                                   std::to_string(f3.size()) + ")");
  });

  // 7. Heavy point.
  criterion(7, "heavy-point formulas, a <= 6, and phi_*(F^2_{2,(2)}) = 1", kBudget7, [](Outcome& o) {
    const Tree point = tree(range_mask(0, 1));
    const Tree base = one_vertex(bit(0));
    for (int a = 1; a <= 6; ++a) {
      const RtClass F = f_class_m({a});
      // sum_b e_b(1..a-1) (k w - eta)^{a-b} psi^b
      RtClass eb(1);
      for (int b = 0; b < a; ++b) {
        Tree t = point;
        t.leg_exp[1] = static_cast<std::uint8_t>(b);
        eb.add({t, {{0b10, a - b}}}, elementary(b, a - 1));
      }
      o.expect(F == eb, "e_b expansion differs at a=" + std::to_string(a));
      // prod_{b<a} ((k+b) psi - eta), with omega_1 = psi_1
      std::map<std::pair<int, int>, Poly> prod{{{0, 0}, Poly(1)}};  // (psi power, eta power)
      for (int b = 0; b < a; ++b) {
        std::map<std::pair<int, int>, Poly> nx;
        for (const auto& [pe, c] : prod) {
          nx[{pe.first + 1, pe.second}] += c * (Poly::k_power(1) + Poly(b));
          nx[{pe.first, pe.second + 1}] -= c;
        }
        prod = std::move(nx);
      }
      PushedClass want;
      for (const auto& [pe, c] : prod) want.add({point, mono({{kEta, pe.second}, {kPsi1, pe.first}})}, c);
      o.expect(one_leg_polynomial(F) == want, "factored product differs at a=" + std::to_string(a));
      // pi_* : sum_{b>=1} (-1)^{a-b} e_b(k..k+a-1) kappa_{b-1} eta^{a-b}
      const auto e = elementary_in_k(0, a);
      for (int g : {0, 2, 3}) {
        PushedClass pi;
        for (int b = 1; b <= a; ++b) {
          const Poly c = e[static_cast<std::size_t>(b)] * Poly((a - b) % 2 ? -1 : 1);
          if (b == 1 && g)
            pi.add({base, mono({{kEta, a - b}})}, c * Poly(2 * g - 2));
          else
            pi.add({base, mono({{kEta, a - b}, {kappa(b - 1), 1}})}, c);
        }
        const auto got = g ? pushforward_point(F, g) : pushforward_point(F, std::nullopt);
        o.expect(got == pi, "pushforward formula differs at a=" + std::to_string(a) + " g=" + std::to_string(g));
      }
    }
    // k(k+1) kappa_1 - (2k+1)(2g-2) eta
    const Poly k = Poly::k_power(1);
    for (int g = 2; g <= 4; ++g) {
      PushedClass want;
      want.add({base, mono({{kappa(1), 1}})}, k * (k + Poly(1)));
      want.add({base, mono({{kEta, 1}})}, (k + k + Poly(1)) * Poly(-(2 * g - 2)));
      o.expect(pushforward_point(f_class_m({2}), g) == want, "two-fold point formula differs at g=" + std::to_string(g));
    }
    const PushedClass phi = pushforward_phi(f_class_m({2}), 2, 2, 3);
    PushedClass one;
    one.add({point, {}}, Poly(1));
    o.expect(phi == one, "phi_*(F^2_{2,(2)}) != 1");
  });

  // 8. Logan divisor.
  criterion(8, "Logan divisor, g = 2, 3", kBudget8, [](Outcome& o) {
    for (int g = 2; g <= 3; ++g) {
      const Mask legs = range_mask(0, g), ground = range_mask(1, g);
      const Tree smooth = tree(legs);
      PushedClass want;
      for (int i = 1; i <= g; ++i) want.add({smooth, mono({{{Sym::Kind::Omega, bit(i)}, 1}})}, Poly(1));
      want.add({smooth, mono({{{Sym::Kind::Lambda, 1}, 1}})}, Poly(-1));
      for (Mask A = ground; A; A = (A - 1) & ground)
        if (popcount(A) >= 2) want.add({tree(legs, {{A, 0, 0}}), {}}, Poly(mpq_class(-binomial(popcount(A), 2))));
      const PushedClass got = pushforward_phi(f_class(g), 1, g);
      o.expect(got == want, "g=" + std::to_string(g) + ":\n" + pushed_text(got));
    }
  });

  // 9. Recursion for F.
  criterion(9, "F-recursion, n = 2, 3, 4", kBudget9, [](Outcome& o) {
    for (int n = 2; n <= 4; ++n) {
      const auto r = verify_frec(n);
      o.expect(r.pass, "n=" + std::to_string(n) + ": " + r.witness);
    }
  });

  // 10. Colliding on rational tails.
  criterion(10, "colliding on rational tails, sum m <= 5", kBudget10, [](Outcome& o) {
    std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& m, int left) {
      if (!m.empty()) {
        const auto r = verify_colliding_rt(m);
        std::string s;
        for (int x : m) s += std::to_string(x) + " ";
        o.expect(r.pass, "m = " + s + ": " + r.witness);
      }
      for (int a = 1; a <= left; ++a) {
        m.push_back(a);
        rec(m, left - a);
        m.pop_back();
      }
    };
    std::vector<int> m;
    rec(m, 5);
  });

  // 11. Property suites.
  criterion(11, "DP vs brute, dilaton, collide routes, relabel stability", kBudget11, [](Outcome& o) {
    // DP vs brute: rooted (i, m) contexts and plain rational-tails graphs.
    for (int n = 2; n <= 5; ++n) {
      for (const auto& t : enumerate_trees0(n))
        for (const auto& d : enumerate_decorations(t, DecoContext::rooted(1), 3))
          for (int i = 1; i <= n - 1; ++i) {
            const auto ctx = WeightContext::rooted(i);
            o.expect(coeff_dp(d, ctx).coefficient == coeff_brute(d, ctx).coefficient,
                     "rooted DP != brute on " + encode(d));
          }
      for (const auto& t : enumerate_rt_graphs(n))
        for (const auto& d : enumerate_decorations(t, DecoContext::half_edges(true), 3)) {
          const auto ctx = WeightContext::plain();
          o.expect(coeff_dp(d, ctx).coefficient == coeff_brute(d, ctx).coefficient,
                   "plain DP != brute on " + encode(d));
        }
    }
    // Dilaton: pi_*(psi_x pi^* a) = (n-2) a, on every decorated stratum.
    for (int n = 4; n <= 6; ++n) {
      const Mask legs = range_mask(0, n - 1);
      for (const auto& T : enumerate_strata(legs))
        for (const auto& d : enumerate_decorations(T, DecoContext::all_legs(std::vector<int>(n, 1)), n - 4)) {
          Class0 a(legs);
          a.add(d, 1);
          if (a.empty()) continue;
          Class0 want = a;
          want *= n - 2;
          o.expect(pushforward_forget(times_psi(pullback_forget(a, n), n), n) == want, "dilaton fails on " + encode(d));
        }
    }
    // Collide: direct rule vs product with the diagonal stratum.
    for (int n = 4; n <= 6; ++n)
      for (int i = 1; i <= n - 1; ++i) {
        auto [lo, hi] = j_range(n, i);
        for (int j = lo; j <= hi; ++j) {
          const Class0 z = z_cycle(n, i, j);
          const auto r = compare_classes("collide", {n, i, j}, collide(z, 1, 2), collide_via_product(z, 1, 2));
          o.expect(r.pass, "collide routes differ on Z" + params({n, i, j}) + ": " + r.witness);
        }
      }
    // Relabel stability: encodings and Z-cycles commute with permutations.
    std::mt19937 rng(20261019);
    for (int n = 3; n <= 6; ++n) {
      auto perm = identity_labels();
      std::shuffle(perm.begin() + 1, perm.begin() + n + 1, rng);
      for (const auto& t : enumerate_trees0(n)) {
        const Tree r = relabel(t, perm);
        o.expect(shape_key(r, range_mask(1, n)) == shape_key(t, range_mask(1, n)), "shape changes under relabel");
        auto inv = identity_labels();
        for (int l = 0; l < kMaxLabel; ++l) inv[perm[l]] = l;
        o.expect(relabel(r, inv) == t, "relabel is not invertible on " + encode(t));
      }
      if (n <= 5) {
        const Class0 z = z_cycle(n, n - 1, 1);
        o.expect(relabel(z, perm) == z, "Z(n,n-1,1) not symmetric at n=" + std::to_string(n));
      }
    }
  });

  std::cout << (failures ? std::to_string(failures) + " criterion line(s) failed" : "all criteria passed") << std::endl;
  return failures ? 1 : 0;
}
