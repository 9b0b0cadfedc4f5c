#include "rtcalc/cycles.hpp"

#include <chrono>
#include <mutex>
#include <tuple>

#include "rtcalc/rational.hpp"
#include "rtcalc/weights.hpp"

namespace rtcalc {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int sign_of(int k) { return k % 2 ? -1 : 1; }

Class0 build_z(int n, int i, int j, int m, bool truncated) {
  Class0 out(range_mask(0, n));
  const int D = n + m - 2 + j - i;
  if (D < 0 || D > n - 2 || i < 1) return out;
  const auto ctx = DecoContext::rooted(m);
  for (const auto& T : enumerate_trees0(n)) {
    const int k = D - T.n_edges();
    if (k < 0) continue;
    for (const auto& t : enumerate_decorations(T, ctx, k, true)) {
      const mpz_class c = coeff_c_im(t, i, m, truncated);
      if (c != 0) out.add(t, sign_of(1 + t.n_edges()) * mpq_class(c));
    }
  }
  return out;
}

// Cycles are rebuilt many times by the verification grids.
const Class0& cached(int n, int i, int j, int m, bool truncated) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int, bool>, Class0> cache;
  const auto key = std::make_tuple(n, i, j, m, truncated);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Class0 c = build_z(n, i, j, m, truncated);
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(c)).first->second;
}

std::vector<Mask> nonempty_subsets(Mask ground) {
  std::vector<Mask> out;
  for (Mask s = ground; s; s = (s - 1) & ground) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

VerificationReport merge(const std::string& id, std::vector<int> params,
                         const std::vector<VerificationReport>& parts, Clock::time_point t0) {
  VerificationReport r{id, std::move(params), true, "", "", 0};
  int termwise = 0;
  for (const auto& p : parts) {
    if (p.note == "termwise") ++termwise;
    if (!p.pass && r.pass) {
      r.pass = false;
      std::string ps;
      for (int x : p.params) ps += (ps.empty() ? "" : ",") + std::to_string(x);
      r.witness = "(" + ps + ") " + p.witness;
    }
  }
  r.note = std::to_string(parts.size()) + " cases, " + std::to_string(termwise) + " termwise";
  r.seconds = since(t0);
  return r;
}

}  // namespace

Class0 DecPolynomial::at(int power) const {
  auto it = coeff.find(-power);
  return it == coeff.end() ? Class0(range_mask(0, n)) : it->second;
}

DecPolynomial dec_polynomial(int n, int i, int m) {
  DecPolynomial P{n, i, m, {}};
  // |H| = 1 + degree; Z^m(n,i,j) sits at |H| = n+m-1+j-i.
  for (int D = 0; D <= n - 2; ++D) {
    const Class0 z = z_cycle(n, i, D - n - m + 2 + i, m);
    if (!z.empty()) P.coeff.emplace(D + 1, z);
  }
  return P;
}

Class0 z_cycle(int n, int i, int j, int m) { return cached(n, i, j, m, false); }
Class0 z_truncated(int n, int i, int j) { return cached(n, i, j, 1, true); }

Class0 e_cycle(int n, Mask I, int i, int j) {
  if (I == 0 || (I & ~range_mask(1, n - 1))) throw invalid_argument("e_cycle: bad I");
  Class0 out(range_mask(0, n));
  const int D = n - 1 + j - i;
  if (D < 0 || D > n - 2 || i < 1) return out;
  const auto ctx = DecoContext::rooted(1);
  for (const auto& T : enumerate_trees0(n)) {
    const int k = D - T.n_edges();
    if (k < 0) continue;
    for (const auto& t : enumerate_decorations(T, ctx, k, true)) {
      if (!is_coda(t, I, n)) continue;
      const mpq_class d = coeff_d(t, i, I, n);
      if (d != 0) out.add(t, sign_of(t.n_edges()) * d);
    }
  }
  return out;
}

Class0 times_psi(const Class0& c, int leg) {
  Class0 out(c.ambient());
  for (const auto& [t, x] : c.terms()) {
    Tree r = t;
    ++r.leg_exp[leg];
    out.add(r, x);
  }
  return out;
}

Class0 closed_form_max(int n) {
  Class0 out(range_mask(0, n));
  Tree psi = one_vertex(range_mask(0, n));
  psi.leg_exp[0] = 1;
  out.add(psi, -(n - 1) * mpq_class(binomial(n, 2)));
  for (Mask M : nonempty_subsets(range_mask(1, n))) {
    const int s = popcount(M);
    if (s < 2 || s > n - 1) continue;
    Tree d = one_vertex(range_mask(0, n));
    d.edges.push_back({M, 0, 0});
    out.add(d, (n - 1) * mpq_class(binomial(s, 2)));
  }
  return out;
}

Class0 divisor_identity(int n) {
  Class0 c = closed_form_max(n);
  c *= frac(-1, n - 1);
  return c;
}

std::pair<int, int> j_range(int n, int i) { return {i - n + 1, i - 1}; }

VerificationReport compare_classes(const std::string& id, std::vector<int> params, const Class0& lhs,
                                   const Class0& rhs) {
  const auto t0 = Clock::now();
  VerificationReport r{id, std::move(params), true, "", "termwise", 0};
  if (!(lhs.terms() == rhs.terms())) {
    const Class0 diff = lhs - rhs;
    if (!diff.homogeneous()) {
      r.pass = false;
      r.witness = "inhomogeneous difference";
    } else {
      const ZeroReport z = zero_test(diff);
      r.note = "pairing against " + std::to_string(z.strata_tested) + " strata";
      if (!z.zero) {
        r.pass = false;
        r.witness = "stratum " + encode(*z.witness) + " pairs to " + z.value.get_str();
      }
    }
  }
  r.seconds = since(t0);
  return r;
}

std::vector<VerificationReport> verify_vanishing(int n_max, int n_min) {
  std::vector<VerificationReport> out;
  for (int n = std::max(3, n_min); n <= n_max; ++n)
    for (int i = 1; i <= n - 1; ++i)
      for (int j = 1; j < i; ++j)
        for (bool trunc : {false, true}) {
          const auto t0 = Clock::now();
          const Class0& z = trunc ? z_truncated(n, i, j) : z_cycle(n, i, j);
          const ZeroReport rep = zero_test(z);
          VerificationReport r{trunc ? "vanishing-truncated" : "vanishing", {n, i, j}, rep.zero,
                               "", std::to_string(z.size()) + " terms", since(t0)};
          if (!rep.zero) r.witness = "stratum " + encode(*rep.witness) + " pairs to " + rep.value.get_str();
          out.push_back(std::move(r));
        }
  return out;
}

VerificationReport verify_recursion_all(int n, int i, int j) {
  if (n < 3 || i < 1) throw invalid_argument("verify_recursion: n >= 3, i >= 1");
  Class0 lhs = pullback_forget(z_cycle(n - 1, i, j + 1), n);
  for (Mask I : nonempty_subsets(range_mask(1, n - 1))) {
    Class0 e = e_cycle(n, I, i, j);
    e *= popcount(I);
    lhs -= e;
  }
  return compare_classes("recursion", {n, i, j}, lhs, z_truncated(n, i, j));
}

VerificationReport verify_recursion_a(int n, int i, int j) {
  if (i > n - 2) throw invalid_argument("verify_recursion_a: i <= n-2 required");
  auto r = verify_recursion_all(n, i, j);
  r.id = "recursion-a";
  return r;
}

namespace {

Class0 sigma0_correction(int n, int i, int j) {
  Class0 s(range_mask(0, n));
  for (int ip = i + 1; ip <= n - 2; ++ip) {
    Class0 g = glue_push_sigma0(z_cycle(n - 1, ip, j - i + ip));
    g *= i;
    s += g;
  }
  return s;
}

}  // namespace

VerificationReport verify_dect(int n, int i, int j) {
  if (n < 3 || i < 1) throw invalid_argument("verify_dect: n >= 3, i >= 1");
  return compare_classes("dect", {n, i, j}, z_cycle(n, i, j),
                         z_truncated(n, i, j) - sigma0_correction(n, i, j));
}

VerificationReport verify_decrec(int n, int i) {
  if (n < 3 || i < 1) throw invalid_argument("verify_decrec: n >= 3, i >= 1");
  const auto t0 = Clock::now();
  std::vector<VerificationReport> parts;
  // One D-coefficient per degree; the sigma0 term is aligned with the
  // coefficient-level statement (see README, "D-exponent alignment").
  auto [jlo, jhi] = j_range(n, i);
  for (int j = jlo - 1; j <= jhi + 1; ++j) {
    Class0 lhs = pullback_forget(z_cycle(n - 1, i, j + 1), n);
    for (Mask I : nonempty_subsets(range_mask(1, n - 1))) {
      Class0 e = e_cycle(n, I, i, j);
      e *= popcount(I);
      lhs -= e;
    }
    lhs -= sigma0_correction(n, i, j);
    parts.push_back(compare_classes("decrec", {n, i, j}, lhs, z_cycle(n, i, j)));
  }
  return merge("decrec", {n, i}, parts, t0);
}

VerificationReport verify_collide0(int n, int mt) {
  if (mt < 1 || mt >= n) throw invalid_argument("verify_collide0: 1 <= m < n");
  const auto t0 = Clock::now();
  std::vector<VerificationReport> parts;
  auto shift = identity_labels();
  for (int l = 3; l < kMaxLabel; ++l) shift[l] = l - 1;
  for (int i = 1; i <= n - 1; ++i) {
    auto [jlo, jhi] = j_range(n, i);
    for (int j = jlo; j <= jhi; ++j) {
      Class0 c = z_cycle(n, i, j);
      for (int s = 1; s < mt; ++s) c = relabel(collide(c, 1, 2), shift);
      if (c.empty()) c = Class0(range_mask(0, n - mt + 1));
      parts.push_back(compare_classes("collide0", {n, mt, i, j}, c, z_cycle(n - mt + 1, i, j, mt)));
    }
  }
  return merge("collide0", {n, mt}, parts, t0);
}

VerificationReport verify_ei_pushforward(int n, Mask I, int i) {
  const int m = popcount(I);
  if (m < 1 || m > n - 2 || (I & ~range_mask(1, n - 1)))
    throw invalid_argument("verify_ei_pushforward: need nonempty I with |I| <= n-2");
  const auto t0 = Clock::now();
  std::vector<VerificationReport> parts;
  auto [jlo, jhi] = j_range(n, i);
  for (int j = jlo; j <= jhi; ++j)
    parts.push_back(compare_classes("ei-pushforward", {n, static_cast<int>(I), i, j},
                                    e_cycle(n, I, i, j),
                                    glue_push_gamma(z_cycle(n - m, i, j, m), I, n)));
  return merge("ei-pushforward", {n, static_cast<int>(I), i}, parts, t0);
}

VerificationReport verify_closed_forms(int n) {
  if (n < 3) throw invalid_argument("verify_closed_forms: n >= 3");
  const auto t0 = Clock::now();
  std::vector<VerificationReport> parts;
  const Class0 z = z_cycle(n, n - 1, 1);
  VerificationReport exact{"closed-form", {n}, z.terms() == closed_form_max(n).terms(), "",
                           "termwise", 0};
  if (!exact.pass) exact.witness = "Z(n,n-1,1) differs from the closed form termwise";
  parts.push_back(exact);
  const Class0 empty(range_mask(0, n));
  parts.push_back(compare_classes("divisor-identity", {n}, divisor_identity(n), empty));
  parts.push_back(compare_classes("z-max-vanishes", {n}, z, empty));
  for (int j = 2; j <= n - 2; ++j) {
    Class0 rhs = z_cycle(n, n - 2, j - 1);
    rhs *= frac(n - 1, n - 2);
    Class0 p = times_psi(z_cycle(n, n - 1, j - 1), 0);
    p *= n - 1;
    rhs += p;
    parts.push_back(compare_classes("max-recursion", {n, j}, z_cycle(n, n - 1, j), rhs));
  }
  return merge("closed-forms", {n}, parts, t0);
}

}  // namespace rtcalc
