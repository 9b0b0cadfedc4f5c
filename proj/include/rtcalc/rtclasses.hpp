#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtcalc/cycles.hpp"
#include "rtcalc/strata0.hpp"

namespace rtcalc {

// Polynomial in the symbol k with rational coefficients.
class Poly {
 public:
  Poly() = default;
  Poly(const mpq_class& c) { add(0, c); }  // NOLINT: constants convert implicitly
  [[nodiscard]] static Poly k_power(int e, const mpq_class& c = 1);

  void add(int e, const mpq_class& c);
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  [[nodiscard]] Poly operator*(const Poly& o) const;
  [[nodiscard]] Poly operator+(const Poly& o) const { return Poly(*this) += o; }
  [[nodiscard]] Poly operator-(const Poly& o) const { return Poly(*this) -= o; }
  bool operator==(const Poly&) const = default;

  [[nodiscard]] bool zero() const { return c_.empty(); }
  [[nodiscard]] mpq_class eval(const mpq_class& k) const;
  [[nodiscard]] const std::map<int, mpq_class>& coeffs() const { return c_; }
  [[nodiscard]] std::string str() const;

 private:
  std::map<int, mpq_class> c_;
};

// A rational-tails term: the graph (label 0 = genus vertex) carries every psi
// -- rational ones and the formal psi's at the genus vertex (root legs, tail
// halves of root edges).  `fact` lists the factors (k omega_s - eta)^e, one
// per root slot s, named by the legs behind the slot: {l} for a root leg,
// the tail's leg set for a root edge.
struct RtKey {
  Tree graph;
  std::vector<std::pair<Mask, int>> fact;  // sorted, exponents != 0
  auto operator<=>(const RtKey&) const = default;
};

class RtClass {
 public:
  RtClass() = default;
  explicit RtClass(int n) : n_(n) {}

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] const std::map<RtKey, mpq_class>& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  void add(RtKey key, const mpq_class& c);
  RtClass& operator+=(const RtClass& o);
  RtClass& operator-=(const RtClass& o);
  RtClass& operator*=(const mpq_class& c);
  [[nodiscard]] RtClass operator-(const RtClass& o) const { return RtClass(*this) -= o; }
  bool operator==(const RtClass&) const = default;

 private:
  int n_ = 0;
  std::map<RtKey, mpq_class> terms_;
};

// Total degree |E| + deg psi + sum of factor exponents.
[[nodiscard]] int degree(const RtKey& key);
// The root slot that leg l sits behind: {l} at the root, else the tail's set.
[[nodiscard]] Mask root_slot(const Tree& graph, int leg);

// F^k_{g,m} with symbolic k.  Terms whose factor exponent on some root slot
// would be negative are dropped (they cancel tail by tail); `dropped`, when
// given, collects them with their negative exponents; `slack` widens the
// decoration cap so that profiles with deg beta up to sum(m) + slack appear.
[[nodiscard]] RtClass f_class_m(const std::vector<int>& mult, RtClass* dropped = nullptr,
                                int slack = 0);
[[nodiscard]] RtClass f_class(int n);
// gamma_* F_{(|I|, 1, ..., 1)}: coda vertex with legs I and n.
[[nodiscard]] RtClass e_class(int n, Mask I);

[[nodiscard]] RtClass pullback_forget_rt(const RtClass& c, int new_leg);
// Multiply by k omega_x - eta, with omega_x read on the slot of leg x.
[[nodiscard]] RtClass multiply_divisor(const RtClass& c, int leg);
// Collide leg j into leg i, then close the gap in the labels above j.
[[nodiscard]] RtClass collide_rt(const RtClass& c, int i, int j);

// Equality check: termwise, else per root profile.  A profile fixes the
// genus-vertex data (root legs, root-edge sides, their psi, the factors);
// what remains is a tuple of genus-0 classes, one per tail, tested by pairing
// against tuples of strata.
[[nodiscard]] VerificationReport compare_rt(const std::string& id, std::vector<int> params,
                                            const RtClass& lhs, const RtClass& rhs);
// Profile zero test alone; the witness names the first failing profile.
[[nodiscard]] VerificationReport profile_zero_test(const RtClass& c);

[[nodiscard]] RtClass frec_lhs(int n);
[[nodiscard]] VerificationReport verify_frec(int n);
[[nodiscard]] VerificationReport verify_colliding_rt(const std::vector<int>& mult);
// The dropped (negative exponent) part of F_m vanishes profile by profile.
[[nodiscard]] VerificationReport verify_dropped_vanish(const std::vector<int>& mult, int slack = 2);

// ---- eta expansion and pushforwards ----

// Base-space symbols.  Omega is named by a root slot mask; Psi by a leg.
struct Sym {
  enum class Kind : std::uint8_t { Eta, Omega, Psi, Lambda, Kappa } kind;
  Mask idx;
  auto operator<=>(const Sym&) const = default;
};
using Mono = std::vector<std::pair<Sym, int>>;  // sorted, exponents > 0

struct PushKey {
  Tree graph;  // boundary graph with its psi decorations
  Mono mono;
  auto operator<=>(const PushKey&) const = default;
};

class PushedClass {
 public:
  void add(PushKey key, const Poly& c);
  PushedClass& operator+=(const PushedClass& o);
  PushedClass& operator-=(const PushedClass& o);
  bool operator==(const PushedClass&) const = default;
  [[nodiscard]] const std::map<PushKey, Poly>& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  // Substitute a numeric k.
  [[nodiscard]] PushedClass at_k(const mpq_class& k) const;

 private:
  std::map<PushKey, Poly> terms_;
};

[[nodiscard]] Mono mono_mul(const Mono& a, const Mono& b);
[[nodiscard]] int mono_power(const Mono& m, Sym s);

// Expand every factor (k omega_s - eta)^e into monomials.
[[nodiscard]] PushedClass expand_eta(const RtClass& c);

// phi: PE^k -> moduli of curves.  (-eta)^r = -sum_{i>=1} lambda_i (-eta)^{r-i},
// then phi_*((-eta)^{r-1}) = 1 and lower powers push to 0.  rank defaults
// to g for k = 1; other k need rank_override.
[[nodiscard]] PushedClass pushforward_phi(const RtClass& c, int k, int g,
                                          std::optional<int> rank_override = std::nullopt);
// Forget the single marked point: omega_1 = psi_1, pi_*(psi^{b+1}) = kappa_b.
// kappa_0 becomes 2g-2 when g is given.
[[nodiscard]] PushedClass pushforward_point(const RtClass& c, std::optional<int> g);

// Independent closed forms.
[[nodiscard]] PushedClass heavy_point_product(int a);          // prod (k+b)psi - eta
[[nodiscard]] PushedClass heavy_point_kappa(int a, std::optional<int> g);  // sum (-1)^{a-b} e_b(k..k+a-1) kappa_{b-1} eta^{a-b}
[[nodiscard]] RtClass heavy_point_eb(int a);  // sum e_b(1..a-1)(k w - eta)^{a-b} psi^b
[[nodiscard]] PushedClass logan_expected(int g);
// omega_1 = psi_1 on a one-leg class, as a polynomial in psi_1 and eta.
[[nodiscard]] PushedClass one_leg_polynomial(const RtClass& c);

// F^1_{g,n} expanded in eta (requires n > 2g-2).
[[nodiscard]] PushedClass emit_relation(int g, int n);

}  // namespace rtcalc
