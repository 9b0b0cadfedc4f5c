#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>

#include "rtcalc/trees.hpp"

namespace rtcalc {

// Formal Q-linear combination of decorated boundary strata xi_{T*}(psi) on
// the moduli space of stable rational curves with legs `ambient`.
class Class0 {
 public:
  Class0() = default;
  explicit Class0(Mask ambient) : ambient_(ambient) {}

  [[nodiscard]] Mask ambient() const { return ambient_; }
  [[nodiscard]] int dim() const { return popcount(ambient_) - 3; }
  [[nodiscard]] const std::map<Tree, mpq_class>& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  // Terms are normalized on entry; zero coefficients and terms that vanish
  // for dimension reasons (degree > dim or psi overload at a vertex) vanish.
  void add(const Tree& t, const mpq_class& c);
  Class0& operator+=(const Class0& o);
  Class0& operator-=(const Class0& o);
  Class0& operator*=(const mpq_class& c);
  [[nodiscard]] Class0 operator-(const Class0& o) const {
    Class0 r = *this;
    return r -= o;
  }
  [[nodiscard]] Class0 operator+(const Class0& o) const {
    Class0 r = *this;
    return r += o;
  }
  bool operator==(const Class0&) const = default;

  // -1 for the zero class; throws on mixed degrees.
  [[nodiscard]] int degree() const;
  [[nodiscard]] bool homogeneous() const;

 private:
  Mask ambient_ = 0;
  std::map<Tree, mpq_class> terms_;
};

enum class Exec { Serial, Parallel };

[[nodiscard]] Class0 push_tree(const Tree& t);
[[nodiscard]] mpq_class integrate_term(const Tree& t);
[[nodiscard]] mpq_class integrate(const Class0& c);
[[nodiscard]] Class0 product_with_stratum(const Class0& c, const Tree& S);
[[nodiscard]] mpq_class pair_term(const Tree& t, const Tree& S);
[[nodiscard]] mpq_class pair(const Class0& c, const Tree& S);

struct ZeroReport {
  bool zero = true;
  std::optional<Tree> witness;  // a stratum with nonzero pairing
  mpq_class value;              // that pairing
  std::size_t strata_tested = 0;
};
[[nodiscard]] ZeroReport zero_test(const Class0& c, Exec exec = Exec::Parallel);
[[nodiscard]] bool is_zero(const Class0& c, Exec exec = Exec::Parallel);

[[nodiscard]] Class0 pullback_forget(const Class0& c, int new_leg);
[[nodiscard]] Class0 pushforward_forget(const Class0& c, int leg);
[[nodiscard]] Class0 collide(const Class0& c, int i, int j);
[[nodiscard]] Class0 collide_via_product(const Class0& c, int i, int j);
[[nodiscard]] Class0 relabel(const Class0& c, const std::array<int, kMaxLabel>& to);

// gamma: class on legs {h0, 1 (heavy), 2..n-m} -> legs {h0, 1..n}; the coda
// vertex carries I and n, the remaining legs go to {1..n-1} \ I in order.
[[nodiscard]] Class0 glue_push_gamma(const Class0& c, Mask I, int n);
// sigma0: class on {h0, 1..n-1} -> {h0, 1..n}, bridge vertex with h0 and n.
[[nodiscard]] Class0 glue_push_sigma0(const Class0& c);

// Remove leg x from the split structure (no stability repair).
[[nodiscard]] Tree remove_leg(const Tree& t, int x);
// Attach leg x at vertex vi (layout of t).
[[nodiscard]] Tree attach_leg(const Tree& t, int vi, int x);

}  // namespace rtcalc
