#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <vector>

#include "rtcalc/trees.hpp"

namespace rtcalc {

// Which weighting set is meant.  Plain: rational-tails graphs (label 0 is the
// genus vertex, no chain there).  IRooted / ICoda: rooted rational trees,
// label 0 is h0 with w(h0,0) = i.
struct WeightContext {
  enum class Kind { Plain, IRooted, ICoda };
  Kind kind = Kind::Plain;
  int i = 0;
  std::array<int, kMaxLabel> weight = unit_weights();
  int coda_leg = 0;
  Mask coda_set = 0;
  bool truncated = false;  // extra cap w(iota(h-),0) <= i at a trivalent root

  [[nodiscard]] static WeightContext plain(const std::vector<int>& mult = {});
  [[nodiscard]] static WeightContext rooted(int i, int m = 1, bool truncated = false);
  [[nodiscard]] static WeightContext coda(int i, Mask I, int n);
};

struct HIndex {
  enum class Kind : std::uint8_t { H0, Head, Tail, Leg };
  Kind kind;
  int id;  // edge index or leg label
  int e;   // echelon
  auto operator<=>(const HIndex&) const = default;
};

struct Weighting {
  std::vector<std::pair<HIndex, int>> values;
  [[nodiscard]] mpz_class product() const;
};

struct CoeffReport {
  mpq_class coefficient;
  mpz_class weighting_count;
  enum class Method { Brute, DP } method;
};

// The index set H(T,psi), in a fixed order.
[[nodiscard]] std::vector<HIndex> index_set(const Tree& t, const WeightContext& ctx);

// Membership in the decorated codas DC_I for leg n.
[[nodiscard]] bool is_coda(const Tree& t, Mask I, int n);

[[nodiscard]] std::vector<Weighting> enumerate_weightings(const Tree& t, const WeightContext& ctx,
                                                          bool allow_zero = false);

[[nodiscard]] CoeffReport coeff_brute(const Tree& t, const WeightContext& ctx);
[[nodiscard]] CoeffReport coeff_dp(const Tree& t, const WeightContext& ctx);

// Convenience wrappers (DP).
[[nodiscard]] mpz_class coeff_c(const Tree& t, const std::vector<int>& mult = {});
[[nodiscard]] mpz_class coeff_c_im(const Tree& t, int i, int m, bool truncated = false);
[[nodiscard]] mpq_class coeff_d(const Tree& t, int i, Mask I, int n);

// Complete homogeneous / elementary symmetric polynomials in 1..a.
[[nodiscard]] const mpz_class& h_sym(int p, int a);
[[nodiscard]] const mpz_class& e_sym(int q, int a);

}  // namespace rtcalc
