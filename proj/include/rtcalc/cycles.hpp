#pragma once

#include <map>
#include <string>
#include <vector>

#include "rtcalc/strata0.hpp"

namespace rtcalc {

// Dec_n^{i,m}(D) as a map |H(T,psi)| -> coefficient class of D^{-|H|}.
struct DecPolynomial {
  int n = 0, i = 0, m = 1;
  std::map<int, Class0> coeff;
  [[nodiscard]] Class0 at(int power) const;  // coefficient of D^{power}
};

struct VerificationReport {
  std::string id;
  std::vector<int> params;
  bool pass = false;
  std::string witness;  // failing stratum / profile when !pass
  std::string note;     // how equality was established
  double seconds = 0;
};

[[nodiscard]] DecPolynomial dec_polynomial(int n, int i, int m = 1);
// Z^m(n,i,j): degree n+m-2+j-i on the space with legs {h0, 1..n}.
[[nodiscard]] Class0 z_cycle(int n, int i, int j, int m = 1);
[[nodiscard]] Class0 z_truncated(int n, int i, int j);
// E_I(i,j): degree n-1+j-i, summed over the decorated codas for I.
[[nodiscard]] Class0 e_cycle(int n, Mask I, int i, int j);

// psi_leg * class (leg psi classes pull back to the leg on every stratum).
[[nodiscard]] Class0 times_psi(const Class0& c, int leg);
// Closed form -(n-1) C(n,2) psi_h0 + (n-1) sum_M C(|M|,2) delta_M.
[[nodiscard]] Class0 closed_form_max(int n);
// C(n,2) psi_h0 - sum_M C(|M|,2) delta_M.
[[nodiscard]] Class0 divisor_identity(int n);

// Degree window of Z(n,i,j): the j for which 0 <= n-1+j-i <= n-2.
[[nodiscard]] std::pair<int, int> j_range(int n, int i);

[[nodiscard]] std::vector<VerificationReport> verify_vanishing(int n_max, int n_min = 3);
[[nodiscard]] VerificationReport verify_recursion_a(int n, int i, int j);
[[nodiscard]] VerificationReport verify_recursion_all(int n, int i, int j);
[[nodiscard]] VerificationReport verify_dect(int n, int i, int j);
[[nodiscard]] VerificationReport verify_decrec(int n, int i);
[[nodiscard]] VerificationReport verify_collide0(int n, int m_target);
[[nodiscard]] VerificationReport verify_ei_pushforward(int n, Mask I, int i);
[[nodiscard]] VerificationReport verify_closed_forms(int n);

// Equality oracle: termwise canonical first, pairing zero test otherwise.
[[nodiscard]] VerificationReport compare_classes(const std::string& id, std::vector<int> params,
                                                 const Class0& lhs, const Class0& rhs);

}  // namespace rtcalc
