#pragma once

#include <gmpxx.h>

#include <string>

namespace rtcalc {

// mpq_class(num, den) does not reduce; every two-argument rational goes
// through here so that equality stays structural.
[[nodiscard]] inline mpq_class frac(const mpz_class& num, const mpz_class& den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

[[nodiscard]] inline mpz_class binomial(long n, long k) {
  if (k < 0 || n < k || n < 0) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// "p/q", or "p" for integers.
[[nodiscard]] inline std::string to_string(const mpq_class& q) { return q.get_str(); }

}  // namespace rtcalc
