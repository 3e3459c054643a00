#pragma once

#include <stdexcept>

#include <gmpxx.h>

#include "cgstats/approx.hpp"

namespace cgstats {

inline void require_q(unsigned long q) {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
}

inline mpz_class pow_ui(unsigned long base, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

inline mpz_class pow_z(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// (q)_k = prod_{i=1..k} (1 - q^-i), exact.  (q)_0 = 1.
inline mpq_class poch_finite(unsigned long q, unsigned long k) {
  require_q(q);
  mpz_class num = 1, qi = 1;
  for (unsigned long i = 1; i <= k; ++i) {
    qi *= q;
    num *= qi - 1;
  }
  // denominator q^(1+2+...+k)
  mpq_class r(num, pow_z(mpz_class(q), k * (k + 1) / 2));
  r.canonicalize();
  return r;
}

// (q)_inf = prod_{i>=1} (1 - q^-i) with a rigorous error bound below tol.
//
// Truncating after N factors drops prod_{i>N} (1 - q^-i); since
// |log prod| <= sum_{i>N} 2 q^-i = 2 q^-N / (q-1) =: B(N), the partial
// product overshoots the limit by at most a factor e^B, i.e. by at most B
// in absolute terms (partial products are <= 1).  We pick the smallest N
// with B(N) < tol/2.
inline ApproxReal poch_inf(unsigned long q, double tol = 1e-12) {
  require_q(q);
  if (!(tol > 64 * DBL_EPSILON))
    throw std::invalid_argument("poch_inf: tolerance below double precision");
  unsigned long n = 1;
  double bound = 2.0 / ((double)q * (double)(q - 1));
  while (bound >= tol / 2) {
    ++n;
    bound /= (double)q;
    if (n > 4096) throw std::logic_error("poch_inf: truncation runaway");
  }
  ApproxReal partial = approx_from(poch_finite(q, n));
  return {partial.value, partial.err_bound + bound};
}

// prod_{i=a..b} (q^i - 1); empty product (b < a) is 1.
inline mpz_class rising_product(unsigned long q, unsigned long a, unsigned long b) {
  require_q(q);
  mpz_class r = 1;
  if (b < a) return r;
  mpz_class qi = pow_ui(q, a);
  for (unsigned long i = a; i <= b; ++i) {
    r *= qi - 1;
    qi *= q;
  }
  return r;
}

}  // namespace cgstats
