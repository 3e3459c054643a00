#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cgstats/qseries.hpp"

namespace cgstats {

// Dense integer polynomial, constant coefficient first, normalized so the
// leading coefficient is nonzero (the zero polynomial is the empty vector).
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  int degree() const { return (int)c_.size() - 1; }  // -1 for the zero polynomial
  bool zero() const { return c_.empty(); }
  const mpz_class& coeff(size_t i) const {
    static const mpz_class z = 0;
    return i < c_.size() ? c_[i] : z;
  }
  const mpz_class& lc() const {
    if (c_.empty()) throw std::domain_error("lc of zero polynomial");
    return c_.back();
  }
  const std::vector<mpz_class>& coeffs() const { return c_; }

  mpz_class operator()(const mpz_class& x) const {
    mpz_class v = 0;
    for (size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
    return v;
  }

  IntPolynomial derivative() const {
    std::vector<mpz_class> d;
    for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * (unsigned long)i);
    return IntPolynomial(std::move(d));
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      mpz_class a = c_[i];
      if (!s.empty()) { s += a < 0 ? " - " : " + "; a = abs(a); }
      else if (a < 0) { s += '-'; a = abs(a); }
      bool unit = a == 1 && i > 0;
      if (!unit) s += a.get_str();
      if (i > 0) {
        if (!unit) s += "*";
        s += "x";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::vector<mpz_class> c_;
};

namespace detail {

inline mpz_class content(const IntPolynomial& f) {
  mpz_class g = 0;
  for (const auto& c : f.coeffs()) g = gcd(g, c);
  return g;
}

// lc(B)^(degA-degB+1) * A mod B, by repeated elimination of the top term
inline IntPolynomial pseudo_rem(const IntPolynomial& A, const IntPolynomial& B) {
  int da = A.degree(), db = B.degree();
  std::vector<mpz_class> r = A.coeffs();
  const mpz_class& lb = B.lc();
  for (int k = da; k >= db; --k) {
    // scale the remainder, then cancel x^k
    mpz_class top = r[k];
    for (auto& c : r) c *= lb;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= top * B.coeff(j);
    r[k] = 0;
  }
  return IntPolynomial(std::move(r));
}

}  // namespace detail

// Resultant by the subresultant polynomial remainder sequence.
inline mpz_class resultant(const IntPolynomial& A0, const IntPolynomial& B0) {
  if (A0.zero() || B0.zero()) return 0;
  if (A0.degree() == 0 && B0.degree() == 0) return 1;

  mpz_class ca = detail::content(A0), cb = detail::content(B0);
  IntPolynomial A = A0, B = B0;
  {
    std::vector<mpz_class> a = A0.coeffs(), b = B0.coeffs();
    for (auto& c : a) c /= ca;
    for (auto& c : b) c /= cb;
    A = IntPolynomial(std::move(a));
    B = IntPolynomial(std::move(b));
  }

  int sign = 1;
  if (A.degree() < B.degree()) {
    if ((A.degree() & 1) && (B.degree() & 1)) sign = -sign;
    std::swap(A, B);
  }
  // content factors: Res(c f, g) = c^{deg g} Res(f, g)
  mpz_class t = pow_z(ca, (unsigned long)B0.degree()) *
                pow_z(cb, (unsigned long)A0.degree());

  mpz_class g = 1, h = 1;
  while (B.degree() > 0) {
    int delta = A.degree() - B.degree();
    if ((A.degree() & 1) && (B.degree() & 1)) sign = -sign;
    IntPolynomial R = detail::pseudo_rem(A, B);
    if (R.zero()) return 0;  // common factor of positive degree
    A = B;
    {
      mpz_class divisor = g * pow_z(h, (unsigned long)delta);
      std::vector<mpz_class> coeffs = R.coeffs();
      for (auto& c : coeffs) {
        mpz_class quo, rem;
        mpz_tdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), c.get_mpz_t(),
                    divisor.get_mpz_t());
        if (rem != 0) throw std::logic_error("resultant: inexact subresultant step");
        c = quo;
      }
      B = IntPolynomial(std::move(coeffs));
    }
    g = A.lc();
    // h = g^delta h^(1-delta), exact
    if (delta >= 1) {
      mpz_class num = pow_z(g, (unsigned long)delta);
      mpz_class den = pow_z(h, (unsigned long)(delta - 1));
      mpz_class quo, rem;
      mpz_tdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      if (rem != 0) throw std::logic_error("resultant: inexact h update");
      h = quo;
    }
    // delta == 0 leaves h unchanged
  }
  if (B.zero()) return 0;
  // final constant remainder: Res = s t lc(B)^{deg A} / h^{deg A - 1}
  mpz_class num = pow_z(B.lc(), (unsigned long)A.degree());
  mpz_class den = pow_z(h, (unsigned long)(A.degree() - 1));
  mpz_class quo, rem;
  mpz_tdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (rem != 0) throw std::logic_error("resultant: inexact final step");
  return sign * t * quo;
}

// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f)
inline mpz_class discriminant(const IntPolynomial& f) {
  int n = f.degree();
  if (n < 1) throw std::invalid_argument("discriminant: degree must be >= 1");
  if (n == 1) return 1;
  mpz_class res = resultant(f, f.derivative());
  mpz_class quo, rem;
  mpz_tdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), res.get_mpz_t(),
              f.lc().get_mpz_t());
  if (rem != 0) throw std::logic_error("discriminant: resultant not divisible by lc");
  if ((n * (n - 1) / 2) % 2) quo = -quo;
  return quo;
}

// Number of distinct real roots via the Sturm sequence (exact rational
// arithmetic; degree <= a few dozen is instant).  Requires f squarefree,
// detected by the sequence terminating at positive degree.
inline int real_root_count(const IntPolynomial& f) {
  if (f.degree() < 1) throw std::invalid_argument("real_root_count: degree must be >= 1");
  using Poly = std::vector<mpq_class>;
  auto deg = [](const Poly& p) { return (int)p.size() - 1; };
  auto from_int = [](const IntPolynomial& g) {
    Poly p;
    for (const auto& c : g.coeffs()) p.emplace_back(c);
    return p;
  };
  // -(p0 mod p1)
  auto neg_rem = [&](Poly a, const Poly& b) {
    while ((int)a.size() - 1 >= deg(b)) {
      mpq_class f0 = a.back() / b.back();
      int shift = (int)a.size() - (int)b.size();
      for (size_t j = 0; j < b.size(); ++j) a[shift + j] -= f0 * b[j];
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.empty()) break;
    }
    for (auto& c : a) c = -c;
    return a;
  };

  std::vector<Poly> seq;
  seq.push_back(from_int(f));
  seq.push_back(from_int(f.derivative()));
  while (!seq.back().empty() && deg(seq.back()) > 0)
    seq.push_back(neg_rem(seq[seq.size() - 2], seq.back()));
  if (seq.back().empty()) {
    seq.pop_back();
    if (deg(seq.back()) > 0)
      throw std::domain_error("real_root_count: polynomial is not squarefree");
  }

  auto signs_at_inf = [&](int dir) {  // dir = +1 or -1
    int changes = 0, prev = 0;
    for (const auto& p : seq) {
      if (p.empty()) continue;
      int s = sgn(p.back());
      if (dir < 0 && deg(p) % 2 == 1) s = -s;
      if (prev != 0 && s != 0 && s != prev) ++changes;
      if (s != 0) prev = s;
    }
    return changes;
  };
  return signs_at_inf(-1) - signs_at_inf(+1);
}

// ---------------------------------------------------------------------------
// quintic family with dihedral Galois action

// X^5 - 2b X^4 - t X^3 + (a t - a(5a^2 - 10ab + 4b^2)) X^2
//     + 2a^2 (5a - 4b)(a - b) X - 4a^3 (a - b)^2,   gcd(a, b) = 1
inline IntPolynomial d5_polynomial(long a, long b, long t) {
  if (std::gcd(a, b) != 1)
    throw std::invalid_argument("d5_polynomial: gcd(a, b) must be 1");
  mpz_class A(a), B(b), T(t);
  std::vector<mpz_class> c(6);
  c[5] = 1;
  c[4] = -2 * B;
  c[3] = -T;
  c[2] = A * T - A * (5 * A * A - 10 * A * B + 4 * B * B);
  c[1] = 2 * A * A * (5 * A - 4 * B) * (A - B);
  c[0] = -4 * A * A * A * (A - B) * (A - B);
  return IntPolynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// asymptotic counts

// Expected number of totally real non-Galois cubic fields with disc in
// [D1, D2]:
//   F(X) = k1 X - k2/(sqrt(3)+1) X^{5/6}
// evaluated as a difference with the linear part cancelled first, which
// keeps the result accurate even at X ~ 1e17.
inline double roberts_expected(double d1, double d2) {
  if (!(d1 >= 0) || !(d2 >= d1))
    throw std::invalid_argument("roberts_expected: need 0 <= D1 <= D2");
  const long double k1 = 0.06932561438172562L;
  const long double k2 = 0.403483636663946799L;
  long double lin = k1 * ((long double)d2 - (long double)d1);
  long double frac = k2 / (sqrtl(3.0L) + 1.0L) *
                     (powl((long double)d2, 5.0L / 6.0L) -
                      powl((long double)d1, 5.0L / 6.0L));
  return (double)(lin - frac);
}

// Leading coefficients of the linear asymptotics for fields with a given
// quadratic (or quartic) resolvent; keys name the situation of the count.
inline const std::vector<std::pair<std::string, double>>& linear_count_registry() {
  static const std::vector<std::pair<std::string, double>> reg = {
      {"q2_sqrt-3", 0.02613532018111},   // cubic fields, resolvent Q(sqrt-3)
      {"q2_sqrt-3_paired", 0.01306766},  // same, fields counted in pairs
      {"q2_sqrt5", 0.001852542},         // cubic fields, resolvent Q(sqrt5)
      {"q2_sqrt-1", 0.008144834},        // cubic fields, resolvent Q(sqrt-1)
      {"q2_mu5", 0.12444267e-5},         // quintic cyclic-resolvent count
  };
  return reg;
}

inline double linear_count_coefficient(const std::string& key) {
  for (const auto& [k, v] : linear_count_registry())
    if (k == key) return v;
  throw std::invalid_argument("unknown linear count key '" + key + "'");
}

inline double linear_count_expected(const std::string& key, double x1, double x2) {
  if (!(x1 >= 0) || !(x2 >= x1))
    throw std::invalid_argument("linear_count_expected: need 0 <= X1 <= X2");
  return linear_count_coefficient(key) * (x2 - x1);
}

// sqrt(X) coefficient of the lower bound for quintic dihedral fields
inline double d5_lower_bound_coefficient(bool totally_real) {
  return totally_real ? 0.01507 : 0.07599;
}

}  // namespace cgstats
