#pragma once

#include <array>
#include <cstdint>
#include <queue>
#include <unordered_set>
#include <vector>

#include "cgstats/approx.hpp"
#include "cgstats/qseries.hpp"

namespace cgstats {

// |Sp_{2g}(F_q)| = q^{g^2} prod_{i=1..g} (q^{2i} - 1)
inline mpz_class sp_order(unsigned g, unsigned long q) {
  require_q(q);
  mpz_class r = pow_ui(q, (unsigned long)g * g);
  r *= rising_product(q * q, 1, g);
  return r;
}

namespace detail {

// sum_{i=0..nmax} (-1)^i q^{i(i+1)} / (|Sp_{2i}(F_q)| q^{2 i k})
inline mpq_class alpha_sum(unsigned nmax, unsigned k, unsigned long q) {
  mpq_class s = 0;
  for (unsigned i = 0; i <= nmax; ++i) {
    mpq_class term(pow_ui(q, (unsigned long)i * (i + 1)),
                   sp_order(i, q) * pow_ui(q, 2UL * i * k));
    if (i % 2) s -= term; else s += term;
  }
  s.canonicalize();
  return s;
}

// variant with exponent i(i-1) instead of i(i+1); kept so tests can show it
// disagrees with the explicit censuses
inline mpq_class alpha_sum_variant(unsigned nmax, unsigned k, unsigned long q) {
  mpq_class s = 0;
  for (unsigned i = 0; i <= nmax; ++i) {
    mpq_class term(pow_ui(q, (unsigned long)i * (i >= 1 ? i - 1 : 0)),
                   sp_order(i, q) * pow_ui(q, 2UL * i * k));
    if (i % 2) s -= term; else s += term;
  }
  s.canonicalize();
  return s;
}

}  // namespace detail

// Fraction of Sp_{2g}(F_q) with a fixed space of dimension exactly r:
//   r = 2k:    alpha = (1/|Sp_2k|) sum_{i=0}^{g-k} (-1)^i q^{i(i+1)}
//                                   / (|Sp_2i| q^{2ik})
//   r = 2k+1:  alpha = (1/(q^{2k+1}|Sp_2k|)) sum_{i=0}^{g-k-1} (-1)^i q^{i(i+1)}
//                                   / (|Sp_2i| q^{2i(k+1)})
inline mpq_class alpha(unsigned g, unsigned r, unsigned long q) {
  require_q(q);
  if (g < 1 || r > 2 * g)
    throw std::invalid_argument("alpha: need g >= 1 and 0 <= r <= 2g");
  unsigned k = r / 2;
  mpq_class a;
  if (r % 2 == 0) {
    a = detail::alpha_sum(g - k, k, q) / mpq_class(sp_order(k, q));
  } else {
    a = detail::alpha_sum(g - k - 1, k + 1, q) /
        mpq_class(sp_order(k, q) * pow_ui(q, 2UL * k + 1));
  }
  a.canonicalize();
  return a;
}

// Same shape with the uncorrected exponent; disagrees with censuses.
inline mpq_class alpha_exponent_variant(unsigned g, unsigned r, unsigned long q) {
  require_q(q);
  if (g < 1 || r > 2 * g)
    throw std::invalid_argument("alpha: need g >= 1 and 0 <= r <= 2g");
  unsigned k = r / 2;
  mpq_class a;
  if (r % 2 == 0) {
    a = detail::alpha_sum_variant(g - k, k, q) / mpq_class(sp_order(k, q));
  } else {
    a = detail::alpha_sum_variant(g - k - 1, k + 1, q) /
        mpq_class(sp_order(k, q) * pow_ui(q, 2UL * k + 1));
  }
  a.canonicalize();
  return a;
}

// g -> infinity limit of alpha(g, r, q):
//   (q)_inf / (q^2)_inf * q^{-r(r+1)/2} / (q)_r
inline ApproxReal alpha_limit(unsigned r, unsigned long q, double tol = 1e-10) {
  require_q(q);
  for (double t = tol / 32; t > 16 * DBL_EPSILON; t /= 8) {
    ApproxReal a = poch_inf(q, t) / poch_inf(q * q, t);
    a = a * (mpq_class(1) / (mpq_class(pow_ui(q, (unsigned long)r * (r + 1) / 2)) *
                             poch_finite(q, r)));
    if (a.err_bound <= tol) return a;
  }
  throw std::domain_error("alpha_limit: tolerance unachievable");
}

// ---------------------------------------------------------------------------
// explicit censuses over small symplectic groups

struct CensusOptions {
  enum Strategy { Auto, FilterAll, GeneratorClosure };
  Strategy strategy = Auto;
};

namespace detail {

// dense n x n matrix over F_q, n <= 4, entries 0..q-1
struct SmallMat {
  unsigned n;
  unsigned long q;
  std::array<uint8_t, 16> a{};

  uint8_t at(unsigned i, unsigned j) const { return a[i * n + j]; }
  void set(unsigned i, unsigned j, unsigned long v) { a[i * n + j] = (uint8_t)(v % q); }

  uint64_t key() const {
    uint64_t k = 0;
    for (unsigned i = n * n; i-- > 0;) k = k * q + a[i];
    return k;
  }
  static SmallMat from_key(uint64_t k, unsigned n, unsigned long q) {
    SmallMat m{n, q, {}};
    for (unsigned i = 0; i < n * n; ++i) { m.a[i] = (uint8_t)(k % q); k /= q; }
    return m;
  }
  static SmallMat identity(unsigned n, unsigned long q) {
    SmallMat m{n, q, {}};
    for (unsigned i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }
  SmallMat mul(const SmallMat& o) const {
    SmallMat r{n, q, {}};
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j) {
        unsigned long s = 0;
        for (unsigned k = 0; k < n; ++k) s += (unsigned long)at(i, k) * o.at(k, j);
        r.a[i * n + j] = (uint8_t)(s % q);
      }
    return r;
  }
};

// standard symplectic form J = [[0, I], [-I, 0]] in block form
inline SmallMat symplectic_form(unsigned g, unsigned long q) {
  SmallMat j{2 * g, q, {}};
  for (unsigned i = 0; i < g; ++i) {
    j.set(i, g + i, 1);
    j.set(g + i, i, q - 1);
  }
  return j;
}

// M^T J M == J
inline bool preserves_form(const SmallMat& m, const SmallMat& j) {
  unsigned n = m.n;
  unsigned long q = m.q;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned l = 0; l < n; ++l) {
      unsigned long s = 0;
      for (unsigned k = 0; k < n; ++k)
        for (unsigned t = 0; t < n; ++t)
          s += (unsigned long)m.at(k, i) * j.at(k, t) % q * m.at(t, l) % q;
      if (s % q != j.at(i, l)) return false;
    }
  return true;
}

// rank of m - I over F_q by Gaussian elimination (q prime)
inline unsigned rank_m_minus_identity(const SmallMat& m) {
  unsigned n = m.n;
  unsigned long q = m.q;
  std::array<std::array<long, 4>, 4> w{};
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      w[i][j] = ((long)m.at(i, j) - (i == j ? 1 : 0) + (long)q) % (long)q;
  unsigned rank = 0;
  for (unsigned col = 0; col < n && rank < n; ++col) {
    unsigned piv = rank;
    while (piv < n && w[piv][col] == 0) ++piv;
    if (piv == n) continue;
    std::swap(w[piv], w[rank]);
    // scale pivot row to 1: multiply by modular inverse
    long inv = 1;
    for (long x = 1; x < (long)q; ++x)
      if (w[rank][col] * x % (long)q == 1) { inv = x; break; }
    for (unsigned j = 0; j < n; ++j) w[rank][j] = w[rank][j] * inv % (long)q;
    for (unsigned i = 0; i < n; ++i) {
      if (i == rank || w[i][col] == 0) continue;
      long f = w[i][col];
      for (unsigned j = 0; j < n; ++j)
        w[i][j] = ((w[i][j] - f * w[rank][j]) % (long)q + (long)q * (long)q) % (long)q;
    }
    ++rank;
  }
  return rank;
}

// transvection x -> x + lambda <x, v> v, as a matrix I + lambda (J v) v^T ...
// realized column-wise so that (T v) = v and T is symplectic
inline SmallMat transvection(const std::vector<uint8_t>& v, unsigned long lambda,
                             const SmallMat& j) {
  unsigned n = j.n;
  unsigned long q = j.q;
  SmallMat t = SmallMat::identity(n, q);
  // <x, v> = x^T J v; column form: T = I + lambda v (J^T ... ) builds from
  // T e_k = e_k + lambda <e_k, v> v
  for (unsigned k = 0; k < n; ++k) {
    unsigned long pair = 0;
    for (unsigned s = 0; s < n; ++s) pair += (unsigned long)j.at(k, s) * v[s] % q;
    pair %= q;
    unsigned long coef = lambda * pair % q;
    for (unsigned i = 0; i < n; ++i)
      t.set(i, k, (t.at(i, k) + coef * v[i]) % q);
  }
  return t;
}

}  // namespace detail

// Census of Sp_{2g}(F_q) by dimension of the fixed space: result[r] is the
// number of elements M with dim ker(M - I) = r.  Strategies:
//   FilterAll        enumerate all 2g x 2g matrices, keep the symplectic ones
//   GeneratorClosure breadth-first closure of the symplectic transvections
// Every matrix counted is checked to preserve the form.
inline std::vector<unsigned long long> eigenspace_census(unsigned g,
                                                         unsigned long q,
                                                         CensusOptions opt = {}) {
  require_q(q);
  if (g < 1 || g > 2) throw std::invalid_argument("census: g must be 1 or 2");
  if (q > 3) throw std::invalid_argument("census: q must be 2 or 3");
  unsigned n = 2 * g;
  detail::SmallMat j = detail::symplectic_form(g, q);
  std::vector<unsigned long long> counts(n + 1, 0);

  double total = std::pow((double)q, (double)n * n);
  auto strat = opt.strategy;
  if (strat == CensusOptions::Auto)
    strat = total <= (double)(1 << 20) ? CensusOptions::FilterAll
                                       : CensusOptions::GeneratorClosure;

  if (strat == CensusOptions::FilterAll) {
    uint64_t span = 1;
    for (unsigned i = 0; i < n * n; ++i) span *= q;
    for (uint64_t key = 0; key < span; ++key) {
      detail::SmallMat m = detail::SmallMat::from_key(key, n, q);
      if (!detail::preserves_form(m, j)) continue;
      counts[n - detail::rank_m_minus_identity(m)]++;
    }
  } else {
    // generators: all transvections
    std::vector<detail::SmallMat> gens;
    std::vector<uint8_t> v(n, 0);
    uint64_t vspan = 1;
    for (unsigned i = 0; i < n; ++i) vspan *= q;
    for (uint64_t vk = 1; vk < vspan; ++vk) {
      uint64_t t = vk;
      for (unsigned i = 0; i < n; ++i) { v[i] = (uint8_t)(t % q); t /= q; }
      for (unsigned long lam = 1; lam < q; ++lam)
        gens.push_back(detail::transvection(v, lam, j));
    }
    for (const auto& gmat : gens)
      if (!detail::preserves_form(gmat, j))
        throw std::logic_error("census: generator does not preserve the form");

    std::unordered_set<uint64_t> seen;
    std::queue<detail::SmallMat> work;
    auto id = detail::SmallMat::identity(n, q);
    seen.insert(id.key());
    work.push(id);
    while (!work.empty()) {
      detail::SmallMat m = work.front();
      work.pop();
      if (!detail::preserves_form(m, j))
        throw std::logic_error("census: closure produced a non-symplectic matrix");
      counts[n - detail::rank_m_minus_identity(m)]++;
      for (const auto& gen : gens) {
        detail::SmallMat next = m.mul(gen);
        if (seen.insert(next.key()).second) {
          if (seen.size() > 2000000)
            throw std::logic_error("census: closure exceeded size guard");
          work.push(next);
        }
      }
    }
  }
  return counts;
}

}  // namespace cgstats
