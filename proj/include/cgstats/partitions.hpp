#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "cgstats/qseries.hpp"

namespace cgstats {

// Type of a finite module over the ring of integers in an unramified degree-d
// extension of Z_p: lambda = (lambda_1 >= ... >= lambda_r >= 1) stands for
// the sum of cyclic pieces of lengths lambda_i.  The same object with d = 1
// is the usual partition type of an abelian p-group.
class PartitionType {
 public:
  PartitionType() = default;

  explicit PartitionType(std::vector<unsigned> parts) : parts_(std::move(parts)) {
    for (size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] == 0) throw std::invalid_argument("partition part must be >= 1");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw std::invalid_argument("partition parts must be weakly decreasing");
    }
  }

  static PartitionType from_unsorted(std::vector<unsigned> parts) {
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return PartitionType(std::move(parts));
  }

  const std::vector<unsigned>& parts() const { return parts_; }
  bool trivial() const { return parts_.empty(); }

  // |lambda|: log_q of the module order.
  unsigned size() const {
    unsigned s = 0;
    for (unsigned p : parts_) s += p;
    return s;
  }

  // number of summands = rank of the module
  unsigned rank() const { return (unsigned)parts_.size(); }

  PartitionType conjugate() const {
    std::vector<unsigned> c;
    if (parts_.empty()) return PartitionType{};
    c.resize(parts_[0]);
    for (unsigned j = 0; j < parts_[0]; ++j) {
      unsigned n = 0;
      while (n < parts_.size() && parts_[n] > j) ++n;
      c[j] = n;
    }
    return PartitionType(std::move(c));
  }

  friend bool operator==(const PartitionType&, const PartitionType&) = default;
  friend auto operator<=>(const PartitionType& a, const PartitionType& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<unsigned> parts_;
};

// |Aut M| for M of type lambda over the residue-size-q local ring:
//   q^{sum_j (lambda'_j)^2} * prod_{distinct part} (q)_{multiplicity}.
// Always an integer.
inline mpz_class aut_order(const PartitionType& lam, unsigned long q) {
  require_q(q);
  const auto conj = lam.conjugate().parts();
  unsigned long e = 0;
  for (unsigned c : conj) e += (unsigned long)c * c;
  mpq_class a(pow_ui(q, e));
  const auto& parts = lam.parts();
  for (size_t i = 0; i < parts.size();) {
    size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    a *= poch_finite(q, j - i);
    i = j;
  }
  a.canonicalize();
  if (a.get_den() != 1) throw std::logic_error("aut_order: non-integral result");
  return a.get_num();
}

namespace detail {

inline void enum_partitions(unsigned remaining, unsigned maxpart,
                            std::vector<unsigned>& cur,
                            std::vector<PartitionType>& out) {
  if (remaining == 0) {
    out.push_back(PartitionType(cur));
    return;
  }
  for (unsigned p = std::min(remaining, maxpart); p >= 1; --p) {
    cur.push_back(p);
    enum_partitions(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

// All types with |lambda| <= max_size, sizes ascending, descending
// lexicographic within one size; optionally only those of a given rank.
inline std::vector<PartitionType> enumerate_types(
    unsigned max_size, std::optional<unsigned> rank = std::nullopt) {
  std::vector<PartitionType> out;
  std::vector<unsigned> cur;
  for (unsigned m = 0; m <= max_size; ++m)
    detail::enum_partitions(m, m, cur, out);
  if (rank) {
    std::erase_if(out, [&](const PartitionType& t) { return t.rank() != *rank; });
  }
  return out;
}

// Elementary divisors of the underlying abelian p-group: each summand of
// length k contributes d copies of p^k.
inline std::vector<mpz_class> underlying_abelian(const PartitionType& lam,
                                                 unsigned d, unsigned long p) {
  std::vector<mpz_class> divs;
  for (unsigned k : lam.parts()) {
    mpz_class v = pow_ui(p, k);
    for (unsigned i = 0; i < d; ++i) divs.push_back(v);
  }
  return divs;
}

inline PartitionType underlying_abelian_type(const PartitionType& lam, unsigned d) {
  std::vector<unsigned> parts;
  for (unsigned k : lam.parts())
    for (unsigned i = 0; i < d; ++i) parts.push_back(k);
  return PartitionType(std::move(parts));
}

// Inverse of underlying_abelian_type: the abelian type must repeat every
// part a multiple of d times, otherwise there is no module structure.
inline std::optional<PartitionType> module_type_from_abelian(
    const PartitionType& abelian, unsigned d) {
  if (d == 0) throw std::invalid_argument("d must be >= 1");
  std::vector<unsigned> parts;
  const auto& ap = abelian.parts();
  for (size_t i = 0; i < ap.size();) {
    size_t j = i;
    while (j < ap.size() && ap[j] == ap[i]) ++j;
    size_t mult = j - i;
    if (mult % d != 0) return std::nullopt;
    for (size_t k = 0; k < mult / d; ++k) parts.push_back(ap[i]);
    i = j;
  }
  return PartitionType(std::move(parts));
}

// ---------------------------------------------------------------------------
// type labels

struct type_parse_error : std::runtime_error {
  enum Kind { Malformed, NonPrimePower, MixedPrimes };
  Kind kind;
  type_parse_error(Kind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
};

struct ParsedType {
  PartitionType abelian;  // type of the underlying abelian p-group
  unsigned long p = 0;    // 0 for the trivial group (any p fits)
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace((unsigned char)s.front())) s.remove_prefix(1);
  while (!s.empty() && std::isspace((unsigned char)s.back())) s.remove_suffix(1);
  return s;
}

inline mpz_class parse_integer(std::string_view s) {
  if (s.empty()) throw type_parse_error(type_parse_error::Malformed, "empty integer");
  for (char c : s)
    if (!std::isdigit((unsigned char)c))
      throw type_parse_error(type_parse_error::Malformed,
                             "bad integer '" + std::string(s) + "'");
  return mpz_class(std::string(s), 10);
}

// n = p^e with p prime, n >= 2; rejects anything else.  For the largest k
// with an exact k-th root, that root is prime iff n is a prime power.
inline std::pair<unsigned long, unsigned> prime_power_split(const mpz_class& n) {
  if (n < 2)
    throw type_parse_error(type_parse_error::Malformed,
                           "elementary divisor must be >= 2");
  unsigned bits = (unsigned)mpz_sizeinbase(n.get_mpz_t(), 2);
  for (unsigned k = bits; k >= 1; --k) {
    mpz_class root, rem;
    mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), k);
    if (rem != 0) continue;
    if (mpz_probab_prime_p(root.get_mpz_t(), 40)) {
      if (!root.fits_ulong_p())
        throw type_parse_error(type_parse_error::NonPrimePower,
                               "prime base too large: " + n.get_str());
      return {root.get_ui(), k};
    }
  }
  throw type_parse_error(type_parse_error::NonPrimePower,
                         "not a prime power: " + n.get_str());
}

}  // namespace detail

// Accepts either an elementary-divisor list "[27,3]" (each entry >= 2) or a
// compact label "27x3", "4^2x2^2", "1".  Divisors must be powers of one
// common prime.
inline ParsedType parse_type(std::string_view text) {
  using detail::trim;
  std::string_view s = trim(text);
  if (s.empty())
    throw type_parse_error(type_parse_error::Malformed, "empty type label");

  std::vector<mpz_class> divisors;
  if (s.front() == '[') {
    if (s.back() != ']')
      throw type_parse_error(type_parse_error::Malformed, "unterminated list");
    std::string_view body = s.substr(1, s.size() - 2);
    if (!trim(body).empty()) {
      while (true) {
        size_t comma = body.find(',');
        std::string_view tok = trim(body.substr(0, comma));
        divisors.push_back(detail::parse_integer(tok));
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
      }
    }
  } else if (s == "1") {
    return {};
  } else {
    std::string_view rest = s;
    while (true) {
      size_t xpos = rest.find('x');
      std::string_view tok = trim(rest.substr(0, xpos));
      size_t caret = tok.find('^');
      mpz_class base;
      unsigned long count = 1;
      if (caret == std::string_view::npos) {
        base = detail::parse_integer(tok);
      } else {
        base = detail::parse_integer(trim(tok.substr(0, caret)));
        mpz_class c = detail::parse_integer(trim(tok.substr(caret + 1)));
        if (c < 1 || !c.fits_ulong_p())
          throw type_parse_error(type_parse_error::Malformed, "bad multiplicity");
        count = c.get_ui();
      }
      for (unsigned long i = 0; i < count; ++i) divisors.push_back(base);
      if (xpos == std::string_view::npos) break;
      rest.remove_prefix(xpos + 1);
    }
  }

  if (divisors.empty()) return {};
  ParsedType out;
  std::vector<unsigned> parts;
  for (const auto& dvr : divisors) {
    auto [p, e] = detail::prime_power_split(dvr);
    if (out.p == 0)
      out.p = p;
    else if (out.p != p)
      throw type_parse_error(type_parse_error::MixedPrimes,
                             "divisors mix primes " + std::to_string(out.p) +
                                 " and " + std::to_string(p));
    parts.push_back(e);
  }
  out.abelian = PartitionType::from_unsorted(std::move(parts));
  return out;
}

// Compact label of the underlying abelian group of a d-module of type lam:
// "27x3", "4^2x2^2", "1".
inline std::string format_type(const PartitionType& lam, unsigned long p,
                               unsigned d = 1) {
  if (lam.trivial()) return "1";
  const auto& parts = lam.parts();
  std::string out;
  for (size_t i = 0; i < parts.size();) {
    size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    unsigned long mult = (unsigned long)(j - i) * d;
    if (!out.empty()) out += 'x';
    out += pow_ui(p, parts[i]).get_str();
    if (mult > 1) out += '^' + std::to_string(mult);
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// rank-aggregated type mass

// S_r(q, u) = sum over all lambda of rank r of 1 / (q^{u|lambda|} |Aut|)
//           = q^{-r(r+u)} (q)_u / ((q)_r (q)_{r+u})   (closed form, exact)
inline mpq_class rank_type_mass(unsigned long q, unsigned u, unsigned r) {
  mpq_class s = poch_finite(q, u) / (poch_finite(q, r) * poch_finite(q, r + u));
  s /= mpq_class(pow_ui(q, (unsigned long)r * (r + u)));
  s.canonicalize();
  return s;
}

// Upper bound on the tail sum_{|lambda| > N, rank r} 1/(q^{u|lambda|}|Aut|).
// Uses |Aut| >= q^{r^2 + m - r} (q)_inf^r >= q^{r^2 + m - r} 4^{-r} for a
// rank-r type of size m, and the count bound #{rank-r types of size m} <=
// (m+1)^{r-1} / (r-1)!  (crudely (m+1)^{r-1} here), then sums a dominating
// geometric series.
inline double rank_type_mass_tail_bound(unsigned long q, unsigned u, unsigned r,
                                        unsigned N) {
  require_q(q);
  if (r == 0) return 0.0;  // the empty type is the only rank-0 type
  if (N < r) N = r;
  long double x = powl((long double)q, -(long double)(u + 1));
  long double ratio = powl((long double)(N + 3) / (N + 2), (long double)(r - 1)) * x;
  if (ratio >= 1.0L)
    throw std::logic_error("rank_type_mass_tail_bound: series not dominated");
  long double first = powl((long double)(N + 2), (long double)(r - 1)) *
                      powl(4.0L, (long double)r) *
                      powl((long double)q, -(long double)(u + 1) * (N + 1)) *
                      powl((long double)q, (long double)r - (long double)r * r);
  long double bound = first / (1.0L - ratio);
  return (double)(bound * 1.0000001L) + 1e-300;
}

}  // namespace cgstats
