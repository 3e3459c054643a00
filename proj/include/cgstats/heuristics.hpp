#pragma once

#include <string>

#include "cgstats/approx.hpp"
#include "cgstats/partitions.hpp"
#include "cgstats/qseries.hpp"
#include "cgstats/situations.hpp"
#include "cgstats/table.hpp"

namespace cgstats {

// Parameters every prediction formula depends on: residue size q, the unit
// parameter u of the base field, and the coefficient-ring degree d (so the
// underlying abelian p-group of a rank-r module has p-rank d*r).
struct PredictionParams {
  unsigned long q;
  unsigned u;
  unsigned d;
};

inline PredictionParams params_of(const Situation& s) { return {s.q, s.u, s.d}; }

inline void validate(const PredictionParams& pp) {
  require_q(pp.q);
  if (pp.d < 1) throw std::invalid_argument("d must be >= 1");
}

enum class Predictor { Modified, ClassicalCL };

inline Predictor parse_predictor(const std::string& s) {
  if (s == "modified") return Predictor::Modified;
  if (s == "cl") return Predictor::ClassicalCL;
  throw std::invalid_argument("unknown predictor '" + s + "'");
}

// ---------------------------------------------------------------------------
// normalization constant of the modified distribution
//
// The unnormalized weight of a type lambda of rank r is
//   w(lambda) = d^r * prod_{i=u+1..r+u} (q^i - 1) / q^{r(u+1)}
//               / (q^{u|lambda|} |Aut lambda|),
// and c = 1 / sum_lambda w(lambda).  Summing w over fixed rank gives the
// rank weight below, whence  1/c = sum_{r>=0} d^r q^{-r(r+2u+1)/2} / (q)_r.
// For d = 1 this series has the closed form ((q)_u (q^2)_inf)/((q^2)_u (q)_inf),
// used directly; for d >= 2 the series is summed exactly with a geometric
// tail bound.

// d^r q^{-r(r+2u+1)/2} / (q)_r, exact; the probability of rank r is c times this.
inline mpq_class modified_rank_weight(const PredictionParams& pp, unsigned r) {
  validate(pp);
  mpq_class w(pow_ui(pp.d, r));
  w /= mpq_class(pow_ui(pp.q, (unsigned long)r * (r + 2 * pp.u + 1) / 2));
  w /= poch_finite(pp.q, r);
  w.canonicalize();
  return w;
}

inline ApproxReal normalization_constant(const PredictionParams& pp,
                                         double tol = 1e-10) {
  validate(pp);
  if (pp.d == 1) {
    mpq_class ratio = poch_finite(pp.q * pp.q, pp.u) / poch_finite(pp.q, pp.u);
    for (double t = tol / 32; t > 16 * DBL_EPSILON; t /= 8) {
      ApproxReal c = approx_from(ratio) * poch_inf(pp.q, t) / poch_inf(pp.q * pp.q, t);
      if (c.err_bound <= tol) return c;
    }
    throw std::domain_error("normalization_constant: tolerance unachievable");
  }
  // series for 1/c; terms are positive and eventually dominated by a
  // geometric series with ratio rho < 1
  mpq_class sum = 0;
  for (unsigned r = 0;; ++r) {
    if (r > 300) throw std::logic_error("normalization_constant: series runaway");
    sum += modified_rank_weight(pp, r);
    mpq_class next = modified_rank_weight(pp, r + 1);
    double rho = 2.0 * pp.d * std::pow((double)pp.q, -(double)(r + 2 + pp.u));
    if (rho < 1.0) {
      double tail = next.get_d() * 1.0000001 / (1.0 - rho);
      if (tail <= tol / 4) {
        // 1/c error: sum underestimates 1/c by at most tail and sum >= 1
        ApproxReal c = approx_from(mpq_class(1) / sum);
        return {c.value, c.err_bound + tail};
      }
    }
  }
}

// ---------------------------------------------------------------------------
// modified predictions (base field contains the relevant roots of unity)

// w(lambda) as above; the probability of type lambda is c times this.
inline mpq_class modified_group_weight(const PredictionParams& pp,
                                       const PartitionType& lam) {
  validate(pp);
  unsigned r = lam.rank();
  mpq_class w(pow_ui(pp.d, r) * rising_product(pp.q, pp.u + 1, r + pp.u));
  w /= mpq_class(pow_ui(pp.q, (unsigned long)r * (pp.u + 1)));
  w /= mpq_class(pow_ui(pp.q, (unsigned long)pp.u * lam.size()) * aut_order(lam, pp.q));
  w.canonicalize();
  return w;
}

inline ApproxReal modified_group_prob(const PredictionParams& pp,
                                      const PartitionType& lam,
                                      double tol = 1e-10) {
  return normalization_constant(pp, tol) * modified_group_weight(pp, lam);
}

inline ApproxReal modified_rank_prob(const PredictionParams& pp, unsigned r,
                                     double tol = 1e-10) {
  return normalization_constant(pp, tol) * modified_rank_weight(pp, r);
}

// E[q^{n * rank}] = prod_{k=1..n} (1 + d q^{k-u-1}), exact.
inline mpq_class modified_moment(const PredictionParams& pp, unsigned n) {
  validate(pp);
  mpq_class m = 1;
  for (unsigned k = 1; k <= n; ++k) {
    mpq_class term;
    if (k >= pp.u + 1)
      term = mpq_class(pow_ui(pp.q, k - pp.u - 1)) * pp.d;
    else
      term = mpq_class(pp.d, 1) / mpq_class(pow_ui(pp.q, pp.u + 1 - k));
    m *= 1 + term;
  }
  m.canonicalize();
  return m;
}

// ---------------------------------------------------------------------------
// classical predictions (no roots of unity in the base): the d-free weights

inline mpq_class cl_group_weight(const PredictionParams& pp,
                                 const PartitionType& lam) {
  validate(pp);
  mpq_class w = 1 / (poch_finite(pp.q, pp.u) *
                     mpq_class(pow_ui(pp.q, (unsigned long)pp.u * lam.size()) *
                               aut_order(lam, pp.q)));
  w.canonicalize();
  return w;
}

inline ApproxReal cl_group_prob(const PredictionParams& pp,
                                const PartitionType& lam, double tol = 1e-10) {
  validate(pp);
  return poch_inf(pp.q, tol) * cl_group_weight(pp, lam);
}

inline ApproxReal cl_rank_prob(const PredictionParams& pp, unsigned r,
                               double tol = 1e-10) {
  validate(pp);
  mpq_class w = 1 / (mpq_class(pow_ui(pp.q, (unsigned long)r * (r + pp.u))) *
                     poch_finite(pp.q, r) * poch_finite(pp.q, r + pp.u));
  return poch_inf(pp.q, tol) * w;
}

// No product form here; the rank series is summed until the remainder is
// negligible (diagnostic output only).
inline double cl_moment(const PredictionParams& pp, unsigned n) {
  validate(pp);
  double total = 0;
  ApproxReal pinf = poch_inf(pp.q, 1e-13);
  for (unsigned r = 0; r <= 2 * (n + pp.u) + 40; ++r) {
    mpq_class w = mpq_class(pow_ui(pp.q, (unsigned long)n * r)) /
                  (mpq_class(pow_ui(pp.q, (unsigned long)r * (r + pp.u))) *
                   poch_finite(pp.q, r) * poch_finite(pp.q, r + pp.u));
    total += pinf.value * w.get_d();
  }
  return total;
}

// ---------------------------------------------------------------------------
// Situation overloads

inline ApproxReal normalization_constant(const Situation& s, double tol = 1e-10) {
  return normalization_constant(params_of(s), tol);
}
inline ApproxReal group_prob(const Situation& s, const PartitionType& lam,
                             Predictor which, double tol = 1e-10) {
  return which == Predictor::Modified ? modified_group_prob(params_of(s), lam, tol)
                                      : cl_group_prob(params_of(s), lam, tol);
}
inline ApproxReal rank_prob(const Situation& s, unsigned r, Predictor which,
                            double tol = 1e-10) {
  return which == Predictor::Modified ? modified_rank_prob(params_of(s), r, tol)
                                      : cl_rank_prob(params_of(s), r, tol);
}

// ---------------------------------------------------------------------------
// prediction tables

struct PredictOptions {
  unsigned max_rank = 3;         // rank rows r = 0..max_rank (module ranks)
  unsigned max_moment = 4;       // moment rows n = 1..max_moment
  unsigned top_types = 9;        // number of Sylow types listed
  unsigned type_size_bound = 12; // enumeration bound when ranking types
  double tol = 1e-10;
};

// Rank rows are labeled by the p-rank of the underlying abelian group,
// which is d times the module rank.
inline std::string rank_row_label(const Situation& s, unsigned r) {
  return "r=" + std::to_string(r * s.d);
}

// Types with the `top` largest predicted probabilities, most likely first;
// ties broken by enumeration order.  Sorting compares exact weights.
inline std::vector<PartitionType> top_types_by_prob(const Situation& s,
                                                    Predictor which,
                                                    unsigned top,
                                                    unsigned size_bound = 12) {
  auto types = enumerate_types(size_bound);
  auto pp = params_of(s);
  std::vector<std::pair<mpq_class, size_t>> keyed;
  keyed.reserve(types.size());
  for (size_t i = 0; i < types.size(); ++i) {
    mpq_class w = which == Predictor::Modified ? modified_group_weight(pp, types[i])
                                               : cl_group_weight(pp, types[i]);
    keyed.emplace_back(std::move(w), i);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<PartitionType> out;
  for (size_t i = 0; i < keyed.size() && i < top; ++i)
    out.push_back(types[keyed[i].second]);
  return out;
}

inline DistributionTable predicted_table(const Situation& s, TableKind kind,
                                         Predictor which,
                                         const PredictOptions& opt = {}) {
  DistributionTable t;
  auto pp = params_of(s);
  std::string pname = which == Predictor::Modified ? "modified" : "classical";
  switch (kind) {
    case TableKind::Rank: {
      t.title = s.label + ": p-rank distribution (" + pname + ", p=" +
                std::to_string(s.p) + ")";
      t.columns = {"rank", "probability"};
      for (unsigned r = 0; r <= opt.max_rank; ++r) {
        DistributionTable::Row row{rank_row_label(s, r), {}};
        row.cells.push_back({.predicted = rank_prob(s, r, which, opt.tol).value});
        t.rows.push_back(std::move(row));
      }
      break;
    }
    case TableKind::Sylow: {
      t.title = s.label + ": Sylow p-subgroup distribution (" + pname + ", p=" +
                std::to_string(s.p) + ")";
      t.columns = {"type", "probability"};
      for (const auto& lam : top_types_by_prob(s, which, opt.top_types,
                                               opt.type_size_bound)) {
        DistributionTable::Row row{format_type(lam, s.p, s.d), {}};
        row.cells.push_back({.predicted = group_prob(s, lam, which, opt.tol).value});
        t.rows.push_back(std::move(row));
      }
      break;
    }
    case TableKind::Moments: {
      t.title = s.label + ": moments E[q^(n rank)] (" + pname + ", q=" +
                std::to_string(s.q) + ")";
      t.columns = {"n", "moment"};
      for (unsigned n = 1; n <= opt.max_moment; ++n) {
        DistributionTable::Row row{"n=" + std::to_string(n), {}};
        double m = which == Predictor::Modified
                       ? modified_moment(pp, n).get_d()
                       : cl_moment(pp, n);
        row.cells.push_back({.predicted = m});
        t.rows.push_back(std::move(row));
      }
      break;
    }
  }
  if (s.anomalous)
    t.notes.push_back("warning: " + s.label +
                      " is anomalous (extra roots of unity); the " + pname +
                      " prediction is not expected to match observations");
  return t;
}

}  // namespace cgstats
