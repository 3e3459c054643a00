#pragma once

#include <random>

#include "cgstats/heuristics.hpp"
#include "cgstats/records.hpp"

namespace cgstats {

// Synthetic draw from the modified type distribution of a situation.
//
// Determinism: records depend only on (situation, n, seed, tail_mass,
// disc_start).  The RNG is std::mt19937_64 seeded directly; each variate is
// (engine() >> 11) * 2^-53, the top 53 bits mapped into [0, 1).  To shard a
// large run, give shard s the seed splitmix64(seed ^ s) and concatenate in
// shard order; the stream of one shard never depends on the others.
struct SampleResult {
  std::vector<ClassGroupRecord> records;
  std::vector<std::pair<PartitionType, double>> support;  // probability, descending
  double covered_mass = 0;      // sum of support probabilities
  PartitionType overflow_type;  // draw used when a variate lands past the support
  unsigned long long overflow_count = 0;
};

inline SampleResult sample(const Situation& s, unsigned long long n,
                           uint64_t seed, double tail_mass = 1e-9,
                           mpz_class disc_start = 0) {
  if (tail_mass <= 0 || tail_mass >= 1)
    throw std::invalid_argument("sample: tail_mass must be in (0,1)");
  if (disc_start == 0) {
    mpz_ui_pow_ui(disc_start.get_mpz_t(), 10, 16);
  }
  auto pp = params_of(s);
  ApproxReal c = normalization_constant(pp, 1e-12);

  // enumerate enough types to cover 1 - tail_mass of the distribution
  SampleResult out;
  for (unsigned bound = 8;; bound += 4) {
    if (bound > 64)
      throw std::domain_error("sample: tail_mass not reachable by enumeration");
    auto types = enumerate_types(bound);
    std::vector<std::pair<mpq_class, size_t>> keyed;
    keyed.reserve(types.size());
    for (size_t i = 0; i < types.size(); ++i)
      keyed.emplace_back(modified_group_weight(pp, types[i]), i);
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    double mass = 0;
    out.support.clear();
    for (const auto& [w, i] : keyed) {
      double prob = c.value * w.get_d();
      out.support.emplace_back(types[i], prob);
      mass += prob;
    }
    out.covered_mass = mass;
    if (mass >= 1.0 - tail_mass) break;
  }

  // overflow draw: the enumerated type of maximal size (then lexicographically
  // largest), i.e. the largest group in the support
  out.overflow_type = PartitionType{};
  for (const auto& [ty, prob] : out.support) {
    auto bigger = [](const PartitionType& a, const PartitionType& b) {
      if (a.size() != b.size()) return a.size() > b.size();
      return a.parts() > b.parts();
    };
    if (bigger(ty, out.overflow_type)) out.overflow_type = ty;
  }

  std::vector<double> cumulative(out.support.size());
  double acc = 0;
  for (size_t i = 0; i < out.support.size(); ++i) {
    acc += out.support[i].second;
    cumulative[i] = acc;
  }

  std::mt19937_64 eng(seed);
  out.records.reserve(n);
  for (unsigned long long i = 0; i < n; ++i) {
    double x = (double)(eng() >> 11) * 0x1.0p-53;
    size_t idx =
        std::upper_bound(cumulative.begin(), cumulative.end(), x) - cumulative.begin();
    const PartitionType* ty;
    if (idx >= out.support.size()) {
      ty = &out.overflow_type;
      out.overflow_count++;
    } else {
      ty = &out.support[idx].first;
    }
    ClassGroupRecord rec;
    rec.disc = disc_start + (unsigned long)i;
    rec.invariants = underlying_abelian(*ty, s.d, s.p);
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace cgstats
