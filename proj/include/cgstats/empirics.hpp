#pragma once

#include <map>
#include <optional>

#include "cgstats/heuristics.hpp"
#include "cgstats/records.hpp"

namespace cgstats {

// Partition type of the Sylow p-subgroup: p-adic valuations of the
// elementary divisors, zeros dropped.
inline PartitionType sylow_type(const ClassGroupRecord& rec, unsigned long p) {
  std::vector<unsigned> parts;
  for (const auto& dvr : rec.invariants) {
    mpz_class m = dvr;
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    if (e) parts.push_back(e);
  }
  return PartitionType::from_unsorted(std::move(parts));
}

// [lo, hi); no hi means unbounded above
struct DiscBin {
  mpz_class lo;
  std::optional<mpz_class> hi;
  std::string label;

  bool contains(const mpz_class& x) const {
    return x >= lo && (!hi || x < *hi);
  }
};

inline std::vector<DiscBin> bins_from_edges(const std::vector<mpz_class>& edges) {
  for (size_t i = 1; i < edges.size(); ++i)
    if (edges[i] <= edges[i - 1])
      throw std::invalid_argument("bin edges must be strictly increasing");
  std::vector<DiscBin> bins;
  if (edges.empty()) {
    bins.push_back({0, std::nullopt, "all"});
    return bins;
  }
  mpz_class lo = 0;
  for (const auto& e : edges) {
    bins.push_back({lo, e, "[" + lo.get_str() + "," + e.get_str() + ")"});
    lo = e;
  }
  bins.push_back({lo, std::nullopt, "[" + lo.get_str() + ",inf)"});
  return bins;
}

// Per-bin statistics of a record set for one situation.
//   rank_freq   module rank -> fraction of records with determinate rank
//   type_freq   abelian Sylow type -> fraction of all records
//   moments     n -> mean of p^{n * p-rank} = mean of q^{n * module rank}
// A record whose p-rank is not a multiple of d has no module rank; such
// records are counted in invalid_rank_count and excluded from rank_freq
// (so rank_freq sums to 1 over the valid ones), but they still have a
// Sylow type and contribute to type_freq and moments.
struct EmpiricalSummary {
  std::string bin_label;
  unsigned long long count = 0;
  unsigned long long invalid_rank_count = 0;
  std::map<unsigned, unsigned long long> rank_count;
  std::map<PartitionType, unsigned long long> type_count;
  std::map<unsigned, double> rank_freq;
  std::map<PartitionType, double> type_freq;
  std::map<unsigned, double> moments;
};

inline std::vector<EmpiricalSummary> summarize(
    const std::vector<ClassGroupRecord>& records, const Situation& s,
    const std::vector<DiscBin>& bins, unsigned max_moment = 4) {
  std::vector<EmpiricalSummary> out(bins.size());
  std::vector<std::map<unsigned, double>> moment_sums(bins.size());
  for (size_t b = 0; b < bins.size(); ++b) out[b].bin_label = bins[b].label;

  for (const auto& rec : records) {
    for (size_t b = 0; b < bins.size(); ++b) {
      if (!bins[b].contains(rec.disc)) continue;
      auto& sum = out[b];
      sum.count++;
      PartitionType ty = sylow_type(rec, s.p);
      sum.type_count[ty]++;
      unsigned prank = ty.rank();
      if (prank % s.d == 0)
        sum.rank_count[prank / s.d]++;
      else
        sum.invalid_rank_count++;
      for (unsigned n = 1; n <= max_moment; ++n)
        moment_sums[b][n] += std::pow((double)s.p, (double)n * prank);
    }
  }

  for (size_t b = 0; b < bins.size(); ++b) {
    auto& sum = out[b];
    if (sum.count == 0) continue;
    unsigned long long valid = sum.count - sum.invalid_rank_count;
    for (const auto& [r, c] : sum.rank_count)
      if (valid) sum.rank_freq[r] = (double)c / (double)valid;
    for (const auto& [ty, c] : sum.type_count)
      sum.type_freq[ty] = (double)c / (double)sum.count;
    for (unsigned n = 1; n <= max_moment; ++n)
      sum.moments[n] = moment_sums[b][n] / (double)sum.count;
  }
  return out;
}

// One bin against one predictor: rows are ranks / types / moment orders,
// columns observed, predicted, ratio.
inline DistributionTable compare(const EmpiricalSummary& sum, const Situation& s,
                                 TableKind kind, Predictor which,
                                 const PredictOptions& opt = {}) {
  DistributionTable t;
  std::string pname = which == Predictor::Modified ? "modified" : "classical";
  t.columns = {kind == TableKind::Rank ? "rank"
               : kind == TableKind::Sylow ? "type"
                                          : "n",
               "observed", "predicted", "ratio"};
  auto push = [&t](const std::string& label, std::optional<double> obs, double pred) {
    DistributionTable::Row row{label, {}};
    row.cells.push_back({.observed = obs ? obs : std::optional<double>(0.0)});
    row.cells.push_back({.predicted = pred});
    DistributionTable::Cell rc;
    if (pred > 0) rc.ratio = (obs ? *obs : 0.0) / pred;
    row.cells.push_back(rc);
    t.rows.push_back(std::move(row));
  };

  switch (kind) {
    case TableKind::Rank: {
      t.title = sum.bin_label + " vs " + pname + ": p-ranks, " + s.label;
      for (unsigned r = 0; r <= opt.max_rank; ++r) {
        std::optional<double> obs;
        if (auto it = sum.rank_freq.find(r); it != sum.rank_freq.end())
          obs = it->second;
        push(rank_row_label(s, r), obs, rank_prob(s, r, which, opt.tol).value);
      }
      break;
    }
    case TableKind::Sylow: {
      t.title = sum.bin_label + " vs " + pname + ": Sylow types, " + s.label;
      for (const auto& lam :
           top_types_by_prob(s, which, opt.top_types, opt.type_size_bound)) {
        std::optional<double> obs;
        auto ab = underlying_abelian_type(lam, s.d);
        if (auto it = sum.type_freq.find(ab); it != sum.type_freq.end())
          obs = it->second;
        push(format_type(lam, s.p, s.d), obs, group_prob(s, lam, which, opt.tol).value);
      }
      break;
    }
    case TableKind::Moments: {
      t.title = sum.bin_label + " vs " + pname + ": moments, " + s.label;
      auto pp = params_of(s);
      for (unsigned n = 1; n <= opt.max_moment; ++n) {
        std::optional<double> obs;
        if (auto it = sum.moments.find(n); it != sum.moments.end()) obs = it->second;
        double pred = which == Predictor::Modified ? modified_moment(pp, n).get_d()
                                                   : cl_moment(pp, n);
        push("n=" + std::to_string(n), obs, pred);
      }
      break;
    }
  }
  if (sum.invalid_rank_count > 0)
    t.notes.push_back(std::to_string(sum.invalid_rank_count) +
                      " record(s) with p-rank not divisible by d=" +
                      std::to_string(s.d) + " excluded from rank rows");
  if (s.anomalous)
    t.notes.push_back("warning: " + s.label +
                      " is anomalous (extra roots of unity); predictions are "
                      "not expected to match");
  return t;
}

// All bins in one table, one row per bin, mirroring the layout of the
// source comparison tables: rank and moment kinds show the observed values
// per bin, the Sylow kind shows observed/predicted ratios; the final row is
// the prediction itself.
inline DistributionTable published_layout(const std::vector<EmpiricalSummary>& sums,
                                      const Situation& s, TableKind kind,
                                      Predictor which,
                                      const PredictOptions& opt = {}) {
  DistributionTable t;
  std::string pname = which == Predictor::Modified ? "modified" : "classical";
  std::vector<std::string> labels;
  std::vector<double> preds;
  std::vector<PartitionType> types;
  auto pp = params_of(s);

  switch (kind) {
    case TableKind::Rank:
      t.title = "p-rank frequencies by |disc| range, " + s.label;
      for (unsigned r = 0; r <= opt.max_rank; ++r) {
        labels.push_back(rank_row_label(s, r));
        preds.push_back(rank_prob(s, r, which, opt.tol).value);
      }
      break;
    case TableKind::Sylow:
      t.title = "Sylow-type observed/predicted ratios by |disc| range, " + s.label;
      types = top_types_by_prob(s, which, opt.top_types, opt.type_size_bound);
      for (const auto& lam : types) {
        labels.push_back(format_type(lam, s.p, s.d));
        preds.push_back(group_prob(s, lam, which, opt.tol).value);
      }
      break;
    case TableKind::Moments:
      t.title = "moments by |disc| range, " + s.label;
      for (unsigned n = 1; n <= opt.max_moment; ++n) {
        labels.push_back("n=" + std::to_string(n));
        preds.push_back(which == Predictor::Modified ? modified_moment(pp, n).get_d()
                                                     : cl_moment(pp, n));
      }
      break;
  }

  t.columns = {"range"};
  for (const auto& l : labels) t.columns.push_back(l);

  for (const auto& sum : sums) {
    DistributionTable::Row row{sum.bin_label + " (n=" + std::to_string(sum.count) + ")",
                               {}};
    for (size_t i = 0; i < labels.size(); ++i) {
      DistributionTable::Cell cell;
      std::optional<double> obs;
      if (kind == TableKind::Rank) {
        unsigned r = (unsigned)i;
        if (auto it = sum.rank_freq.find(r); it != sum.rank_freq.end())
          obs = it->second;
        else
          obs = 0.0;
      } else if (kind == TableKind::Sylow) {
        auto ab = underlying_abelian_type(types[i], s.d);
        if (auto it = sum.type_freq.find(ab); it != sum.type_freq.end())
          obs = it->second;
        else
          obs = 0.0;
      } else {
        unsigned n = (unsigned)i + 1;
        if (auto it = sum.moments.find(n); it != sum.moments.end()) obs = it->second;
      }
      cell.observed = obs;
      cell.predicted = preds[i];
      if (kind == TableKind::Sylow && obs && preds[i] > 0)
        cell.ratio = *obs / preds[i];
      row.cells.push_back(cell);
    }
    t.rows.push_back(std::move(row));
  }

  DistributionTable::Row prow{pname + " prediction", {}};
  for (double p : preds) prow.cells.push_back({.predicted = p});
  t.rows.push_back(std::move(prow));

  if (s.anomalous)
    t.notes.push_back("warning: " + s.label +
                      " is anomalous (extra roots of unity); predictions are "
                      "not expected to match");
  return t;
}

}  // namespace cgstats
