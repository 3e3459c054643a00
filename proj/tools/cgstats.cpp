// command-line front end: predictions, censuses, asymptotic counts,
// synthetic sampling and comparison of empirical class-group data

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgstats/empirics.hpp"
#include "cgstats/fieldgen.hpp"
#include "cgstats/heuristics.hpp"
#include "cgstats/records.hpp"
#include "cgstats/sampler.hpp"
#include "cgstats/selfcheck.hpp"
#include "cgstats/symplectic.hpp"

namespace {

using namespace cgstats;

// exit codes: 0 ok, 1 usage, 2 bad data, 3 verification failure
struct verification_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "markdown";
  double tol = 1e-10;
  bool verbose = false;
};

void echo_situation(const Common& c, const Situation& s) {
  if (!c.verbose) return;
  std::cerr << "# situation " << s.id << " (" << s.label << "): group=" << s.group
            << " base=" << s.base << " signature=" << s.signature << " p=" << s.p
            << " u=" << s.u << " q=" << s.q << " d=" << s.d
            << (s.anomalous ? " anomalous" : "") << "\n";
}

void anomalous_banner(const Situation& s) {
  if (!s.anomalous) return;
  std::cerr << "warning: " << s.label
            << " is anomalous (extra roots of unity at p=" << s.p
            << "); predictions here are known not to match observations\n";
}

// plain decimal, or integral scientific notation (1e16, 2.5e16)
mpz_class parse_mpz_arg(const std::string& s) {
  auto bad = [&] {
    return CLI::ValidationError("expected a nonnegative integer, got '" + s + "'");
  };
  size_t epos = s.find_first_of("eE");
  std::string mant = s.substr(0, epos);
  long exp10 = 0;
  if (epos != std::string::npos) {
    std::string es = s.substr(epos + 1);
    if (es.empty() || es.size() > 4 ||
        es.find_first_not_of("0123456789") != std::string::npos)
      throw bad();
    exp10 = std::stol(es);
  }
  if (size_t dot = mant.find('.'); dot != std::string::npos) {
    exp10 -= (long)(mant.size() - dot - 1);
    mant.erase(dot, 1);
  }
  if (mant.empty() || mant.find_first_not_of("0123456789") != std::string::npos)
    throw bad();
  mpz_class v(mant, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, (unsigned long)std::labs(exp10));
  if (exp10 >= 0) return v * scale;
  if (v % scale != 0) throw bad();  // 2.5e0 and friends are not integers
  return v / scale;
}

std::vector<ClassGroupRecord> read_records(const std::string& path,
                                           RecordFormat fmt, bool strict,
                                           bool verbose) {
  IngestResult res;
  if (path == "-") {
    res = ingest(std::cin, {fmt, strict});
  } else {
    std::ifstream in(path);
    if (!in) throw ingest_error(0, "cannot open '" + path + "'");
    res = ingest(in, {fmt, strict});
  }
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  if (verbose)
    std::cerr << "# " << res.records.size() << " record(s) read from " << path
              << "\n";
  return res.records;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{"exact predictions and statistics for class groups over bases "
               "with roots of unity"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--format", common.format, "table output: markdown|csv|json")
      ->capture_default_str();
  app.add_option("--tol", common.tol, "error tolerance for truncated constants")
      ->capture_default_str();
  app.add_flag("--verbose", common.verbose, "echo resolved configuration to stderr");

  // ---- predict-ranks ------------------------------------------------------
  std::string pr_sit = "1", pr_pred = "modified";
  unsigned pr_max = 3;
  auto* pr = app.add_subcommand("predict-ranks", "p-rank distribution of one situation");
  pr->add_option("--sit,--situation", pr_sit, "situation id (1-9) or label")->required();
  pr->add_option("--max-rank", pr_max, "largest module rank listed")
      ->capture_default_str();
  pr->add_option("--predictor", pr_pred, "modified|cl")->capture_default_str();
  pr->callback([&] {
    const Situation& s = situation(pr_sit);
    echo_situation(common, s);
    PredictOptions opt;
    opt.max_rank = pr_max;
    opt.tol = common.tol;
    std::cout << render(predicted_table(s, TableKind::Rank, parse_predictor(pr_pred), opt),
                        parse_table_format(common.format));
  });

  // ---- predict-sylow ------------------------------------------------------
  std::string ps_sit = "1", ps_pred = "modified";
  unsigned ps_top = 9, ps_bound = 12;
  auto* ps = app.add_subcommand("predict-sylow", "Sylow-type distribution of one situation");
  ps->add_option("--sit,--situation", ps_sit, "situation id (1-9) or label")->required();
  ps->add_option("--top", ps_top, "number of types listed")->capture_default_str();
  ps->add_option("--size-bound", ps_bound, "enumeration bound on |lambda|")
      ->capture_default_str();
  ps->add_option("--predictor", ps_pred, "modified|cl")->capture_default_str();
  ps->callback([&] {
    const Situation& s = situation(ps_sit);
    echo_situation(common, s);
    anomalous_banner(s);
    PredictOptions opt;
    opt.top_types = ps_top;
    opt.type_size_bound = ps_bound;
    opt.tol = common.tol;
    std::cout << render(
        predicted_table(s, TableKind::Sylow, parse_predictor(ps_pred), opt),
        parse_table_format(common.format));
  });

  // ---- moments ------------------------------------------------------------
  std::string mo_sit = "1", mo_pred = "modified";
  unsigned mo_max = 4;
  auto* mo = app.add_subcommand("moments", "moments E[q^(n rank)] of one situation");
  mo->add_option("--sit,--situation", mo_sit, "situation id (1-9) or label")->required();
  mo->add_option("--max", mo_max, "largest moment order")->capture_default_str();
  mo->add_option("--predictor", mo_pred, "modified|cl")->capture_default_str();
  mo->callback([&] {
    const Situation& s = situation(mo_sit);
    echo_situation(common, s);
    PredictOptions opt;
    opt.max_moment = mo_max;
    opt.tol = common.tol;
    std::cout << render(
        predicted_table(s, TableKind::Moments, parse_predictor(mo_pred), opt),
        parse_table_format(common.format));
  });

  // ---- alpha --------------------------------------------------------------
  unsigned al_g = 1;
  unsigned long al_q = 2;
  auto* al = app.add_subcommand(
      "alpha", "exact fixed-space dimension distribution over Sp_2g(F_q)");
  al->add_option("--g", al_g, "genus (half the matrix size)")->required();
  al->add_option("--q", al_q, "field size")->required();
  al->callback([&] {
    for (unsigned r = 0; r <= 2 * al_g; ++r)
      std::cout << r << " " << alpha(al_g, r, al_q).get_str() << "\n";
  });

  // ---- alpha-limit ---------------------------------------------------------
  unsigned long all_q = 2;
  unsigned all_max = 4;
  auto* all = app.add_subcommand("alpha-limit",
                                 "large-genus limit of the alpha distribution");
  all->add_option("--q", all_q, "field size")->required();
  all->add_option("--max-rank", all_max, "largest fixed-space dimension listed")
      ->capture_default_str();
  all->callback([&] {
    for (unsigned r = 0; r <= all_max; ++r) {
      ApproxReal v = alpha_limit(r, all_q, common.tol);
      std::cout << r << " " << format_full(v.value) << "\n";
    }
  });

  // ---- census ---------------------------------------------------------------
  unsigned ce_g = 1;
  unsigned long ce_q = 2;
  std::string ce_strategy = "auto";
  auto* ce = app.add_subcommand("census",
                                "count Sp_2g(F_q) by fixed-space dimension");
  ce->add_option("--g", ce_g, "genus (1 or 2)")->required();
  ce->add_option("--q", ce_q, "field size (2 or 3)")->required();
  ce->add_option("--strategy", ce_strategy, "auto|filter|closure")
      ->capture_default_str();
  ce->callback([&] {
    CensusOptions opt;
    if (ce_strategy == "auto") opt.strategy = CensusOptions::Auto;
    else if (ce_strategy == "filter") opt.strategy = CensusOptions::FilterAll;
    else if (ce_strategy == "closure") opt.strategy = CensusOptions::GeneratorClosure;
    else throw CLI::ValidationError("unknown strategy '" + ce_strategy + "'");
    auto counts = eigenspace_census(ce_g, ce_q, opt);
    for (unsigned r = 0; r < counts.size(); ++r)
      std::cout << r << " " << counts[r] << "\n";
  });

  // ---- alpha-verify ----------------------------------------------------------
  bool av_one = false;
  unsigned av_g = 1;
  unsigned long av_q = 2;
  auto* av = app.add_subcommand(
      "alpha-verify", "check the alpha formula against explicit censuses");
  av->add_option("--g", av_g, "genus (with --q: check only this case)");
  av->add_option("--q", av_q, "field size")->needs(av->get_option("--g"));
  av->callback([&] {
    av_one = av->count("--g") > 0;
    std::vector<std::pair<unsigned, unsigned long>> cases;
    if (av_one)
      cases = {{av_g, av_q}};
    else
      cases = {{1, 2}, {1, 3}, {2, 2}, {2, 3}};
    bool ok = true;
    for (auto [g, q] : cases) {
      auto counts = eigenspace_census(g, q);
      mpz_class order = sp_order(g, q);
      bool match = true;
      for (unsigned r = 0; r <= 2 * g; ++r)
        if (mpq_class((unsigned long)counts[r]) != alpha(g, r, q) * order) match = false;
      std::cout << (match ? "[PASS]" : "[FAIL]") << " g=" << g << " q=" << q
                << " census vs alpha * |Sp|\n";
      ok = ok && match;
    }
    if (!ok) throw verification_failure("alpha does not match the census");
  });

  // ---- roberts ----------------------------------------------------------------
  double ro_x1 = 0, ro_x2 = 0;
  auto* ro = app.add_subcommand(
      "roberts",
      "expected number of totally real non-Galois cubic fields with disc in [X1, X2]");
  ro->add_option("--x1", ro_x1, "lower end of the window")->required();
  ro->add_option("--x2", ro_x2, "upper end of the window")->required();
  ro->callback([&] {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", roberts_expected(ro_x1, ro_x2));
    std::cout << buf << "\n";
  });

  // ---- counts -------------------------------------------------------------------
  std::string co_key;
  double co_x1 = 0, co_x2 = 0;
  bool co_list = false;
  auto* co = app.add_subcommand(
      "counts", "linear asymptotic count of fields with a fixed resolvent");
  co->add_option("--key", co_key, "which count; see --list");
  co->add_option("--x1", co_x1, "lower end of the window");
  co->add_option("--x2", co_x2, "upper end of the window");
  co->add_flag("--list", co_list, "list known keys and slopes");
  co->callback([&] {
    if (co_list) {
      for (const auto& [k, v] : linear_count_registry())
        std::cout << k << " " << format_full(v) << "\n";
      return;
    }
    if (co_key.empty())
      throw CLI::ValidationError("counts: need --key (or --list)");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", linear_count_expected(co_key, co_x1, co_x2));
    std::cout << buf << "\n";
  });

  // ---- d5gen ---------------------------------------------------------------------
  long d5_a = 1, d5_b = 0, d5_t = 0;
  auto* d5 = app.add_subcommand("d5gen",
                                "member of the parametric quintic family, as JSONL");
  d5->add_option("--a", d5_a, "family parameter a")->required();
  d5->add_option("--b", d5_b, "family parameter b")->required();
  d5->add_option("--t", d5_t, "family parameter t")->required();
  d5->callback([&] {
    IntPolynomial f = d5_polynomial(d5_a, d5_b, d5_t);
    nlohmann::ordered_json o;
    o["a"] = d5_a;
    o["b"] = d5_b;
    o["t"] = d5_t;
    auto poly = nlohmann::ordered_json::array();
    for (unsigned i = 0; i <= 5; ++i) {
      mpz_class c = f.coeff(i);
      if (c.fits_slong_p())
        poly.push_back(c.get_si());
      else
        poly.push_back(c.get_str());
    }
    o["poly"] = poly;
    o["disc"] = discriminant(f).get_str();
    o["real_roots"] = real_root_count(f);
    std::cout << o.dump() << "\n";
  });

  // ---- sample ---------------------------------------------------------------------
  std::string sa_sit = "1", sa_out = "-", sa_fmt = "jsonl", sa_disc_start = "0";
  unsigned long long sa_n = 1000;
  uint64_t sa_seed = 1;
  double sa_tail = 1e-9;
  auto* sa = app.add_subcommand("sample",
                                "draw synthetic records from the modified law");
  sa->add_option("--sit,--situation", sa_sit, "situation id (1-9) or label")->required();
  sa->add_option("--n", sa_n, "number of records")->required();
  sa->add_option("--seed", sa_seed, "RNG seed")->required();
  sa->add_option("--tail-mass", sa_tail, "probability mass left out of the support")
      ->capture_default_str();
  sa->add_option("--disc-start", sa_disc_start,
                 "first synthetic |disc| (0 = 10^16)")
      ->capture_default_str();
  sa->add_option("--out", sa_out, "output path, - for stdout")->capture_default_str();
  sa->add_option("--records-format", sa_fmt, "jsonl|csv")->capture_default_str();
  sa->callback([&] {
    const Situation& s = situation(sa_sit);
    echo_situation(common, s);
    auto res = sample(s, sa_n, sa_seed, sa_tail, parse_mpz_arg(sa_disc_start));
    std::cerr << "# support " << res.support.size() << " type(s), covered mass "
              << format_full(res.covered_mass) << ", overflow draws "
              << res.overflow_count << " -> type "
              << format_type(res.overflow_type, s.p, s.d) << "\n";
    RecordFormat fmt = parse_record_format(sa_fmt);
    auto emit = [&](std::ostream& os) {
      if (fmt == RecordFormat::Jsonl)
        write_jsonl(os, res.records);
      else
        write_csv(os, res.records);
    };
    if (sa_out == "-") {
      emit(std::cout);
    } else {
      std::ofstream of(sa_out);
      if (!of) throw ingest_error(0, "cannot open '" + sa_out + "' for writing");
      emit(of);
    }
  });

  // ---- analyze ---------------------------------------------------------------------
  std::string an_sit = "1", an_in, an_fmt = "jsonl", an_kind = "rank",
              an_pred = "modified", an_bins, an_layout = "auto";
  unsigned an_max_rank = 3, an_top = 9, an_max_moment = 4;
  bool an_lenient = false;
  auto* an = app.add_subcommand(
      "analyze", "compare a record file against the predicted distributions");
  an->add_option("--sit,--situation", an_sit, "situation id (1-9) or label")->required();
  an->add_option("--in,--input", an_in, "record file, - for stdin")->required();
  an->add_option("--records-format", an_fmt, "jsonl|csv")->capture_default_str();
  an->add_option("--kind", an_kind, "rank|sylow|moments")->capture_default_str();
  an->add_option("--predictor", an_pred, "modified|cl")->capture_default_str();
  an->add_option("--bins", an_bins,
                 "comma-separated |disc| edges; several bins give the per-range layout");
  an->add_option("--layout", an_layout, "auto|single|bins")->capture_default_str();
  an->add_option("--max-rank", an_max_rank, "largest module rank compared")
      ->capture_default_str();
  an->add_option("--top", an_top, "number of Sylow types compared")
      ->capture_default_str();
  an->add_option("--max-moment", an_max_moment, "largest moment order")
      ->capture_default_str();
  an->add_flag("--lenient", an_lenient, "skip malformed records with a warning");
  an->callback([&] {
    const Situation& s = situation(an_sit);
    echo_situation(common, s);
    anomalous_banner(s);
    TableKind kind;
    if (an_kind == "rank") kind = TableKind::Rank;
    else if (an_kind == "sylow") kind = TableKind::Sylow;
    else if (an_kind == "moments") kind = TableKind::Moments;
    else throw CLI::ValidationError("unknown kind '" + an_kind + "'");

    auto records =
        read_records(an_in, parse_record_format(an_fmt), !an_lenient, common.verbose);
    std::vector<mpz_class> edges;
    if (!an_bins.empty()) {
      std::stringstream ss(an_bins);
      std::string tok;
      while (std::getline(ss, tok, ',')) edges.push_back(parse_mpz_arg(tok));
    }
    auto bins = bins_from_edges(edges);
    auto sums = summarize(records, s, bins, an_max_moment);

    PredictOptions opt;
    opt.max_rank = an_max_rank;
    opt.top_types = an_top;
    opt.max_moment = an_max_moment;
    opt.tol = common.tol;
    Predictor pred = parse_predictor(an_pred);
    TableFormat tfmt = parse_table_format(common.format);

    bool per_bin = an_layout == "bins" || (an_layout == "auto" && bins.size() > 1);
    if (an_layout != "auto" && an_layout != "single" && an_layout != "bins")
      throw CLI::ValidationError("unknown layout '" + an_layout + "'");
    if (per_bin) {
      std::cout << render(published_layout(sums, s, kind, pred, opt), tfmt);
    } else {
      // merge all bins into one by re-summarizing over a single bin
      auto whole = summarize(records, s, bins_from_edges({}), an_max_moment);
      std::cout << render(compare(whole[0], s, kind, pred, opt), tfmt);
    }
  });

  // ---- selfcheck --------------------------------------------------------------------
  bool sc_fast = false;
  auto* sc = app.add_subcommand("selfcheck", "run the internal coherence battery");
  sc->add_flag("--fast", sc_fast, "skip the slower censuses");
  sc->callback([&] {
    auto results = run_selfcheck(sc_fast);
    bool ok = true;
    for (const auto& r : results) {
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
      if (!r.pass) std::cout << ": " << r.detail;
      std::cout << "\n";
      ok = ok && r.pass;
    }
    std::cout << (ok ? "selfcheck: all checks passed\n"
                     : "selfcheck: FAILURES above\n");
    if (!ok) throw verification_failure("selfcheck failed");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const verification_failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ingest_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const type_parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal check tripped: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
