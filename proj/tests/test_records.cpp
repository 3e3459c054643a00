#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "cgstats/empirics.hpp"
#include "cgstats/records.hpp"

using namespace cgstats;
using Catch::Matchers::WithinAbs;

namespace {

ClassGroupRecord rec(const char* disc, std::vector<long> invs,
                     const char* label = "") {
  ClassGroupRecord r;
  r.disc = mpz_class(disc);
  for (long v : invs) r.invariants.push_back(v);
  r.field_label = label;
  return r;
}

bool same(const ClassGroupRecord& a, const ClassGroupRecord& b) {
  return a.disc == b.disc && a.invariants == b.invariants &&
         a.field_label == b.field_label;
}

}  // namespace

TEST_CASE("jsonl ingest accepts both spellings of integers") {
  std::istringstream in(
      "# comment\n"
      "\n"
      "{\"disc\": 229, \"clgrp\": [3]}\r\n"
      "  {\"disc\": \"1000000000000000000000000000000\","
      " \"clgrp\": [\"1180591620717411303424\", 4, 2], \"field\": \"X(1)\"}\n"
      "{\"disc\": \"4027\", \"clgrp\": []}\n");
  auto got = ingest(in);
  CHECK(got.warnings.empty());
  REQUIRE(got.records.size() == 3);
  CHECK(got.records[0].disc == 229);
  REQUIRE(got.records[0].invariants.size() == 1);
  CHECK(got.records[0].invariants[0] == 3);
  CHECK(got.records[0].field_label.empty());
  CHECK(got.records[1].disc == mpz_class("1000000000000000000000000000000"));
  CHECK(got.records[1].invariants[0] == mpz_class("1180591620717411303424"));
  CHECK(got.records[1].invariants[1] == 4);
  CHECK(got.records[1].field_label == "X(1)");
  CHECK(got.records[2].invariants.empty());
}

TEST_CASE("jsonl ingest rejects malformed records in strict mode") {
  auto throws = [](const char* text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(ingest(in), ingest_error);
  };
  throws("not json\n");
  throws("{\"disc\": 3}\n");                               // clgrp missing
  throws("{\"clgrp\": [3]}\n");                            // disc missing
  throws("{\"disc\": -3, \"clgrp\": []}\n");               // negative number
  throws("{\"disc\": \"-3\", \"clgrp\": []}\n");           // negative string
  throws("{\"disc\": 3, \"clgrp\": [1]}\n");               // divisor < 2
  throws("{\"disc\": 3, \"clgrp\": [2, 4]}\n");            // increasing divisors
  throws("{\"disc\": 3, \"clgrp\": 4}\n");                 // clgrp not an array
  throws("{\"disc\": 3, \"clgrp\": [2.5]}\n");             // non-integer entry

  std::istringstream in("{\"disc\": 3, \"clgrp\": [1]}\n");
  try {
    ingest(in);
    FAIL("expected ingest_error");
  } catch (const ingest_error& e) {
    CHECK(e.line == 1);
  }
}

TEST_CASE("lenient ingest skips bad lines and records warnings") {
  std::istringstream in(
      "{\"disc\": 8, \"clgrp\": [3]}\n"
      "garbage\n"
      "{\"disc\": 12, \"clgrp\": []}\n");
  IngestOptions opt;
  opt.strict = false;
  auto got = ingest(in, opt);
  REQUIRE(got.records.size() == 2);
  REQUIRE(got.warnings.size() == 1);
  CHECK(got.warnings[0].find("line 2") != std::string::npos);
}

TEST_CASE("csv ingest with and without header") {
  IngestOptions opt;
  opt.format = RecordFormat::Csv;
  std::istringstream with_header(
      "disc,invariants,field\n"
      "229,3,\n"
      "4027,,\n"
      "9748,9|3,cubic\n");
  auto got = ingest(with_header, opt);
  REQUIRE(got.records.size() == 3);
  CHECK(got.records[0].invariants.size() == 1);
  CHECK(got.records[1].invariants.empty());
  CHECK(got.records[2].invariants[0] == 9);
  CHECK(got.records[2].invariants[1] == 3);
  CHECK(got.records[2].field_label == "cubic");

  std::istringstream headerless("229,3\n4027,\n");
  auto got2 = ingest(headerless, opt);
  REQUIRE(got2.records.size() == 2);
  CHECK(got2.records[0].disc == 229);
  CHECK(got2.records[1].invariants.empty());

  std::istringstream bad("229\n");
  CHECK_THROWS_AS(ingest(bad, opt), ingest_error);
  std::istringstream bad2("229,3|x\n");
  CHECK_THROWS_AS(ingest(bad2, opt), ingest_error);
}

TEST_CASE("serialization round trips") {
  std::vector<ClassGroupRecord> rs = {
      rec("8", {3, 3}),
      rec("1000000000000000000000000000000", {}, "X(1)"),
      rec("229", {4, 2}, "a,b"),  // comma in a label survives jsonl
  };
  rs[1].invariants.push_back(mpz_class("1180591620717411303424"));
  rs[1].invariants.push_back(4);

  std::ostringstream js;
  write_jsonl(js, rs);
  CHECK(js.str().find("\"clgrp\":[\"1180591620717411303424\",4]") !=
        std::string::npos);
  std::istringstream jin(js.str());
  auto back = ingest(jin);
  REQUIRE(back.records.size() == rs.size());
  for (size_t i = 0; i < rs.size(); ++i) CHECK(same(back.records[i], rs[i]));

  // csv cannot carry a comma inside a label; round-trip the first two
  std::vector<ClassGroupRecord> csvable(rs.begin(), rs.begin() + 2);
  std::ostringstream cs;
  write_csv(cs, csvable);
  IngestOptions copt;
  copt.format = RecordFormat::Csv;
  std::istringstream cin(cs.str());
  auto cback = ingest(cin, copt);
  REQUIRE(cback.records.size() == csvable.size());
  for (size_t i = 0; i < csvable.size(); ++i)
    CHECK(same(cback.records[i], csvable[i]));
}

TEST_CASE("sylow types from elementary divisors") {
  CHECK(sylow_type(rec("5", {12, 2}), 2) == PartitionType({2, 1}));
  CHECK(sylow_type(rec("5", {12, 2}), 3) == PartitionType({1}));
  CHECK(sylow_type(rec("5", {7}), 2) == PartitionType{});
  CHECK(sylow_type(rec("5", {}), 2) == PartitionType{});
  CHECK(sylow_type(rec("5", {54, 6, 2}), 3) == PartitionType({3, 1}));
}

TEST_CASE("bins from edges") {
  auto all = bins_from_edges({});
  REQUIRE(all.size() == 1);
  CHECK(all[0].label == "all");
  CHECK(all[0].contains(mpz_class("999999999999999999999999")));

  auto three = bins_from_edges({mpz_class(100), mpz_class(1000)});
  REQUIRE(three.size() == 3);
  CHECK(three[0].label == "[0,100)");
  CHECK(three[1].label == "[100,1000)");
  CHECK(three[2].label == "[1000,inf)");
  CHECK(three[0].contains(99));
  CHECK(!three[0].contains(100));
  CHECK(three[1].contains(100));
  CHECK(three[2].contains(123456));

  CHECK_THROWS_AS(bins_from_edges({mpz_class(5), mpz_class(5)}),
                  std::invalid_argument);
}

TEST_CASE("summarize counts ranks, types and moments") {
  const auto& s1 = situation_by_id(1);  // p = 3, d = 1
  std::vector<ClassGroupRecord> rs = {
      rec("1", {}),       rec("2", {3}),     rec("3", {3, 3}),
      rec("4", {9}),      rec("5", {6, 2}),  rec("6", {4}),
  };
  auto sums = summarize(rs, s1, bins_from_edges({}), 2);
  REQUIRE(sums.size() == 1);
  const auto& sum = sums[0];
  CHECK(sum.count == 6);
  CHECK(sum.invalid_rank_count == 0);
  CHECK(sum.rank_count.at(0) == 2);
  CHECK(sum.rank_count.at(1) == 3);
  CHECK(sum.rank_count.at(2) == 1);
  CHECK_THAT(sum.rank_freq.at(1), WithinAbs(0.5, 1e-15));
  CHECK_THAT(sum.type_freq.at(PartitionType({1})), WithinAbs(1.0 / 3, 1e-15));
  CHECK_THAT(sum.type_freq.at(PartitionType{}), WithinAbs(1.0 / 3, 1e-15));
  CHECK_THAT(sum.moments.at(1), WithinAbs(20.0 / 6, 1e-12));
  CHECK_THAT(sum.moments.at(2), WithinAbs(110.0 / 6, 1e-12));

  double rank_total = 0, type_total = 0;
  for (const auto& [r, f] : sum.rank_freq) rank_total += f;
  for (const auto& [ty, f] : sum.type_freq) type_total += f;
  CHECK_THAT(rank_total, WithinAbs(1.0, 1e-12));
  CHECK_THAT(type_total, WithinAbs(1.0, 1e-12));
}

TEST_CASE("summarize handles module-incompatible p-ranks") {
  const auto& s4 = situation_by_id(4);  // p = 2, d = 2
  std::vector<ClassGroupRecord> rs = {
      rec("1", {2}),     // p-rank 1: no module rank
      rec("2", {}),      // rank 0
      rec("3", {2, 2}),  // module rank 1
  };
  auto sums = summarize(rs, s4, bins_from_edges({}), 1);
  const auto& sum = sums[0];
  CHECK(sum.count == 3);
  CHECK(sum.invalid_rank_count == 1);
  CHECK(sum.rank_count.at(0) == 1);
  CHECK(sum.rank_count.at(1) == 1);
  CHECK_THAT(sum.rank_freq.at(0), WithinAbs(0.5, 1e-15));  // over valid records
  CHECK_THAT(sum.type_freq.at(PartitionType({1})), WithinAbs(1.0 / 3, 1e-15));
  CHECK_THAT(sum.moments.at(1), WithinAbs(7.0 / 3, 1e-12));  // invalid included
}

TEST_CASE("summarize respects disc bins") {
  const auto& s1 = situation_by_id(1);
  std::vector<ClassGroupRecord> rs = {rec("10", {}), rec("20", {3}), rec("30", {})};
  auto sums = summarize(rs, s1, bins_from_edges({mpz_class(25)}), 1);
  REQUIRE(sums.size() == 2);
  CHECK(sums[0].count == 2);
  CHECK(sums[1].count == 1);
  CHECK(sums[0].bin_label == "[0,25)");
}

TEST_CASE("comparison tables carry observed, predicted and ratio") {
  const auto& s4 = situation_by_id(4);
  std::vector<ClassGroupRecord> rs = {rec("1", {2}), rec("2", {}), rec("3", {2, 2})};
  auto sum = summarize(rs, s4, bins_from_edges({}), 4)[0];

  auto t = compare(sum, s4, TableKind::Rank, Predictor::Modified);
  REQUIRE(t.columns.size() == 4);
  CHECK(t.columns[0] == "rank");
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0].label == "r=0");
  CHECK(t.rows[1].label == "r=2");
  REQUIRE(t.rows[0].cells.size() == 3);
  CHECK(*t.rows[0].cells[0].observed == 0.5);
  CHECK_THAT(*t.rows[0].cells[1].predicted, WithinAbs(0.8530484193981428, 1e-9));
  CHECK_THAT(*t.rows[0].cells[2].ratio, WithinAbs(0.5 / 0.8530484193981428, 1e-9));
  CHECK(*t.rows[3].cells[0].observed == 0.0);  // no rank-3 records
  bool noted = false;
  for (const auto& n : t.notes) noted |= n.find("excluded") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("published layout puts bins in rows") {
  const auto& s1 = situation_by_id(1);
  std::vector<ClassGroupRecord> rs = {
      rec("1", {}), rec("2", {3}), rec("3", {3, 3}),
      rec("4", {9}), rec("5", {6, 2}), rec("6", {4}),
  };
  auto sums = summarize(rs, s1, bins_from_edges({}), 4);
  PredictOptions opt;
  opt.top_types = 4;
  auto t = published_layout(sums, s1, TableKind::Sylow, Predictor::Modified, opt);
  REQUIRE(t.columns.size() == 5);
  CHECK(t.columns[0] == "range");
  CHECK(t.columns[1] == "1");
  CHECK(t.columns[2] == "3");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].label == "all (n=6)");
  CHECK(t.rows[1].label == "modified prediction");
  REQUIRE(t.rows[0].cells.size() == 4);
  CHECK(t.rows[0].cells[0].ratio.has_value());
  CHECK_THAT(*t.rows[0].cells[0].observed, WithinAbs(1.0 / 3, 1e-15));
  CHECK(!t.rows[1].cells[0].observed.has_value());
  CHECK(t.rows[1].cells[0].predicted.has_value());

  auto tr = published_layout(sums, s1, TableKind::Rank, Predictor::Modified);
  CHECK(tr.columns[1] == "r=0");
  CHECK(!tr.rows[0].cells[0].ratio.has_value());  // rank rows show raw frequencies
}

TEST_CASE("record format names") {
  CHECK(parse_record_format("jsonl") == RecordFormat::Jsonl);
  CHECK(parse_record_format("csv") == RecordFormat::Csv);
  CHECK_THROWS_AS(parse_record_format("tsv"), std::invalid_argument);
}
