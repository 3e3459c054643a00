#include <catch2/catch_amalgamated.hpp>

#include "cgstats/heuristics.hpp"

using namespace cgstats;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// normalization constants, frozen from an independent 40-digit computation
constexpr double kC1 = 0.8520061021833037;  // q=3 u=1 d=1
constexpr double kC2 = 0.9900826666325312;  // q=5 u=2 d=1
constexpr double kC3 = 0.7864170783658267;  // q=2 u=2 d=1
constexpr double kC4 = 0.8530484193981428;  // q=4 u=1 d=2
constexpr double kC6 = 0.9596794718229106;  // q=4 u=2 d=2

constexpr double kInf2 = 0.2887880950866024213;
constexpr double kInf3 = 0.5601260779279489450;
constexpr double kInf4 = 0.6885375371203397155;
constexpr double kInf16 = 0.9335947073996031511;

const PredictionParams kSit1{3, 1, 1};
const PredictionParams kSit2{5, 2, 1};
const PredictionParams kSit3{2, 2, 1};
const PredictionParams kSit4{4, 1, 2};
const PredictionParams kSit6{4, 2, 2};

}  // namespace

TEST_CASE("normalization constants match frozen references") {
  struct Case {
    PredictionParams pp;
    double expect;
  };
  for (auto [pp, expect] : {Case{kSit1, kC1}, Case{kSit2, kC2}, Case{kSit3, kC3},
                            Case{kSit4, kC4}, Case{kSit6, kC6}}) {
    auto c = normalization_constant(pp);
    INFO("q=" << pp.q << " u=" << pp.u << " d=" << pp.d);
    CHECK(c.err_bound <= 1e-10);
    CHECK(std::fabs(c.value - expect) <= c.err_bound + 1e-12);
  }
  // d = 2 series against the closed product form of its value
  auto c4 = normalization_constant(kSit4, 1e-12);
  CHECK_THAT(c4.value,
             WithinAbs(1.5 * kInf2 * kInf16 / (kInf4 * kInf4), 1e-11));
  // tighter tolerance still achievable on the d = 1 closed form
  auto c1 = normalization_constant(kSit1, 1e-12);
  CHECK(c1.err_bound <= 1e-12);
}

TEST_CASE("modified rank weights are exact rationals") {
  CHECK(modified_rank_weight(kSit1, 0) == 1);
  CHECK(modified_rank_weight(kSit1, 1) == mpq_class(1, 6));
  CHECK(modified_rank_weight(kSit1, 2) == mpq_class(1, 144));
  CHECK(modified_rank_weight(kSit1, 3) == mpq_class(1, 11232));
  CHECK(modified_rank_weight(kSit2, 1) == mpq_class(1, 100));
  CHECK(modified_rank_weight(kSit2, 2) == mpq_class(1, 60000));
  CHECK(modified_rank_weight(kSit3, 1) == mpq_class(1, 4));
  CHECK(modified_rank_weight(kSit3, 2) == mpq_class(1, 48));
  CHECK(modified_rank_weight(kSit3, 3) == mpq_class(1, 1344));
  CHECK(modified_rank_weight(kSit4, 1) == mpq_class(1, 6));
  CHECK(modified_rank_weight(kSit4, 2) == mpq_class(1, 180));
  CHECK(modified_rank_weight(kSit4, 3) == mpq_class(1, 22680));
  CHECK(modified_rank_weight(kSit6, 1) == mpq_class(1, 24));
  CHECK(modified_rank_weight(kSit6, 2) == mpq_class(1, 2880));
}

TEST_CASE("modified rank probabilities reproduce the published rows") {
  auto probe = [](const PredictionParams& pp, unsigned r, double expect) {
    auto p = modified_rank_prob(pp, r);
    INFO("q=" << pp.q << " u=" << pp.u << " d=" << pp.d << " r=" << r);
    CHECK_THAT(p.value, WithinAbs(expect, 1e-11));
  };
  probe(kSit1, 0, kC1);
  probe(kSit1, 1, kC1 / 6);
  probe(kSit1, 2, kC1 / 144);
  probe(kSit1, 3, kC1 / 11232);
  probe(kSit2, 1, kC2 / 100);
  probe(kSit3, 1, kC3 / 4);
  probe(kSit3, 3, kC3 / 1344);
  probe(kSit4, 1, kC4 / 6);
  probe(kSit4, 2, kC4 / 180);
  probe(kSit6, 1, kC6 / 24);
  probe(kSit6, 2, kC6 / 2880);
}

TEST_CASE("rank probabilities sum to one") {
  for (const auto& s : situations()) {
    ApproxReal total = approx_exact(0);
    for (unsigned r = 0; r <= 40; ++r) total = total + rank_prob(s, r, Predictor::Modified);
    INFO(s.label);
    CHECK_THAT(total.value, WithinAbs(1.0, 1e-9));

    ApproxReal cl_total = approx_exact(0);
    for (unsigned r = 0; r <= 40; ++r) cl_total = cl_total + rank_prob(s, r, Predictor::ClassicalCL);
    CHECK_THAT(cl_total.value, WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("modified group weights: small-type rationals") {
  CHECK(modified_group_weight(kSit1, PartitionType{}) == 1);
  CHECK(modified_group_weight(kSit1, PartitionType({1})) == mpq_class(4, 27));
  CHECK(modified_group_weight(kSit1, PartitionType({2})) == mpq_class(4, 243));
  CHECK(modified_group_weight(kSit1, PartitionType({1, 1})) == mpq_class(13, 2187));
  // rank sums: group weights of rank r add up to the rank weight
  for (unsigned r = 1; r <= 2; ++r) {
    mpq_class acc = 0;
    for (const auto& lam : enumerate_types(34, r))
      acc += modified_group_weight(kSit1, lam);
    mpq_class gap = modified_rank_weight(kSit1, r) - acc;
    CHECK(gap > 0);
    CHECK(gap.get_d() < 1e-12);
  }
}

TEST_CASE("modified moments are exact rationals") {
  CHECK(modified_moment(kSit1, 1) == mpq_class(4, 3));
  CHECK(modified_moment(kSit1, 2) == mpq_class(8, 3));
  CHECK(modified_moment(kSit1, 3) == mpq_class(32, 3));
  CHECK(modified_moment(kSit3, 1) == mpq_class(5, 4));
  CHECK(modified_moment(kSit3, 2) == mpq_class(15, 8));
  CHECK(modified_moment(kSit3, 3) == mpq_class(15, 4));
  CHECK(modified_moment(kSit3, 4) == mpq_class(45, 4));
  CHECK(modified_moment(kSit6, 1) == mpq_class(9, 8));
  CHECK(modified_moment(kSit6, 2) == mpq_class(27, 16));
  CHECK(modified_moment(kSit6, 3) == mpq_class(81, 16));
  CHECK(modified_moment(kSit6, 4) == mpq_class(729, 16));
  CHECK(modified_moment(kSit4, 1) == mpq_class(3, 2));
  CHECK(modified_moment(kSit4, 2) == mpq_class(9, 2));
  CHECK(modified_moment(kSit4, 3) == mpq_class(81, 2));
  CHECK(modified_moment(kSit4, 4) == mpq_class(2673, 2));
  CHECK(modified_moment(kSit4, 0) == 1);
}

TEST_CASE("moments agree with the weighted rank series") {
  for (const auto* pp : {&kSit1, &kSit4, &kSit6}) {
    for (unsigned n = 1; n <= 3; ++n) {
      ApproxReal acc = approx_exact(0);
      for (unsigned r = 0; r <= 40; ++r) {
        mpq_class term = modified_rank_weight(*pp, r) *
                         mpq_class(pow_ui(pp->q, (unsigned long)n * r));
        acc = acc + normalization_constant(*pp) * term;
      }
      INFO("q=" << pp->q << " u=" << pp->u << " d=" << pp->d << " n=" << n);
      CHECK_THAT(acc.value, WithinAbs(modified_moment(*pp, n).get_d(), 1e-8));
    }
  }
}

TEST_CASE("classical baseline values") {
  // r = 0 rows are poch_inf(q) / (q)_u against independently frozen constants
  CHECK_THAT(cl_rank_prob(kSit1, 0, 1e-12).value, WithinAbs(kInf3 * 1.5, 1e-12));
  CHECK_THAT(cl_rank_prob(kSit3, 0, 1e-12).value, WithinAbs(kInf2 * 8 / 3, 1e-12));
  CHECK_THAT(cl_rank_prob(kSit6, 0, 1e-12).value, WithinAbs(kInf4 * 64 / 45, 1e-12));

  // published decimals (half-unit tolerance of the printed digits)
  CHECK_THAT(cl_rank_prob(kSit1, 1).value, WithinAbs(0.158, 0.00051));
  CHECK_THAT(cl_rank_prob(kSit1, 2).value, WithinAbs(0.0023, 0.000051));
  CHECK_THAT(cl_rank_prob(kSit1, 3).value, WithinAbs(0.33e-5, 0.0051e-5));
  CHECK_THAT(cl_rank_prob(kSit3, 1).value, WithinAbs(0.220, 0.00051));
  CHECK_THAT(cl_rank_prob(kSit3, 2).value, WithinAbs(0.0098, 0.000051));
  CHECK_THAT(cl_rank_prob(kSit3, 3).value, WithinAbs(0.090e-3, 0.00051e-3));
  CHECK_THAT(cl_rank_prob(kSit6, 1).value, WithinAbs(0.0207, 0.000051));
  CHECK_THAT(cl_rank_prob(kSit6, 2).value, WithinAbs(0.02e-3, 0.0051e-3));

  // group weights: lambda = (1) at q=3, u=1 has weight 1/((2/3)*3*2) = 1/4
  CHECK(cl_group_weight(kSit1, PartitionType({1})) == mpq_class(1, 4));
  CHECK(cl_group_weight(kSit1, PartitionType{}) == mpq_class(3, 2));
  CHECK_THAT(cl_group_prob(kSit1, PartitionType({1})).value,
             WithinAbs(kInf3 / 4, 1e-11));
}

TEST_CASE("classical moments via subspace counts") {
  // E[q^{n rank}] under the classical distribution equals
  // sum over subspaces W of F_q^n of q^{-u dim W} (Gaussian binomials)
  CHECK_THAT(cl_moment(kSit1, 1), WithinAbs(4.0 / 3.0, 1e-6));
  CHECK_THAT(cl_moment(kSit1, 2), WithinAbs(22.0 / 9.0, 1e-6));
  CHECK_THAT(cl_moment(kSit3, 1), WithinAbs(1.25, 1e-6));
}

TEST_CASE("top types are ordered by probability") {
  const auto& s1 = situation_by_id(1);
  auto top1 = top_types_by_prob(s1, Predictor::Modified, 9);
  REQUIRE(top1.size() == 9);
  CHECK(top1[0] == PartitionType{});
  CHECK(top1[1] == PartitionType({1}));
  CHECK(top1[2] == PartitionType({2}));
  CHECK(top1[3] == PartitionType({1, 1}));
  CHECK(top1[4] == PartitionType({3}));
  CHECK(top1[5] == PartitionType({2, 1}));
  CHECK(top1[6] == PartitionType({4}));
  CHECK(top1[7] == PartitionType({3, 1}));
  CHECK(top1[8] == PartitionType({1, 1, 1}));

  const auto& s4 = situation_by_id(4);
  auto top4 = top_types_by_prob(s4, Predictor::Modified, 8);
  REQUIRE(top4.size() == 8);
  CHECK(top4[4] == PartitionType({3}));
  CHECK(top4[5] == PartitionType({2, 1}));
  CHECK(top4[6] == PartitionType({1, 1, 1}));  // beats (4) here, unlike q=3
  CHECK(top4[7] == PartitionType({4}));
}

TEST_CASE("prediction tables carry labels and warnings") {
  const auto& s4 = situation_by_id(4);
  auto t = predicted_table(s4, TableKind::Rank, Predictor::Modified);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0].label == "r=0");
  CHECK(t.rows[1].label == "r=2");  // p-rank = d * module rank
  CHECK(t.rows[3].label == "r=6");
  CHECK(t.notes.empty());
  REQUIRE(t.rows[0].cells.size() == 1);
  CHECK_THAT(*t.rows[0].cells[0].predicted, WithinAbs(kC4, 1e-9));

  const auto& s7 = situation_by_id(7);
  auto t7 = predicted_table(s7, TableKind::Sylow, Predictor::Modified);
  REQUIRE(!t7.notes.empty());
  CHECK(t7.notes[0].find("anomalous") != std::string::npos);
  CHECK(t7.rows[0].label == "1");
  CHECK(t7.rows[1].label == "2^2");

  auto tm = predicted_table(situation_by_id(3), TableKind::Moments,
                            Predictor::Modified);
  REQUIRE(tm.rows.size() == 4);
  CHECK(tm.rows[1].label == "n=2");
  CHECK_THAT(*tm.rows[1].cells[0].predicted, WithinAbs(1.875, 1e-12));
}

TEST_CASE("situation registry lookups") {
  CHECK(situations().size() == 9);
  CHECK(situation("S3/Q-real").id == 3);
  CHECK(situation("3").label == "S3/Q-real");
  CHECK(situation("C3/Q(sqrt5)").u == 2);
  CHECK(situation_by_id(7).anomalous);
  CHECK(!situation_by_id(5).anomalous);
  CHECK(situation_by_id(2).q == 5);
  CHECK(situation_by_id(4).d == 2);
  CHECK_THROWS_AS(situation("nope"), std::invalid_argument);
  CHECK_THROWS_AS(situation("10"), std::invalid_argument);
  CHECK_THROWS_AS(situation_by_id(0), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(normalization_constant(PredictionParams{3, 1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(modified_rank_weight(PredictionParams{1, 1, 1}, 0),
                  std::invalid_argument);
  CHECK(parse_predictor("modified") == Predictor::Modified);
  CHECK(parse_predictor("cl") == Predictor::ClassicalCL);
  CHECK_THROWS_AS(parse_predictor("new"), std::invalid_argument);
}

TEST_CASE("rendered snapshots of the situation-1 Sylow table") {
  // snapshot fixed at the first verified run; the leading probabilities agree
  // with the published .852/.126/.014/.0051/... row at its printed precision
  auto t = predicted_table(situation_by_id(1), TableKind::Sylow,
                           Predictor::Modified, PredictOptions{});

  CHECK(render(t, TableFormat::Markdown) ==
        "### C2/Q(sqrt-3): Sylow p-subgroup distribution (modified, p=3)\n"
        "\n"
        "| type | probability |\n"
        "| --- | --- |\n"
        "| 1 | .8520 |\n"
        "| 3 | .1262 |\n"
        "| 9 | .01402 |\n"
        "| 3^2 | .005065 |\n"
        "| 27 | .001558 |\n"
        "| 9x3 | .750e-3 |\n"
        "| 81 | .173e-3 |\n"
        "| 27x3 | .834e-4 |\n"
        "| 3^3 | .641e-4 |\n");

  CHECK(render(t, TableFormat::Csv) ==
        "type,probability\n"
        "1,0.852006102183\n"
        "3,0.126223126249\n"
        "9,0.0140247918055\n"
        "3^2,0.00506450815198\n"
        "27,0.00155831020061\n"
        "9x3,0.000750297503997\n"
        "81,0.000173145577846\n"
        "27x3,8.3366389333e-05\n"
        "3^3,6.41279917946e-05\n");

  CHECK(render(t, TableFormat::Json) == R"json({
  "columns": [
    "type",
    "probability"
  ],
  "rows": [
    {
      "cells": [
        {
          "predicted": 0.8520061021834293
        }
      ],
      "label": "1"
    },
    {
      "cells": [
        {
          "predicted": 0.12622312624939694
        }
      ],
      "label": "3"
    },
    {
      "cells": [
        {
          "predicted": 0.014024791805488547
        }
      ],
      "label": "9"
    },
    {
      "cells": [
        {
          "predicted": 0.005064508151981975
        }
      ],
      "label": "3^2"
    },
    {
      "cells": [
        {
          "predicted": 0.0015583102006098387
        }
      ],
      "label": "27"
    },
    {
      "cells": [
        {
          "predicted": 0.0007502975039973298
        }
      ],
      "label": "9x3"
    },
    {
      "cells": [
        {
          "predicted": 0.00017314557784553762
        }
      ],
      "label": "81"
    },
    {
      "cells": [
        {
          "predicted": 8.336638933303664e-05
        }
      ],
      "label": "27x3"
    },
    {
      "cells": [
        {
          "predicted": 6.412799179464357e-05
        }
      ],
      "label": "3^3"
    }
  ],
  "title": "C2/Q(sqrt-3): Sylow p-subgroup distribution (modified, p=3)"
}
)json");
}
