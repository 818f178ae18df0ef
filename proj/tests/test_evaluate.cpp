#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>

#include "cuefid/error.hpp"
#include "cuefid/evaluate.hpp"
#include "oracles.hpp"

using namespace cuefid;

namespace {

const CueLabel G = CueLabel::kGuided, D = CueLabel::kDirected, N = CueLabel::kNone;

ConfusionMatrix random_matrix(std::mt19937_64& gen) {
  ConfusionMatrix m;
  do {
    for (auto& row : m.counts)
      for (auto& v : row) v = static_cast<std::int64_t>(gen() % 50);
  } while (m.total() == 0);
  return m;
}

}  // namespace

TEST_CASE("confusion and per-class scores") {
  const std::vector<CueLabel> gold = {G, G, D, N}, pred = {G, D, D, N};
  const ConfusionMatrix m = confusion(gold, pred);
  CHECK(m.counts[0][1] == 1);
  CHECK(m.counts[0][0] == 1);
  CHECK(m.counts[1][1] == 1);
  CHECK(m.counts[2][2] == 1);
  CHECK(m.total() == 4);

  const PerClassScores s = per_class_prf(m);
  CHECK(std::abs(s[0].f1 - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(s[1].f1 - 2.0 / 3.0) < 1e-12);
  CHECK(s[2].f1 == 1.0);
  CHECK(std::abs(averaged_f1(m, AverageMode::kMacro) - 7.0 / 9.0) < 1e-12);
  CHECK(std::abs(averaged_f1(m, AverageMode::kMacro) - 0.7778) < 1e-4);

  const ConfusionMatrix diag = confusion(gold, gold);
  for (const auto& c : per_class_prf(diag)) {
    if (c.support > 0) CHECK(c.f1 == 1.0);
  }

  CHECK_THROWS_AS(confusion(gold, std::vector<CueLabel>{G}), InvalidInputError);

  // A class missing from both sides scores 0 and is flagged.
  const ConfusionMatrix no_none = confusion(std::vector<CueLabel>{G, D}, std::vector<CueLabel>{G, D});
  const PerClassScores ns = per_class_prf(no_none);
  CHECK(ns[2].absent);
  CHECK(ns[2].f1 == 0.0);
  CHECK_FALSE(ns[0].absent);
  CHECK(std::abs(averaged_f1(no_none, AverageMode::kMacro) - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("averaging modes against the hand oracle") {
  std::mt19937_64 gen(31337);
  for (int i = 0; i < 1000; ++i) {
    const ConfusionMatrix m = random_matrix(gen);
    const oracle::HandScores h = oracle::hand_scores(m.counts);
    const PerClassScores s = per_class_prf(m);
    for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(s[c].f1 - h.f1[c]) < 1e-12);
    CHECK(std::abs(averaged_f1(m, AverageMode::kMacro) - h.macro) < 1e-12);
    CHECK(std::abs(averaged_f1(m, AverageMode::kWeighted) - h.weighted) < 1e-12);
    CHECK(std::abs(averaged_f1(m, AverageMode::kMicro) - h.micro) < 1e-12);
    CHECK(std::abs(averaged_f1(m, AverageMode::kMicro) - h.accuracy) < 1e-12);
  }
}

TEST_CASE("macro F1 under label permutation") {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 100; ++i) {
    std::vector<CueLabel> gold(20), pred(20);
    for (std::size_t k = 0; k < 20; ++k) {
      gold[k] = kAllLabels[gen() % 3];
      pred[k] = kAllLabels[gen() % 3];
    }
    auto rot = [](CueLabel l) { return kAllLabels[(label_index(l) + 1) % 3]; };
    std::vector<CueLabel> g2, p2;
    for (std::size_t k = 0; k < 20; ++k) {
      g2.push_back(rot(gold[k]));
      p2.push_back(rot(pred[k]));
    }
    CHECK(std::abs(averaged_f1(confusion(gold, pred), AverageMode::kMacro) -
                   averaged_f1(confusion(g2, p2), AverageMode::kMacro)) < 1e-12);
    const ConfusionMatrix m = confusion(gold, pred);
    for (CueLabel l : kAllLabels) {
      CHECK(m.gold_count(l) == std::count(gold.begin(), gold.end(), l));
      CHECK(m.predicted_count(l) == std::count(pred.begin(), pred.end(), l));
    }
    const ErrorBreakdown b = error_breakdown(gold, pred);
    std::int64_t s1 = 0, s2 = 0;
    for (auto v : b.mislabeled_per_gold_class) s1 += v;
    for (auto v : b.wrong_predictions_per_predicted_class) s2 += v;
    CHECK(s1 == s2);
    CHECK(b.total_errors() == s1);
  }
}

TEST_CASE("error breakdown") {
  const ErrorBreakdown swap = error_breakdown(std::vector<CueLabel>{G, D}, std::vector<CueLabel>{D, G});
  CHECK(swap.mislabeled_per_gold_class == std::array<std::int64_t, 3>{1, 1, 0});
  CHECK(swap.wrong_predictions_per_predicted_class == std::array<std::int64_t, 3>{1, 1, 0});
  const ErrorBreakdown none = error_breakdown(std::vector<CueLabel>{G, N}, std::vector<CueLabel>{G, N});
  CHECK(none.total_errors() == 0);

  // A matrix with the reported mislabel profile (66, 32, 58) and
  // wrong-prediction profile (39, 85, 32).
  ConfusionMatrix m;
  m.counts = {{{208, 56, 10}, {10, 210, 22}, {29, 29, 392}}};
  const ErrorBreakdown b = error_breakdown(m);
  CHECK(b.mislabeled_per_gold_class == std::array<std::int64_t, 3>{66, 32, 58});
  CHECK(b.wrong_predictions_per_predicted_class == std::array<std::int64_t, 3>{39, 85, 32});
  CHECK(b.total_errors() == 156);
  CHECK_THROWS(error_breakdown(std::vector<CueLabel>{G}, std::vector<CueLabel>{}));
}

TEST_CASE("discipline table") {
  Corpus gold;
  PredictionMap pred;
  int id = 0;
  for (Discipline d : kAllDisciplines) {
    for (CueLabel l : kAllLabels) {
      const std::string key = "e" + std::to_string(id++);
      gold.examples.push_back({key, "x", l, d, "s"});
      pred[key] = l;
    }
  }
  DisciplineTable t = evaluate_by_discipline(gold, pred, AverageMode::kMacro);
  REQUIRE(t.rows.size() == 3);
  for (const auto& r : t.rows) CHECK(r.f1 == 1.0);
  CHECK(t.average == 1.0);

  pred["e0"] = D;
  pred["e4"] = N;
  t = evaluate_by_discipline(gold, pred, AverageMode::kMacro);
  CHECK(std::abs(t.average - (t.rows[0].f1 + t.rows[1].f1 + t.rows[2].f1) / 3.0) < 1e-15);
  CHECK(t.rows[2].f1 == 1.0);

  Corpus ot_only;
  ot_only.examples.assign(gold.examples.begin(), gold.examples.begin() + 3);
  t = evaluate_by_discipline(ot_only, pred, AverageMode::kMacro);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.average == t.rows[0].f1);

  pred.erase("e8");
  CHECK_THROWS_AS(evaluate_by_discipline(gold, pred, AverageMode::kMacro), ValidationError);
}

TEST_CASE("prediction files and metrics output") {
  const PredictionMap p = load_predictions("a\tGUIDED\nb\tDIRECTED\nc\tNONE\n");
  CHECK(p.size() == 3);
  CHECK_THROWS_AS(load_predictions("a\tGUIDED\na\tNONE\n"), FormatError);
  try {
    load_predictions("a\tGUIDED\nb\tGUIDE\n");
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_predictions("just one field\n"), FormatError);

  const std::vector<CueLabel> gold = {G, G, D, N}, pred = {G, D, D, N};
  const EvalResult r = evaluate(gold, pred, AverageMode::kWeighted);
  const auto doc = nlohmann::json::parse(render_metrics(r, error_breakdown(gold, pred), nullptr));
  CHECK(doc.at("averaging") == "weighted");
  CHECK(doc.at("n") == 4);
  CHECK(doc.at("confusion").at("counts")[0][1] == 1);
  CHECK(doc.at("per_class").at("NONE").at("f1") == 1.0);
  CHECK(doc.at("error_breakdown").at("total_errors") == 1);
  CHECK_FALSE(doc.contains("by_discipline"));
  CHECK(parse_average_mode("micro") == AverageMode::kMicro);
  CHECK_THROWS(parse_average_mode("samples"));
}
