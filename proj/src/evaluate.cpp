#include "cuefid/evaluate.hpp"

#include <nlohmann/json.hpp>

#include "cuefid/error.hpp"
#include "cuefid/util.hpp"

namespace cuefid {

namespace {

void check_lengths(std::size_t gold, std::size_t pred) {
  if (gold != pred) {
    throw InvalidInputError("gold has " + std::to_string(gold) +
                            " labels but predictions have " +
                            std::to_string(pred));
  }
}

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json label_map(const std::array<std::int64_t, kNumLabels>& values) {
  nlohmann::json out = nlohmann::json::object();
  for (CueLabel label : kAllLabels) {
    out[std::string(label_name(label))] = values[label_index(label)];
  }
  return out;
}

}  // namespace

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts) {
    for (std::int64_t v : row) t += v;
  }
  return t;
}

std::int64_t ConfusionMatrix::gold_count(CueLabel label) const {
  std::int64_t t = 0;
  for (std::int64_t v : counts[label_index(label)]) t += v;
  return t;
}

std::int64_t ConfusionMatrix::predicted_count(CueLabel label) const {
  std::int64_t t = 0;
  for (const auto& row : counts) t += row[label_index(label)];
  return t;
}

ConfusionMatrix confusion(std::span<const CueLabel> gold,
                          std::span<const CueLabel> pred) {
  check_lengths(gold.size(), pred.size());
  if (gold.empty()) throw InvalidInputError("confusion: no examples");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++m.counts[label_index(gold[i])][label_index(pred[i])];
  }
  return m;
}

PerClassScores per_class_prf(const ConfusionMatrix& matrix) {
  PerClassScores scores;
  for (CueLabel label : kAllLabels) {
    const std::size_t c = label_index(label);
    const std::int64_t tp = matrix.counts[c][c];
    const std::int64_t gold = matrix.gold_count(label);
    const std::int64_t predicted = matrix.predicted_count(label);
    ClassScores& s = scores[c];
    s.precision = ratio(tp, predicted);
    s.recall = ratio(tp, gold);
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    s.support = gold;
    s.absent = gold == 0 && predicted == 0;
  }
  return scores;
}

std::string_view average_mode_name(AverageMode mode) {
  switch (mode) {
    case AverageMode::kMacro:
      return "macro";
    case AverageMode::kMicro:
      return "micro";
    case AverageMode::kWeighted:
      return "weighted";
  }
  return "macro";
}

AverageMode parse_average_mode(std::string_view name) {
  for (AverageMode mode :
       {AverageMode::kMacro, AverageMode::kMicro, AverageMode::kWeighted}) {
    if (name == average_mode_name(mode)) return mode;
  }
  throw ValidationError("unknown averaging mode '" + std::string(name) +
                        "' (expected macro, micro or weighted)");
}

double averaged_f1(const ConfusionMatrix& matrix, AverageMode mode) {
  const std::int64_t total = matrix.total();
  if (total <= 0) throw InvalidInputError("averaged_f1: empty confusion matrix");
  const PerClassScores scores = per_class_prf(matrix);
  switch (mode) {
    case AverageMode::kMacro: {
      double sum = 0.0;
      for (const ClassScores& s : scores) sum += s.f1;
      return sum / static_cast<double>(kNumLabels);
    }
    case AverageMode::kWeighted: {
      double sum = 0.0;
      for (const ClassScores& s : scores) sum += static_cast<double>(s.support) * s.f1;
      return sum / static_cast<double>(total);
    }
    case AverageMode::kMicro: {
      std::int64_t tp = 0;
      for (std::size_t c = 0; c < kNumLabels; ++c) tp += matrix.counts[c][c];
      // Pooled FP and FN both equal total - tp in single-label data.
      const double p = ratio(tp, total);
      const double r = ratio(tp, total);
      return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
  }
  return 0.0;
}

EvalResult evaluate(std::span<const CueLabel> gold,
                    std::span<const CueLabel> pred, AverageMode mode) {
  EvalResult r;
  r.matrix = confusion(gold, pred);
  r.per_class = per_class_prf(r.matrix);
  r.mode = mode;
  r.averaged_f1 = averaged_f1(r.matrix, mode);
  r.n = r.matrix.total();
  std::int64_t correct = 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) correct += r.matrix.counts[c][c];
  r.accuracy = ratio(correct, r.n);
  return r;
}

AlignedLabels align_predictions(const Corpus& gold,
                                const PredictionMap& predictions) {
  AlignedLabels out;
  std::string missing;
  std::size_t n_missing = 0;
  for (const GoldExample& e : gold.examples) {
    const auto it = predictions.find(e.example_id);
    if (it == predictions.end()) {
      if (n_missing++ < 20) missing += (missing.empty() ? "" : ", ") + e.example_id;
      continue;
    }
    out.gold.push_back(e.label);
    out.pred.push_back(it->second);
  }
  if (n_missing > 0) {
    if (n_missing > 20) missing += ", ... (" + std::to_string(n_missing) + " total)";
    throw ValidationError("missing predictions for: " + missing);
  }
  return out;
}

DisciplineTable evaluate_by_discipline(const Corpus& gold,
                                       const PredictionMap& predictions,
                                       AverageMode mode) {
  const AlignedLabels all = align_predictions(gold, predictions);
  if (all.gold.empty()) throw InvalidInputError("evaluate_by_discipline: empty corpus");
  DisciplineTable table;
  table.mode = mode;
  for (Discipline discipline : kAllDisciplines) {
    std::vector<CueLabel> g, p;
    for (std::size_t i = 0; i < gold.examples.size(); ++i) {
      if (gold.examples[i].discipline != discipline) continue;
      g.push_back(all.gold[i]);
      p.push_back(all.pred[i]);
    }
    if (g.empty()) continue;
    table.rows.push_back(DisciplineRow{
        discipline, averaged_f1(confusion(g, p), mode),
        static_cast<std::int64_t>(g.size())});
  }
  double sum = 0.0;
  for (const DisciplineRow& row : table.rows) sum += row.f1;
  table.average = sum / static_cast<double>(table.rows.size());
  table.pooled = averaged_f1(confusion(all.gold, all.pred), mode);
  return table;
}

std::int64_t ErrorBreakdown::total_errors() const {
  std::int64_t t = 0;
  for (std::int64_t v : mislabeled_per_gold_class) t += v;
  return t;
}

ErrorBreakdown error_breakdown(const ConfusionMatrix& matrix) {
  ErrorBreakdown b;
  for (std::size_t g = 0; g < kNumLabels; ++g) {
    for (std::size_t p = 0; p < kNumLabels; ++p) {
      if (g == p) continue;
      b.mislabeled_per_gold_class[g] += matrix.counts[g][p];
      b.wrong_predictions_per_predicted_class[p] += matrix.counts[g][p];
    }
  }
  return b;
}

ErrorBreakdown error_breakdown(std::span<const CueLabel> gold,
                               std::span<const CueLabel> pred) {
  check_lengths(gold.size(), pred.size());
  ErrorBreakdown b;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == pred[i]) continue;
    ++b.mislabeled_per_gold_class[label_index(gold[i])];
    ++b.wrong_predictions_per_predicted_class[label_index(pred[i])];
  }
  return b;
}

PredictionMap load_predictions(std::string_view content) {
  PredictionMap out;
  for (const auto& [line_no, line] : lines_of(content)) {
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw FormatError(line_no, "expected 'example_id<TAB>LABEL'");
    }
    const std::string id(trim(fields[0]));
    if (id.empty()) throw FormatError(line_no, "example_id: empty");
    CueLabel label;
    try {
      label = parse_label(trim(fields[1]));
    } catch (const ValidationError& e) {
      throw FormatError(line_no, e.what());
    }
    if (!out.emplace(id, label).second) {
      throw FormatError(line_no, "duplicate example_id '" + id + "'");
    }
  }
  return out;
}

std::string render_predictions(
    const std::vector<std::pair<std::string, CueLabel>>& predictions) {
  std::string out;
  for (const auto& [id, label] : predictions) {
    out += id + '\t' + std::string(label_name(label)) + '\n';
  }
  return out;
}

std::string render_metrics(const EvalResult& result,
                           const ErrorBreakdown& breakdown,
                           const DisciplineTable* by_discipline) {
  using nlohmann::json;
  json doc;
  doc["n"] = result.n;
  doc["averaging"] = average_mode_name(result.mode);
  doc["averaged_f1"] = result.averaged_f1;
  doc["accuracy"] = result.accuracy;

  json labels = json::array();
  for (CueLabel label : kAllLabels) labels.push_back(label_name(label));
  json counts = json::array();
  for (const auto& row : result.matrix.counts) counts.push_back(row);
  doc["confusion"] = {{"labels", labels}, {"counts", counts}};

  json per_class = json::object();
  for (CueLabel label : kAllLabels) {
    const ClassScores& s = result.per_class[label_index(label)];
    per_class[std::string(label_name(label))] = {{"precision", s.precision},
                                                 {"recall", s.recall},
                                                 {"f1", s.f1},
                                                 {"support", s.support},
                                                 {"absent", s.absent}};
  }
  doc["per_class"] = std::move(per_class);

  doc["error_breakdown"] = {
      {"mislabeled_per_gold_class", label_map(breakdown.mislabeled_per_gold_class)},
      {"wrong_predictions_per_predicted_class",
       label_map(breakdown.wrong_predictions_per_predicted_class)},
      {"total_errors", breakdown.total_errors()}};

  if (by_discipline != nullptr) {
    json rows = json::array();
    for (const DisciplineRow& row : by_discipline->rows) {
      rows.push_back({{"discipline", discipline_name(row.discipline)},
                      {"f1", row.f1},
                      {"n", row.n}});
    }
    doc["by_discipline"] = {{"averaging", average_mode_name(by_discipline->mode)},
                            {"rows", rows},
                            {"average", by_discipline->average},
                            {"pooled", by_discipline->pooled}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace cuefid
