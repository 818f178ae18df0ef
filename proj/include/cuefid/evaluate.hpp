#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cuefid/corpus.hpp"
#include "cuefid/labels.hpp"

namespace cuefid {

// counts[gold][predicted] in canonical label order.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, kNumLabels>, kNumLabels> counts{};

  std::int64_t total() const;
  std::int64_t gold_count(CueLabel label) const;
  std::int64_t predicted_count(CueLabel label) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const CueLabel> gold,
                          std::span<const CueLabel> pred);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
  // Class occurs in neither gold nor predictions.
  bool absent = false;
};

using PerClassScores = std::array<ClassScores, kNumLabels>;

// A zero denominator scores 0 for that quantity.
PerClassScores per_class_prf(const ConfusionMatrix& matrix);

enum class AverageMode { kMacro, kMicro, kWeighted };

std::string_view average_mode_name(AverageMode mode);
AverageMode parse_average_mode(std::string_view name);

double averaged_f1(const ConfusionMatrix& matrix, AverageMode mode);

struct EvalResult {
  PerClassScores per_class;
  AverageMode mode = AverageMode::kMacro;
  double averaged_f1 = 0.0;
  double accuracy = 0.0;
  ConfusionMatrix matrix;
  std::int64_t n = 0;
};

EvalResult evaluate(std::span<const CueLabel> gold,
                    std::span<const CueLabel> pred, AverageMode mode);

using PredictionMap = std::map<std::string, CueLabel>;

struct DisciplineRow {
  Discipline discipline = Discipline::kOT;
  double f1 = 0.0;
  std::int64_t n = 0;
};

struct DisciplineTable {
  AverageMode mode = AverageMode::kMacro;
  std::vector<DisciplineRow> rows;  // disciplines present, canonical order
  double average = 0.0;             // unweighted mean of row scores
  double pooled = 0.0;              // score over all examples together
};

// Throws ValidationError listing every gold example without a prediction.
DisciplineTable evaluate_by_discipline(const Corpus& gold,
                                       const PredictionMap& predictions,
                                       AverageMode mode);

struct ErrorBreakdown {
  std::array<std::int64_t, kNumLabels> mislabeled_per_gold_class{};
  std::array<std::int64_t, kNumLabels> wrong_predictions_per_predicted_class{};

  std::int64_t total_errors() const;
};

ErrorBreakdown error_breakdown(std::span<const CueLabel> gold,
                               std::span<const CueLabel> pred);
ErrorBreakdown error_breakdown(const ConfusionMatrix& matrix);

// Predictions file: `example_id<TAB>LABEL` per line. Throws FormatError with
// the line number on malformed lines, unknown labels and duplicate ids.
PredictionMap load_predictions(std::string_view content);

// One line per prediction, in the given order.
std::string render_predictions(const std::vector<std::pair<std::string, CueLabel>>& predictions);

// Gold and predicted labels aligned by example, in corpus order.
struct AlignedLabels {
  std::vector<CueLabel> gold;
  std::vector<CueLabel> pred;
};
AlignedLabels align_predictions(const Corpus& gold, const PredictionMap& predictions);

// Structured metrics report (JSON). See README for the field list.
std::string render_metrics(const EvalResult& result,
                           const ErrorBreakdown& breakdown,
                           const DisciplineTable* by_discipline);

}  // namespace cuefid
