#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cuefid/classify.hpp"
#include "cuefid/corpus.hpp"
#include "cuefid/evaluate.hpp"
#include "cuefid/labels.hpp"

namespace cuefid {

struct CueInstance {
  std::size_t utterance_index = 0;
  CueLabel label = CueLabel::kNone;
  // Matched lexicon entry, or the classifier tag when there is none.
  std::string source;
  std::string text;
  std::optional<std::int64_t> start_ms;
  std::optional<std::int64_t> end_ms;

  std::optional<std::int64_t> duration_ms() const {
    if (start_ms && end_ms) return *end_ms - *start_ms;
    return std::nullopt;
  }

  friend bool operator==(const CueInstance&, const CueInstance&) = default;
};

struct FidelityReport {
  std::string session_id;
  Discipline discipline = Discipline::kOT;
  std::array<std::int64_t, kNumLabels> counts{};
  std::optional<std::int64_t> session_duration_ms;
  // Present iff session_duration_ms is present and positive.
  std::optional<std::array<double, kNumLabels>> frequency_per_minute;
  // Summed utterance durations per label, over instances with timestamps.
  std::array<std::int64_t, kNumLabels> cue_duration_ms{};
  // One instance per evaluated utterance, in transcript order.
  std::vector<CueInstance> cue_instances;
  std::string classifier_id;
  std::string version_hash;

  friend bool operator==(const FidelityReport&, const FidelityReport&) = default;
};

// Classifies every cleaned utterance. Utterances that clean to nothing are
// labeled None. Session duration is last end_ms - first start_ms and is only
// reported when every utterance carries both timestamps.
// Throws InvalidInputError on an empty transcript.
FidelityReport assess_session(const Transcript& transcript,
                              const Classifier& classifier);

// Same, with labels supplied per utterance under the key
// `<session_id>:<utterance_index>`. Throws ValidationError naming any
// utterance without a prediction.
FidelityReport assess_session(const Transcript& transcript,
                              const PredictionMap& predictions,
                              const std::string& version_hash);

enum class ReportFormat { kStructured, kText };

std::string render_report(const FidelityReport& report, ReportFormat format);

// Inverse of render_report(..., kStructured).
FidelityReport parse_report(std::string_view structured);

// Identifier used for transcript utterances in prediction files.
std::string utterance_key(std::string_view session_id, std::size_t index);

}  // namespace cuefid
