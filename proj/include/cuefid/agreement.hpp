#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cuefid/annotation.hpp"
#include "cuefid/corpus.hpp"
#include "cuefid/labels.hpp"

namespace cuefid {

inline constexpr double kDefaultAlphaThreshold = 0.70;

struct AgreementResult {
  // Absent when expected disagreement is zero.
  std::optional<double> alpha;
  bool degenerate = false;
  std::size_t n_pairable_values = 0;
  std::size_t num_categories = 0;
  // Row-major [num_categories x num_categories] coincidences.
  std::vector<double> coincidence;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
  double threshold = kDefaultAlphaThreshold;
  bool passes_gate = false;

  double coincidence_at(std::size_t c, std::size_t k) const {
    return coincidence[c * num_categories + k];
  }
};

// Gate semantics: strictly above the threshold passes.
bool passes_alpha_gate(double alpha, double threshold = kDefaultAlphaThreshold);

// Krippendorff's alpha for nominal data. Each unit lists the category values
// (0 .. num_categories-1) assigned to it by the annotators who coded it;
// units with fewer than two values are not pairable and are skipped.
// Throws InvalidInputError when no unit is pairable or a value is out of range.
AgreementResult krippendorff_alpha(std::span<const std::vector<int>> units,
                                   std::size_t num_categories,
                                   double threshold = kDefaultAlphaThreshold);

// Utterance-level units for a pair of annotation sets over the same document.
// An utterance's value per annotator is the label of its longest span (earliest
// start on ties), or None when the annotator left it unannotated. Covers
// utterances 0 .. utterance_count-1.
std::vector<std::vector<int>> utterance_units(const AnnotationSet& a,
                                              const AnnotationSet& b,
                                              std::size_t utterance_count);

struct Disagreement {
  std::string id;
  std::string doc_id;
  std::size_t utterance_index = 0;
  // Span from each annotator; one side is absent for one-sided disagreements.
  std::optional<Annotation> a_span;
  std::optional<Annotation> b_span;
  std::optional<CueLabel> resolution;
};

// Conflicts are overlapping spans (>= 1 shared character, same utterance)
// with different labels; a span with no overlapping counterpart is one-sided.
// Ordered by utterance, then span offsets. Throws ValidationError when the
// doc ids differ.
std::vector<Disagreement> diff_annotations(const AnnotationSet& a,
                                           const AnnotationSet& b);

// Agreed spans pass through (A's boundaries); each disagreement takes its
// resolved label over the union of its spans. annotator_id is "consensus".
// Throws ValidationError naming every unresolved disagreement.
AnnotationSet merge_consensus(const AnnotationSet& a, const AnnotationSet& b,
                              const std::map<std::string, CueLabel>& resolutions);

// Resolution file: `disagreement_id<TAB>LABEL` per line.
std::map<std::string, CueLabel> parse_resolutions(std::string_view content);

}  // namespace cuefid
