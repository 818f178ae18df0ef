#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cuefid/labels.hpp"

namespace cuefid {

// Standoff label over [char_start, char_end) of one utterance's text.
// Offsets count Unicode code points of the UTF-8 text.
struct Annotation {
  std::size_t utterance_index = 0;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  CueLabel label = CueLabel::kNone;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

// All spans one annotator produced for one document.
struct AnnotationSet {
  std::string doc_id;
  std::string annotator_id;
  std::vector<Annotation> annotations;

  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

// Annotation file: one record per line,
//   doc_id<TAB>annotator_id<TAB>utterance_index<TAB>char_start<TAB>char_end<TAB>LABEL
// Records are grouped into one set per (doc_id, annotator_id), in order of
// first appearance. Blank lines and lines starting with '#' are skipped.
std::vector<AnnotationSet> parse_annotations(std::string_view content);
std::string render_annotations(const std::vector<AnnotationSet>& sets);

// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

// Substring by code-point offsets [start, end). Offsets past the end clamp.
std::string_view utf8_substr(std::string_view text, std::size_t start,
                             std::size_t end);

}  // namespace cuefid
