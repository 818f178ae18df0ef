#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cuefid/annotation.hpp"
#include "cuefid/labels.hpp"

namespace cuefid {

class CompiledLexicon;

struct Utterance {
  std::size_t index = 0;
  std::string text;
  std::optional<std::string> speaker;
  std::optional<std::int64_t> start_ms;
  std::optional<std::int64_t> end_ms;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Transcript {
  std::string session_id;
  Discipline discipline = Discipline::kOT;
  std::vector<Utterance> utterances;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

struct GoldExample {
  std::string example_id;
  std::string text;
  CueLabel label = CueLabel::kNone;
  Discipline discipline = Discipline::kOT;
  std::string session_id;

  friend bool operator==(const GoldExample&, const GoldExample&) = default;
};

enum class SplitTag { kTrain, kValidation, kTest, kUnsplit };

struct Corpus {
  std::vector<GoldExample> examples;
  SplitTag split_tag = SplitTag::kUnsplit;

  std::size_t count(CueLabel label) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct LengthStats {
  std::size_t count = 0;
  std::size_t min_words = 0;
  std::size_t max_words = 0;
  double mean_words = 0.0;
  std::map<double, std::size_t> quantiles;
};

// Transcript file: header `#session=<id> discipline=<OT|PT|SLP>`, then one
// utterance per line `idx<TAB>start_ms<TAB>end_ms<TAB>speaker<TAB>text` with
// `-` for an absent optional field. Blank lines are ignored.
Transcript parse_transcript(std::string_view document);
std::string render_transcript(const Transcript& transcript);

// Canonical text form: lower-case, no punctuation from . , ? ! ; : " (or
// their typographic variants), apostrophes kept only inside words, single
// spaces between tokens and none at the ends. Idempotent.
std::string clean_text(std::string_view raw);

// Checks every span against the transcript: the utterance exists and
// [char_start, char_end) lies within its text. Throws ValidationError.
void validate_annotations(const AnnotationSet& set, const Transcript& transcript);

struct GoldBuild {
  Corpus cued;
  // Cleaned utterances that carry no Guided/Directed annotation, labeled None.
  std::vector<GoldExample> none_pool;
};

// One GoldExample per Guided/Directed annotation. Annotations must reference
// a known transcript and lie inside the utterance text.
GoldBuild build_gold_corpus(std::span<const Transcript> transcripts,
                            std::span<const AnnotationSet> annotations);

struct BalanceResult {
  Corpus corpus;
  std::vector<std::string> warnings;
};

// Adds k = max(#Guided, #Directed) None examples sampled uniformly without
// replacement from `none_pool`. A short pool is taken whole, with a warning.
BalanceResult balance_with_none(const Corpus& cued,
                                std::span<const GoldExample> none_pool,
                                std::uint64_t seed);

struct TranscriptSplit {
  std::vector<Transcript> train;
  std::vector<Transcript> validation;
};

// Stratified per discipline: round(fraction * n) documents of each
// discipline go to train. Both sides keep input order.
TranscriptSplit split_corpus(std::span<const Transcript> docs,
                             double train_fraction, std::uint64_t seed);

struct CorpusSplit {
  Corpus train;
  Corpus validation;
};

// Same split applied to a corpus, treating each session_id as a document.
CorpusSplit split_corpus(const Corpus& corpus, double train_fraction,
                         std::uint64_t seed);

// Word counts over cleaned text; quantile q is the smallest count w with at
// least ceil(q * n) examples having count <= w.
LengthStats length_stats(const Corpus& corpus, std::span<const double> quantiles);

struct LabelCounts {
  std::size_t guided = 0;
  std::size_t directed = 0;
  std::size_t none = 0;
};

// Synthetic labeled corpus instantiated from lexicon patterns. With
// noise_rate 0 every Guided/Directed text is rule-classified as its
// generating label and every None text matches no entry.
Corpus generate_synthetic(const CompiledLexicon& lexicon,
                          const LabelCounts& counts, double noise_rate,
                          std::uint64_t seed);

// Corpus file: `example_id<TAB>label<TAB>discipline<TAB>session_id<TAB>text`.
Corpus parse_corpus(std::string_view content);
std::string render_corpus(const Corpus& corpus);

}  // namespace cuefid
