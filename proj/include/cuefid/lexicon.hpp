#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cuefid/labels.hpp"

namespace cuefid {

// One position of a pattern: a literal token (a single one-token
// alternative), or an alternation group over token sequences. Either may be
// optional.
struct PatternAtom {
  std::vector<std::vector<std::string>> alternatives;
  bool group = false;
  bool optional = false;

  friend bool operator==(const PatternAtom&, const PatternAtom&) = default;
};

struct PatternTree {
  std::vector<PatternAtom> atoms;

  friend bool operator==(const PatternTree&, const PatternTree&) = default;
};

// Pattern grammar, tokens separated by single spaces:
//   tok          literal token
//   tok?         optional literal
//   (a|b c|d)    alternation over token sequences
//   (a|b)?       optional alternation
// Groups do not nest. At least one atom must be required.
// Throws FormatError (line 0) on grammar errors.
PatternTree parse_pattern(std::string_view text);
std::string render_pattern(const PatternTree& pattern);

struct LexiconEntry {
  std::string entry_id;
  std::int64_t priority = 0;
  bool anchored = false;
  PatternTree pattern;
  CueLabel label = CueLabel::kNone;
  std::optional<std::string> source_note;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Lexicon file: `entry_id<TAB>priority<TAB>^|-<TAB>pattern<TAB>LABEL`, with an
// optional sixth note field. '#' starts a comment line; blank lines skip.
std::vector<LexiconEntry> parse_lexicon(std::string_view source);
std::string render_lexicon(std::span<const LexiconEntry> entries);

struct Match {
  std::string entry_id;
  CueLabel label = CueLabel::kNone;
  std::size_t start = 0;  // token_span = [start, end)
  std::size_t end = 0;
  std::int64_t priority = 0;

  std::size_t span_length() const { return end - start; }

  friend bool operator==(const Match&, const Match&) = default;
};

// Total order used for match results: priority desc, span length desc,
// start asc, entry_id asc.
bool match_precedes(const Match& a, const Match& b);

// Token trie built from every token sequence each pattern generates.
// Immutable once built; safe to share across threads.
class CompiledLexicon {
 public:
  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const std::string& version_hash() const { return version_hash_; }

  // Entries accepting exactly `tokens` (whole sequence), as indices into
  // entries(), ascending. Ignores anchoring.
  std::vector<std::size_t> accepting_entries(
      std::span<const std::string> tokens) const;

  std::vector<Match> match_tokens(std::span<const std::string> tokens) const;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  friend CompiledLexicon compile_lexicon(std::vector<LexiconEntry> entries);

  struct Node {
    // Sorted by token for binary search.
    std::vector<std::pair<std::string, std::uint32_t>> children;
    std::vector<std::uint32_t> accepts;  // entry indices, ascending
  };

  std::uint32_t child(std::uint32_t node, std::string_view token) const;

  std::vector<LexiconEntry> entries_;
  std::vector<Node> nodes_;
  std::string version_hash_;
};

// Throws ValidationError on duplicate entry ids or duplicate rules (same
// anchor, pattern, label and priority).
CompiledLexicon compile_lexicon(std::vector<LexiconEntry> entries);

// All matches at all token offsets (anchored entries only at offset 0),
// sorted by match_precedes. `text` is expected in clean_text form.
std::vector<Match> match_utterance(const CompiledLexicon& lexicon,
                                   std::string_view text);

}  // namespace cuefid
