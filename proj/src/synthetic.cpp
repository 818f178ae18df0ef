#include <algorithm>
#include <cstdio>
#include <set>

#include "cuefid/classify.hpp"
#include "cuefid/corpus.hpp"
#include "cuefid/error.hpp"
#include "cuefid/lexicon.hpp"
#include "cuefid/util.hpp"

namespace cuefid {

namespace {

// Neutral session vocabulary used to pad instantiated patterns.
constexpr std::string_view kFillerWords[] = {
    "the",   "cup",    "table",  "kitchen", "chair", "towel",   "water",
    "now",   "okay",   "right",  "there",   "here",  "today",   "slowly",
    "again", "with",   "that",   "this",    "one",   "your",    "hand",
    "left",  "side",   "shirt",  "button",  "sink",  "walker",  "bed",
    "door",  "list",   "card",   "minute",  "little", "more",   "next",
    "well",  "went",   "and",    "then",    "morning", "room",  "plate"};

constexpr std::size_t kSessionsPerDiscipline = 10;
constexpr int kMaxAttempts = 2000;

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

void append_fillers(std::vector<std::string>& tokens, std::size_t count, Rng& rng) {
  constexpr std::size_t n = std::size(kFillerWords);
  for (std::size_t i = 0; i < count; ++i) {
    tokens.emplace_back(kFillerWords[rng.uniform_index(n)]);
  }
}

std::vector<std::string> instantiate(const LexiconEntry& entry, Rng& rng) {
  std::vector<std::string> tokens;
  if (!entry.anchored) append_fillers(tokens, rng.uniform_index(3), rng);
  for (const PatternAtom& atom : entry.pattern.atoms) {
    if (atom.optional && rng.bernoulli(0.5)) continue;
    const auto& alt = atom.alternatives[rng.uniform_index(atom.alternatives.size())];
    tokens.insert(tokens.end(), alt.begin(), alt.end());
  }
  append_fillers(tokens, 1 + rng.uniform_index(5), rng);
  return tokens;
}

}  // namespace

Corpus generate_synthetic(const CompiledLexicon& lexicon,
                          const LabelCounts& counts, double noise_rate,
                          std::uint64_t seed) {
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
    throw InvalidInputError("noise rate must lie in [0, 1]");
  }

  std::set<std::string> vocabulary_set(std::begin(kFillerWords),
                                       std::end(kFillerWords));
  for (const LexiconEntry& e : lexicon.entries()) {
    for (const PatternAtom& atom : e.pattern.atoms) {
      for (const auto& alt : atom.alternatives) {
        vocabulary_set.insert(alt.begin(), alt.end());
      }
    }
  }
  const std::vector<std::string> vocabulary(vocabulary_set.begin(),
                                            vocabulary_set.end());

  Rng rng(seed);
  std::vector<std::pair<CueLabel, std::vector<std::string>>> generated;

  for (CueLabel label : {CueLabel::kGuided, CueLabel::kDirected}) {
    const std::size_t wanted =
        label == CueLabel::kGuided ? counts.guided : counts.directed;
    if (wanted == 0) continue;
    std::vector<const LexiconEntry*> sources;
    for (const LexiconEntry& e : lexicon.entries()) {
      if (e.label == label) sources.push_back(&e);
    }
    if (sources.empty()) {
      throw InvalidInputError("lexicon has no " + std::string(label_name(label)) +
                              " entries to instantiate");
    }
    for (std::size_t i = 0; i < wanted; ++i) {
      bool done = false;
      for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
        const LexiconEntry& entry = *sources[rng.uniform_index(sources.size())];
        std::vector<std::string> tokens = instantiate(entry, rng);
        // Reject instances that a higher-ranked entry of another label claims.
        if (rule_classify(lexicon, join(tokens)).label != label) continue;
        generated.emplace_back(label, std::move(tokens));
        done = true;
      }
      if (!done) {
        throw InvalidInputError("cannot instantiate a " +
                                std::string(label_name(label)) +
                                " example the lexicon classifies as such");
      }
    }
  }

  for (std::size_t i = 0; i < counts.none; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
      std::vector<std::string> tokens;
      const std::size_t length = 3 + rng.uniform_index(8);
      for (std::size_t t = 0; t < length; ++t) {
        tokens.push_back(vocabulary[rng.uniform_index(vocabulary.size())]);
      }
      if (!lexicon.match_tokens(tokens).empty()) continue;
      generated.emplace_back(CueLabel::kNone, std::move(tokens));
      done = true;
    }
    if (!done) {
      throw InvalidInputError("cannot generate a None example matching no entry");
    }
  }

  if (noise_rate > 0.0) {
    for (auto& [label, tokens] : generated) {
      for (std::string& token : tokens) {
        if (rng.bernoulli(noise_rate)) {
          token = vocabulary[rng.uniform_index(vocabulary.size())];
        }
      }
    }
  }

  rng.shuffle(generated);

  Corpus corpus;
  const std::size_t sessions = kSessionsPerDiscipline * kAllDisciplines.size();
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const std::size_t session = i % sessions;
    const Discipline discipline = kAllDisciplines[session % kAllDisciplines.size()];
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", i);
    char session_id[32];
    std::snprintf(session_id, sizeof session_id, "syn-%s-%02zu",
                  std::string(discipline_name(discipline)).c_str(),
                  session / kAllDisciplines.size());
    corpus.examples.push_back(GoldExample{id, join(generated[i].second),
                                          generated[i].first, discipline,
                                          session_id});
  }
  return corpus;
}

}  // namespace cuefid
