#include "cuefid/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "cuefid/classify.hpp"
#include "cuefid/error.hpp"
#include "cuefid/util.hpp"

namespace cuefid {

namespace {

constexpr std::string_view kSessionPrefix = "#session=";
constexpr std::string_view kDisciplinePrefix = "discipline=";

std::optional<std::int64_t> parse_timestamp(std::string_view field,
                                            std::size_t line,
                                            const char* name) {
  if (field == "-") return std::nullopt;
  const auto value = parse_int(field);
  if (!value || *value < 0) {
    throw FormatError(line, std::string(name) +
                                ": expected non-negative milliseconds or '-', "
                                "got '" + std::string(field) + "'");
  }
  return value;
}

std::string sanitize_field(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

// The text is the last field, so only line breaks need replacing.
std::string sanitize_text(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::string timestamp_field(const std::optional<std::int64_t>& value) {
  return value ? std::to_string(*value) : std::string("-");
}

// For each document, whether it goes to train.
std::vector<bool> stratified_assignment(const std::vector<Discipline>& docs,
                                        double train_fraction,
                                        std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidInputError("train fraction must lie strictly between 0 and 1");
  }
  std::vector<bool> train(docs.size(), false);
  Rng rng(seed);
  for (Discipline discipline : kAllDisciplines) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (docs[i] == discipline) members.push_back(i);
    }
    if (members.empty()) continue;
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(members.size())));
    rng.shuffle(members);
    for (std::size_t k = 0; k < n_train && k < members.size(); ++k) {
      train[members[k]] = true;
    }
  }
  return train;
}

}  // namespace

std::size_t Corpus::count(CueLabel label) const {
  return static_cast<std::size_t>(std::count_if(
      examples.begin(), examples.end(),
      [label](const GoldExample& e) { return e.label == label; }));
}

Transcript parse_transcript(std::string_view document) {
  Transcript transcript;
  bool have_header = false;
  for (const auto& [line_no, line] : lines_of(document)) {
    if (trim(line).empty()) continue;
    if (!have_header) {
      const std::string_view header = trim(line);
      if (!header.starts_with(kSessionPrefix)) {
        throw FormatError(line_no,
                          "expected header '#session=<id> discipline=<OT|PT|SLP>'");
      }
      const auto parts = split(header, ' ');
      std::string_view session;
      std::optional<std::string_view> discipline;
      for (std::string_view part : parts) {
        if (part.empty()) continue;
        if (part.starts_with(kSessionPrefix)) {
          session = part.substr(kSessionPrefix.size());
        } else if (part.starts_with(kDisciplinePrefix)) {
          discipline = part.substr(kDisciplinePrefix.size());
        } else {
          throw FormatError(line_no, "header: unexpected field '" +
                                         std::string(part) + "'");
        }
      }
      if (session.empty()) throw FormatError(line_no, "header: empty session id");
      if (!discipline) throw FormatError(line_no, "header: missing discipline");
      transcript.session_id = std::string(session);
      try {
        transcript.discipline = parse_discipline(*discipline);
      } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(line_no) + ": " +
                              e.what());
      }
      have_header = true;
      continue;
    }
    if (line.starts_with('#')) continue;

    const auto fields = split_n(line, '\t', 5);
    if (fields.size() != 5) {
      throw FormatError(line_no,
                        "expected 5 tab-separated fields "
                        "(idx, start_ms, end_ms, speaker, text), got " +
                            std::to_string(fields.size()));
    }
    const std::size_t expected = transcript.utterances.size();
    const auto idx = parse_int(fields[0]);
    if (!idx || *idx != static_cast<std::int64_t>(expected)) {
      throw FormatError(line_no, "idx: expected " + std::to_string(expected) +
                                     ", got '" + std::string(fields[0]) + "'");
    }
    Utterance u;
    u.index = expected;
    u.start_ms = parse_timestamp(fields[1], line_no, "start_ms");
    u.end_ms = parse_timestamp(fields[2], line_no, "end_ms");
    if (u.start_ms && u.end_ms && *u.end_ms < *u.start_ms) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": end_ms is earlier than start_ms");
    }
    if (fields[3] != "-") u.speaker = std::string(fields[3]);
    u.text = std::string(fields[4]);
    transcript.utterances.push_back(std::move(u));
  }
  if (!have_header) throw FormatError(0, "transcript has no header line");
  return transcript;
}

std::string render_transcript(const Transcript& transcript) {
  std::string out = std::string(kSessionPrefix) + transcript.session_id + ' ' +
                    std::string(kDisciplinePrefix) +
                    std::string(discipline_name(transcript.discipline)) + '\n';
  for (const Utterance& u : transcript.utterances) {
    out += std::to_string(u.index) + '\t' + timestamp_field(u.start_ms) + '\t' +
           timestamp_field(u.end_ms) + '\t' +
           (u.speaker ? sanitize_field(*u.speaker) : std::string("-")) + '\t' +
           sanitize_text(u.text) + '\n';
  }
  return out;
}

std::string clean_text(std::string_view raw) {
  std::string spaced;
  spaced.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    // Typographic quotes and ellipsis (U+2018/2019, U+201C/201D, U+2026).
    if (c == 0xE2 && i + 2 < raw.size() &&
        static_cast<unsigned char>(raw[i + 1]) == 0x80) {
      const auto third = static_cast<unsigned char>(raw[i + 2]);
      if (third == 0x98 || third == 0x99) {
        spaced.push_back('\'');
        i += 2;
        continue;
      }
      if (third == 0x9C || third == 0x9D || third == 0xA6) {
        spaced.push_back(' ');
        i += 2;
        continue;
      }
    }
    switch (c) {
      case '.': case ',': case '?': case '!': case ';': case ':': case '"':
      case '\t': case '\n': case '\r': case '\f': case '\v':
        spaced.push_back(' ');
        break;
      default:
        spaced.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                                  : static_cast<char>(c));
    }
  }

  std::string out;
  out.reserve(spaced.size());
  for (std::string_view token : split(spaced, ' ')) {
    while (!token.empty() && token.front() == '\'') token.remove_prefix(1);
    while (!token.empty() && token.back() == '\'') token.remove_suffix(1);
    if (token.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  }
  return out;
}

void validate_annotations(const AnnotationSet& set,
                          const Transcript& transcript) {
  for (const Annotation& a : set.annotations) {
    const std::string where = "annotation " + set.doc_id + "/" +
                              set.annotator_id + " utterance " +
                              std::to_string(a.utterance_index) + " [" +
                              std::to_string(a.char_start) + ", " +
                              std::to_string(a.char_end) + ")";
    if (a.utterance_index >= transcript.utterances.size()) {
      throw ValidationError(where + ": no such utterance in '" +
                            transcript.session_id + "'");
    }
    if (a.char_start >= a.char_end) {
      throw ValidationError(where + ": empty span");
    }
    const std::size_t length =
        utf8_length(transcript.utterances[a.utterance_index].text);
    if (a.char_end > length) {
      throw ValidationError(where + ": span ends beyond utterance length " +
                            std::to_string(length));
    }
  }
}

GoldBuild build_gold_corpus(std::span<const Transcript> transcripts,
                            std::span<const AnnotationSet> annotations) {
  std::unordered_map<std::string, const Transcript*> by_session;
  for (const Transcript& t : transcripts) {
    if (!by_session.emplace(t.session_id, &t).second) {
      throw ValidationError("duplicate transcript session '" + t.session_id +
                            "'");
    }
  }

  GoldBuild build;
  std::unordered_set<std::string> ids;
  std::set<std::pair<std::string, std::size_t>> cued_utterances;
  for (const AnnotationSet& set : annotations) {
    const auto it = by_session.find(set.doc_id);
    if (it == by_session.end()) {
      throw ValidationError("annotations reference unknown document '" +
                            set.doc_id + "'");
    }
    const Transcript& transcript = *it->second;
    validate_annotations(set, transcript);
    for (const Annotation& a : set.annotations) {
      if (a.label == CueLabel::kNone) continue;
      GoldExample example;
      example.example_id = set.doc_id + ":" + std::to_string(a.utterance_index) +
                           ":" + std::to_string(a.char_start) + "-" +
                           std::to_string(a.char_end);
      example.text = clean_text(utf8_substr(
          transcript.utterances[a.utterance_index].text, a.char_start,
          a.char_end));
      example.label = a.label;
      example.discipline = transcript.discipline;
      example.session_id = transcript.session_id;
      if (example.text.empty()) {
        throw ValidationError("annotation " + example.example_id +
                              " covers no text after cleaning");
      }
      if (!ids.insert(example.example_id).second) {
        throw ValidationError("span " + example.example_id +
                              " is annotated more than once");
      }
      cued_utterances.emplace(set.doc_id, a.utterance_index);
      build.cued.examples.push_back(std::move(example));
    }
  }

  for (const Transcript& t : transcripts) {
    for (const Utterance& u : t.utterances) {
      if (cued_utterances.contains({t.session_id, u.index})) continue;
      std::string text = clean_text(u.text);
      if (text.empty()) continue;
      build.none_pool.push_back(GoldExample{
          t.session_id + ":" + std::to_string(u.index), std::move(text),
          CueLabel::kNone, t.discipline, t.session_id});
    }
  }
  return build;
}

BalanceResult balance_with_none(const Corpus& cued,
                                std::span<const GoldExample> none_pool,
                                std::uint64_t seed) {
  if (cued.count(CueLabel::kNone) != 0) {
    throw InvalidInputError("balance_with_none: cued corpus contains None examples");
  }
  const std::size_t k =
      std::max(cued.count(CueLabel::kGuided), cued.count(CueLabel::kDirected));

  BalanceResult result;
  result.corpus = cued;

  std::vector<std::size_t> chosen(none_pool.size());
  for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
  if (none_pool.size() < k) {
    result.warnings.push_back("none pool has " +
                              std::to_string(none_pool.size()) +
                              " candidates, fewer than the " +
                              std::to_string(k) +
                              " needed; using the whole pool");
  } else {
    // Partial Fisher-Yates: the first k slots are a uniform sample.
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(chosen[i], chosen[i + rng.uniform_index(chosen.size() - i)]);
    }
    chosen.resize(k);
    std::sort(chosen.begin(), chosen.end());
  }

  std::unordered_set<std::string> ids;
  for (const GoldExample& e : cued.examples) ids.insert(e.example_id);
  for (std::size_t i : chosen) {
    GoldExample e = none_pool[i];
    e.label = CueLabel::kNone;
    if (!ids.insert(e.example_id).second) {
      throw ValidationError("none pool example id '" + e.example_id +
                            "' collides with an existing example");
    }
    result.corpus.examples.push_back(std::move(e));
  }
  return result;
}

TranscriptSplit split_corpus(std::span<const Transcript> docs,
                             double train_fraction, std::uint64_t seed) {
  std::vector<Discipline> disciplines;
  disciplines.reserve(docs.size());
  for (const Transcript& t : docs) disciplines.push_back(t.discipline);
  const auto train = stratified_assignment(disciplines, train_fraction, seed);
  TranscriptSplit out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    (train[i] ? out.train : out.validation).push_back(docs[i]);
  }
  return out;
}

CorpusSplit split_corpus(const Corpus& corpus, double train_fraction,
                         std::uint64_t seed) {
  std::vector<std::string> sessions;
  std::vector<Discipline> disciplines;
  std::unordered_map<std::string, std::size_t> session_index;
  for (const GoldExample& e : corpus.examples) {
    const auto [it, inserted] =
        session_index.emplace(e.session_id, sessions.size());
    if (inserted) {
      sessions.push_back(e.session_id);
      disciplines.push_back(e.discipline);
    } else if (disciplines[it->second] != e.discipline) {
      throw ValidationError("session '" + e.session_id +
                            "' mixes disciplines");
    }
  }
  const auto train = stratified_assignment(disciplines, train_fraction, seed);
  CorpusSplit out;
  out.train.split_tag = SplitTag::kTrain;
  out.validation.split_tag = SplitTag::kValidation;
  for (const GoldExample& e : corpus.examples) {
    (train[session_index.at(e.session_id)] ? out.train : out.validation)
        .examples.push_back(e);
  }
  return out;
}

LengthStats length_stats(const Corpus& corpus,
                         std::span<const double> quantiles) {
  if (corpus.examples.empty()) {
    throw InvalidInputError("length_stats: empty corpus");
  }
  std::vector<std::size_t> words;
  words.reserve(corpus.examples.size());
  double total = 0.0;
  for (const GoldExample& e : corpus.examples) {
    words.push_back(tokenize(e.text).size());
    total += static_cast<double>(words.back());
  }
  std::sort(words.begin(), words.end());

  LengthStats stats;
  stats.count = words.size();
  stats.min_words = words.front();
  stats.max_words = words.back();
  stats.mean_words = total / static_cast<double>(words.size());
  const double n = static_cast<double>(words.size());
  for (double q : quantiles) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw InvalidInputError("quantile " + std::to_string(q) +
                              " outside [0, 1]");
    }
    // Small slack keeps e.g. 0.7 * 10 from rounding up to 8.
    auto needed = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
    needed = std::clamp<std::size_t>(needed, 1, words.size());
    stats.quantiles[q] = words[needed - 1];
  }
  return stats;
}

Corpus parse_corpus(std::string_view content) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  for (const auto& [line_no, line] : lines_of(content)) {
    if (trim(line).empty() || line.starts_with('#')) continue;
    const auto fields = split_n(line, '\t', 5);
    if (fields.size() != 5) {
      throw FormatError(line_no,
                        "expected 5 tab-separated fields "
                        "(example_id, label, discipline, session_id, text), got " +
                            std::to_string(fields.size()));
    }
    GoldExample e;
    e.example_id = std::string(trim(fields[0]));
    if (e.example_id.empty()) throw FormatError(line_no, "example_id: empty");
    try {
      e.label = parse_label(trim(fields[1]));
      e.discipline = parse_discipline(trim(fields[2]));
    } catch (const ValidationError& err) {
      throw FormatError(line_no, err.what());
    }
    e.session_id = std::string(trim(fields[3]));
    e.text = clean_text(fields[4]);
    if (!ids.insert(e.example_id).second) {
      throw FormatError(line_no, "duplicate example_id '" + e.example_id + "'");
    }
    corpus.examples.push_back(std::move(e));
  }
  return corpus;
}

std::string render_corpus(const Corpus& corpus) {
  std::string out;
  for (const GoldExample& e : corpus.examples) {
    out += e.example_id + '\t' + std::string(label_name(e.label)) + '\t' +
           std::string(discipline_name(e.discipline)) + '\t' + e.session_id +
           '\t' + sanitize_field(e.text) + '\n';
  }
  return out;
}

}  // namespace cuefid
