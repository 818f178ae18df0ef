#include "cuefid/annotation.hpp"

#include <map>
#include <utility>

#include "cuefid/error.hpp"
#include "cuefid/util.hpp"

namespace cuefid {

namespace {

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Byte offset of code point `n`, or text.size() when past the end.
std::size_t byte_offset(std::string_view text, std::size_t n) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_continuation(static_cast<unsigned char>(text[i]))) continue;
    if (seen == n) return i;
    ++seen;
  }
  return text.size();
}

std::size_t parse_offset(std::string_view field, std::size_t line,
                         const char* name) {
  const auto value = parse_int(trim(field));
  if (!value || *value < 0) {
    throw FormatError(line, std::string(name) +
                                ": expected a non-negative integer, got '" +
                                std::string(field) + "'");
  }
  return static_cast<std::size_t>(*value);
}

}  // namespace

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (char c : text) {
    if (!is_continuation(static_cast<unsigned char>(c))) ++n;
  }
  return n;
}

std::string_view utf8_substr(std::string_view text, std::size_t start,
                             std::size_t end) {
  const std::size_t b = byte_offset(text, start);
  const std::size_t e = byte_offset(text, end);
  if (e <= b) return {};
  return text.substr(b, e - b);
}

std::vector<AnnotationSet> parse_annotations(std::string_view content) {
  std::vector<AnnotationSet> sets;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& [line_no, line] : lines_of(content)) {
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 6) {
      throw FormatError(line_no,
                        "expected 6 tab-separated fields "
                        "(doc_id, annotator_id, utterance_index, char_start, "
                        "char_end, LABEL), got " +
                            std::to_string(fields.size()));
    }
    const std::string doc_id(trim(fields[0]));
    const std::string annotator(trim(fields[1]));
    if (doc_id.empty()) throw FormatError(line_no, "doc_id: empty");
    if (annotator.empty()) throw FormatError(line_no, "annotator_id: empty");

    Annotation a;
    a.utterance_index = parse_offset(fields[2], line_no, "utterance_index");
    a.char_start = parse_offset(fields[3], line_no, "char_start");
    a.char_end = parse_offset(fields[4], line_no, "char_end");
    if (a.char_start >= a.char_end) {
      throw FormatError(line_no, "char_start must be less than char_end");
    }
    try {
      a.label = parse_label(trim(fields[5]));
    } catch (const ValidationError& e) {
      throw FormatError(line_no, e.what());
    }

    const auto key = std::make_pair(doc_id, annotator);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, sets.size()).first;
      sets.push_back(AnnotationSet{doc_id, annotator, {}});
    }
    sets[it->second].annotations.push_back(a);
  }
  return sets;
}

std::string render_annotations(const std::vector<AnnotationSet>& sets) {
  std::string out;
  for (const AnnotationSet& set : sets) {
    for (const Annotation& a : set.annotations) {
      out += set.doc_id + '\t' + set.annotator_id + '\t' +
             std::to_string(a.utterance_index) + '\t' +
             std::to_string(a.char_start) + '\t' + std::to_string(a.char_end) +
             '\t' + std::string(label_name(a.label)) + '\n';
    }
  }
  return out;
}

}  // namespace cuefid
