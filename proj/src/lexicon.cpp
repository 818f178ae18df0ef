#include "cuefid/lexicon.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "cuefid/classify.hpp"
#include "cuefid/corpus.hpp"
#include "cuefid/error.hpp"
#include "cuefid/util.hpp"

namespace cuefid {

namespace {

constexpr std::uint32_t kNoNode = 0xffffffffu;
constexpr std::size_t kMaxExpansions = 1u << 16;

void check_token(std::string_view token) {
  if (token.empty()) throw FormatError(0, "empty token in pattern");
  if (token.find_first_of("()|?") != std::string_view::npos) {
    throw FormatError(0, "unexpected grammar character in token '" +
                             std::string(token) + "'");
  }
  if (clean_text(token) != token) {
    throw FormatError(0, "token '" + std::string(token) +
                             "' is not in cleaned form (lower case, no "
                             "punctuation)");
  }
}

void expand(const PatternTree& pattern, std::size_t atom,
            std::vector<std::string>& prefix,
            std::vector<std::vector<std::string>>& out) {
  if (atom == pattern.atoms.size()) {
    if (out.size() >= kMaxExpansions) {
      throw ValidationError("pattern '" + render_pattern(pattern) +
                            "' expands to too many token sequences");
    }
    out.push_back(prefix);
    return;
  }
  const PatternAtom& a = pattern.atoms[atom];
  if (a.optional) expand(pattern, atom + 1, prefix, out);
  for (const auto& alternative : a.alternatives) {
    const std::size_t mark = prefix.size();
    prefix.insert(prefix.end(), alternative.begin(), alternative.end());
    expand(pattern, atom + 1, prefix, out);
    prefix.resize(mark);
  }
}

}  // namespace

PatternTree parse_pattern(std::string_view text) {
  if (trim(text).empty()) throw FormatError(0, "empty pattern");
  if (text.front() == ' ' || text.back() == ' ' ||
      text.find("  ") != std::string_view::npos) {
    throw FormatError(0, "pattern tokens must be separated by single spaces");
  }

  PatternTree tree;
  std::size_t i = 0;
  while (i < text.size()) {
    PatternAtom atom;
    if (text[i] == '(') {
      const std::size_t close = text.find(')', i + 1);
      if (close == std::string_view::npos) {
        throw FormatError(0, "unbalanced alternation group: missing ')'");
      }
      const std::string_view inner = text.substr(i + 1, close - i - 1);
      if (inner.find('(') != std::string_view::npos) {
        throw FormatError(0, "nested groups are not supported");
      }
      for (std::string_view alt : split(inner, '|')) {
        if (alt.empty()) throw FormatError(0, "empty alternative in group");
        if (alt.front() == ' ' || alt.back() == ' ') {
          throw FormatError(0, "stray space inside group alternative");
        }
        std::vector<std::string> tokens;
        for (std::string_view token : split(alt, ' ')) {
          check_token(token);
          tokens.emplace_back(token);
        }
        atom.alternatives.push_back(std::move(tokens));
      }
      atom.group = true;
      i = close + 1;
      if (i < text.size() && text[i] == '?') {
        atom.optional = true;
        ++i;
      }
    } else if (text[i] == ')') {
      throw FormatError(0, "unbalanced ')'");
    } else {
      std::size_t end = text.find(' ', i);
      if (end == std::string_view::npos) end = text.size();
      std::string_view token = text.substr(i, end - i);
      if (token.size() > 1 && token.back() == '?') {
        atom.optional = true;
        token.remove_suffix(1);
      }
      check_token(token);
      atom.alternatives.push_back({std::string(token)});
      i = end;
    }
    if (i < text.size()) {
      if (text[i] != ' ') {
        throw FormatError(0, "expected a space after atom at column " +
                                 std::to_string(i + 1));
      }
      ++i;
    }
    tree.atoms.push_back(std::move(atom));
  }

  if (std::none_of(tree.atoms.begin(), tree.atoms.end(),
                   [](const PatternAtom& a) { return !a.optional; })) {
    throw FormatError(0, "pattern needs at least one required token");
  }
  return tree;
}

std::string render_pattern(const PatternTree& pattern) {
  std::string out;
  for (const PatternAtom& atom : pattern.atoms) {
    if (!out.empty()) out.push_back(' ');
    if (atom.group) out.push_back('(');
    for (std::size_t a = 0; a < atom.alternatives.size(); ++a) {
      if (a > 0) out.push_back('|');
      for (std::size_t t = 0; t < atom.alternatives[a].size(); ++t) {
        if (t > 0) out.push_back(' ');
        out += atom.alternatives[a][t];
      }
    }
    if (atom.group) out.push_back(')');
    if (atom.optional) out.push_back('?');
  }
  return out;
}

std::vector<LexiconEntry> parse_lexicon(std::string_view source) {
  std::vector<LexiconEntry> entries;
  std::unordered_map<std::string, std::size_t> first_line;
  for (const auto& [line_no, line] : lines_of(source)) {
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;

    const auto fields = split(line, '\t');
    if (fields.size() != 5 && fields.size() != 6) {
      throw FormatError(line_no,
                        "expected 5 tab-separated fields "
                        "(entry_id, priority, ^|-, pattern, LABEL), got " +
                            std::to_string(fields.size()));
    }
    LexiconEntry entry;
    entry.entry_id = std::string(trim(fields[0]));
    if (entry.entry_id.empty() ||
        entry.entry_id.find(' ') != std::string::npos) {
      throw FormatError(line_no, "entry_id must be a non-empty word");
    }
    const auto priority = parse_int(trim(fields[1]));
    if (!priority) {
      throw FormatError(line_no, "priority: expected an integer, got '" +
                                     std::string(fields[1]) + "'");
    }
    entry.priority = *priority;
    const std::string_view anchor = trim(fields[2]);
    if (anchor == "^") {
      entry.anchored = true;
    } else if (anchor != "-") {
      throw FormatError(line_no, "anchor flag must be '^' or '-', got '" +
                                     std::string(anchor) + "'");
    }
    try {
      entry.pattern = parse_pattern(trim(fields[3]));
      entry.label = parse_label(trim(fields[4]));
    } catch (const Error& e) {
      throw FormatError(line_no, e.what());
    }
    if (fields.size() == 6 && !trim(fields[5]).empty()) {
      entry.source_note = std::string(trim(fields[5]));
    }
    const auto [it, inserted] = first_line.emplace(entry.entry_id, line_no);
    if (!inserted) {
      throw FormatError(line_no, "duplicate entry_id '" + entry.entry_id +
                                     "' (first defined on line " +
                                     std::to_string(it->second) + ")");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string render_lexicon(std::span<const LexiconEntry> entries) {
  std::string out;
  for (const LexiconEntry& e : entries) {
    out += e.entry_id + '\t' + std::to_string(e.priority) + '\t' +
           (e.anchored ? "^" : "-") + '\t' + render_pattern(e.pattern) + '\t' +
           std::string(label_name(e.label));
    if (e.source_note) out += '\t' + *e.source_note;
    out += '\n';
  }
  return out;
}

bool match_precedes(const Match& a, const Match& b) {
  if (a.priority != b.priority) return a.priority > b.priority;
  if (a.span_length() != b.span_length()) {
    return a.span_length() > b.span_length();
  }
  if (a.start != b.start) return a.start < b.start;
  return a.entry_id < b.entry_id;
}

std::uint32_t CompiledLexicon::child(std::uint32_t node,
                                     std::string_view token) const {
  const auto& children = nodes_[node].children;
  const auto it = std::lower_bound(
      children.begin(), children.end(), token,
      [](const auto& edge, std::string_view t) { return edge.first < t; });
  if (it == children.end() || it->first != token) return kNoNode;
  return it->second;
}

std::vector<std::size_t> CompiledLexicon::accepting_entries(
    std::span<const std::string> tokens) const {
  std::uint32_t node = 0;
  for (const std::string& token : tokens) {
    node = child(node, token);
    if (node == kNoNode) return {};
  }
  return {nodes_[node].accepts.begin(), nodes_[node].accepts.end()};
}

std::vector<Match> CompiledLexicon::match_tokens(
    std::span<const std::string> tokens) const {
  std::vector<Match> matches;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    std::uint32_t node = 0;
    for (std::size_t pos = start; pos < tokens.size(); ++pos) {
      node = child(node, tokens[pos]);
      if (node == kNoNode) break;
      for (std::uint32_t e : nodes_[node].accepts) {
        const LexiconEntry& entry = entries_[e];
        if (entry.anchored && start > 0) continue;
        matches.push_back(
            Match{entry.entry_id, entry.label, start, pos + 1, entry.priority});
      }
    }
  }
  std::sort(matches.begin(), matches.end(), match_precedes);
  return matches;
}

CompiledLexicon compile_lexicon(std::vector<LexiconEntry> entries) {
  std::set<std::string> ids;
  std::map<std::tuple<bool, std::string, CueLabel, std::int64_t>, std::string>
      rules;
  for (const LexiconEntry& e : entries) {
    if (!ids.insert(e.entry_id).second) {
      throw ValidationError("duplicate entry_id '" + e.entry_id + "'");
    }
    const auto key =
        std::make_tuple(e.anchored, render_pattern(e.pattern), e.label, e.priority);
    const auto [it, inserted] = rules.emplace(key, e.entry_id);
    if (!inserted) {
      throw ValidationError("duplicate rule: entries '" + it->second +
                            "' and '" + e.entry_id +
                            "' have the same pattern, label and priority");
    }
  }

  CompiledLexicon lexicon;
  lexicon.nodes_.emplace_back();
  for (std::size_t e = 0; e < entries.size(); ++e) {
    std::vector<std::vector<std::string>> sequences;
    std::vector<std::string> prefix;
    expand(entries[e].pattern, 0, prefix, sequences);
    for (const auto& sequence : sequences) {
      std::uint32_t node = 0;
      for (const std::string& token : sequence) {
        auto& children = lexicon.nodes_[node].children;
        auto it = std::lower_bound(
            children.begin(), children.end(), token,
            [](const auto& edge, const std::string& t) { return edge.first < t; });
        if (it != children.end() && it->first == token) {
          node = it->second;
          continue;
        }
        const auto next = static_cast<std::uint32_t>(lexicon.nodes_.size());
        children.insert(it, {token, next});
        lexicon.nodes_.emplace_back();
        node = next;
      }
      auto& accepts = lexicon.nodes_[node].accepts;
      if (accepts.empty() || accepts.back() != e) {
        accepts.push_back(static_cast<std::uint32_t>(e));
      }
    }
  }

  std::vector<LexiconEntry> by_id = entries;
  std::sort(by_id.begin(), by_id.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) {
              return a.entry_id < b.entry_id;
            });
  lexicon.version_hash_ = sha256_hex(render_lexicon(by_id));
  lexicon.entries_ = std::move(entries);
  return lexicon;
}

std::vector<Match> match_utterance(const CompiledLexicon& lexicon,
                                   std::string_view text) {
  const std::vector<std::string> tokens = tokenize(text);
  return lexicon.match_tokens(tokens);
}

}  // namespace cuefid
