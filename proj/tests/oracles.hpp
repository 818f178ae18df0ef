#pragma once

// Independent reference implementations used only by the tests. None of
// these call into the code they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cuefid/labels.hpp"
#include "cuefid/lexicon.hpp"

namespace oracle {

// Every token sequence a pattern can produce, built by direct recursion over
// its atoms rather than through a trie.
inline void expand(const cuefid::PatternTree& p, std::size_t atom,
                   std::vector<std::string>& prefix,
                   std::vector<std::vector<std::string>>& out) {
  if (atom == p.atoms.size()) {
    out.push_back(prefix);
    return;
  }
  const auto& a = p.atoms[atom];
  if (a.optional) expand(p, atom + 1, prefix, out);
  for (const auto& alt : a.alternatives) {
    const std::size_t mark = prefix.size();
    prefix.insert(prefix.end(), alt.begin(), alt.end());
    expand(p, atom + 1, prefix, out);
    prefix.resize(mark);
  }
}

struct RefMatch {
  std::string entry_id;
  cuefid::CueLabel label;
  std::size_t start, end;
  std::int64_t priority;
};

// Tests every entry at every offset against every expansion.
inline std::vector<RefMatch> brute_force_matches(
    const std::vector<cuefid::LexiconEntry>& entries,
    const std::vector<std::string>& tokens) {
  std::vector<RefMatch> out;
  for (const auto& e : entries) {
    std::vector<std::vector<std::string>> seqs;
    std::vector<std::string> prefix;
    expand(e.pattern, 0, prefix, seqs);
    for (std::size_t start = 0; start < tokens.size(); ++start) {
      if (e.anchored && start != 0) break;
      std::vector<std::size_t> ends;
      for (const auto& s : seqs) {
        if (s.empty() || start + s.size() > tokens.size()) continue;
        if (std::equal(s.begin(), s.end(), tokens.begin() + start)) {
          ends.push_back(start + s.size());
        }
      }
      std::sort(ends.begin(), ends.end());
      ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
      for (std::size_t end : ends) out.push_back({e.entry_id, e.label, start, end, e.priority});
    }
  }
  std::sort(out.begin(), out.end(), [](const RefMatch& a, const RefMatch& b) {
    const auto key = [](const RefMatch& m) {
      return std::make_tuple(-m.priority, -static_cast<std::int64_t>(m.end - m.start),
                             m.start, m.entry_id);
    };
    return key(a) < key(b);
  });
  return out;
}

// F1 per class from raw counts, via 2TP / (2TP + FP + FN).
struct HandScores {
  std::array<double, 3> f1{};
  double macro = 0, weighted = 0, micro = 0, accuracy = 0;
};

inline HandScores hand_scores(const std::array<std::array<std::int64_t, 3>, 3>& m) {
  HandScores s;
  std::int64_t total = 0, diag = 0, tp_sum = 0, fp_sum = 0, fn_sum = 0;
  for (int g = 0; g < 3; ++g)
    for (int p = 0; p < 3; ++p) total += m[g][p];
  for (int c = 0; c < 3; ++c) {
    std::int64_t tp = m[c][c], fp = 0, fn = 0, support = 0;
    for (int k = 0; k < 3; ++k) {
      if (k != c) {
        fp += m[k][c];
        fn += m[c][k];
      }
      support += m[c][k];
    }
    const std::int64_t denom = 2 * tp + fp + fn;
    s.f1[c] = denom == 0 ? 0.0 : 2.0 * tp / denom;
    s.macro += s.f1[c] / 3.0;
    s.weighted += s.f1[c] * support;
    diag += tp;
    tp_sum += tp;
    fp_sum += fp;
    fn_sum += fn;
  }
  s.weighted /= total;
  s.micro = 2.0 * tp_sum / (2.0 * tp_sum + fp_sum + fn_sum);
  s.accuracy = static_cast<double>(diag) / total;
  return s;
}

// Nominal alpha by enumerating value pairs: within-unit disagreeing pairs
// weighted 1/(m-1) for Do, all cross pairs of the pooled values for De.
inline double pairwise_alpha(const std::vector<std::vector<int>>& units) {
  std::vector<int> pooled;
  double within = 0.0;
  for (const auto& u : units) {
    if (u.size() < 2) continue;
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        if (i != j && u[i] != u[j]) d += 1.0;
    within += d / static_cast<double>(u.size() - 1);
    pooled.insert(pooled.end(), u.begin(), u.end());
  }
  const double n = static_cast<double>(pooled.size());
  double across = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i)
    for (std::size_t j = 0; j < pooled.size(); ++j)
      if (i != j && pooled[i] != pooled[j]) across += 1.0;
  const double d_o = within / n;
  const double d_e = across / (n * (n - 1.0));
  return 1.0 - d_o / d_e;
}

// Small random lexicons over a narrow vocabulary so that matches are common.
inline std::vector<std::string> small_vocab() {
  return {"a", "b", "c", "d", "e", "f", "g", "h"};
}

inline std::string random_pattern(std::mt19937_64& gen) {
  const auto vocab = small_vocab();
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(gen() % n); };
  std::string out;
  const std::size_t atoms = 1 + pick(4);
  bool has_required = false;
  for (std::size_t i = 0; i < atoms; ++i) {
    if (!out.empty()) out += ' ';
    bool optional = pick(4) == 0;
    if (i + 1 == atoms && !has_required) optional = false;
    if (!optional) has_required = true;
    if (pick(3) == 0) {
      out += '(';
      const std::size_t alts = 2 + pick(2);
      for (std::size_t k = 0; k < alts; ++k) {
        if (k) out += '|';
        const std::size_t len = 1 + pick(2);
        for (std::size_t t = 0; t < len; ++t) {
          if (t) out += ' ';
          out += vocab[pick(vocab.size())];
        }
      }
      out += ')';
    } else {
      out += vocab[pick(vocab.size())];
    }
    if (optional) out += '?';
  }
  return out;
}

inline std::string random_lexicon_source(std::mt19937_64& gen, std::size_t entries) {
  static const char* labels[] = {"GUIDED", "DIRECTED", "NONE"};
  std::string src;
  std::set<std::string> rules;
  for (std::size_t i = 0; i < entries; ++i) {
    const std::string rule = std::to_string(gen() % 4 * 10) + "\t" +
                             (gen() % 3 == 0 ? "^" : "-") + "\t" + random_pattern(gen) +
                             "\t" + labels[gen() % 3];
    // Identical rules are rejected at compile time; keep the first.
    if (!rules.insert(rule).second) continue;
    src += "E" + std::to_string(i) + "\t" + rule + "\n";
  }
  return src;
}

}  // namespace oracle
