#include "cuefid/agreement.hpp"

#include <algorithm>
#include <tuple>

#include "cuefid/error.hpp"
#include "cuefid/util.hpp"

namespace cuefid {

namespace {

bool overlaps(const Annotation& x, const Annotation& y) {
  return x.utterance_index == y.utterance_index &&
         std::max(x.char_start, y.char_start) < std::min(x.char_end, y.char_end);
}

std::string span_text(const std::optional<Annotation>& a) {
  if (!a) return "-";
  return std::to_string(a->char_start) + "-" + std::to_string(a->char_end);
}

Disagreement make_disagreement(const std::string& doc_id,
                               std::optional<Annotation> a,
                               std::optional<Annotation> b) {
  Disagreement d;
  d.doc_id = doc_id;
  d.utterance_index = a ? a->utterance_index : b->utterance_index;
  d.id = doc_id + ":" + std::to_string(d.utterance_index) + ":" + span_text(a) +
         "|" + span_text(b);
  d.a_span = a;
  d.b_span = b;
  return d;
}

// Label of the longest span on `utterance`, earliest start on ties.
CueLabel utterance_label(const AnnotationSet& set, std::size_t utterance) {
  const Annotation* best = nullptr;
  for (const Annotation& a : set.annotations) {
    if (a.utterance_index != utterance) continue;
    if (best == nullptr) {
      best = &a;
      continue;
    }
    const std::size_t len = a.char_end - a.char_start;
    const std::size_t best_len = best->char_end - best->char_start;
    if (len > best_len || (len == best_len && a.char_start < best->char_start)) {
      best = &a;
    }
  }
  return best ? best->label : CueLabel::kNone;
}

}  // namespace

bool passes_alpha_gate(double alpha, double threshold) { return alpha > threshold; }

AgreementResult krippendorff_alpha(std::span<const std::vector<int>> units,
                                   std::size_t num_categories,
                                   double threshold) {
  if (num_categories == 0) throw InvalidInputError("no categories");
  AgreementResult r;
  r.num_categories = num_categories;
  r.threshold = threshold;
  r.coincidence.assign(num_categories * num_categories, 0.0);

  std::vector<std::size_t> pair_counts(num_categories * num_categories);
  for (const std::vector<int>& unit : units) {
    for (int v : unit) {
      if (v < 0 || static_cast<std::size_t>(v) >= num_categories) {
        throw InvalidInputError("category value " + std::to_string(v) +
                                " out of range");
      }
    }
    const std::size_t m = unit.size();
    if (m < 2) continue;
    std::fill(pair_counts.begin(), pair_counts.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        ++pair_counts[static_cast<std::size_t>(unit[i]) * num_categories +
                      static_cast<std::size_t>(unit[j])];
      }
    }
    const double weight = 1.0 / static_cast<double>(m - 1);
    for (std::size_t k = 0; k < pair_counts.size(); ++k) {
      if (pair_counts[k] != 0) {
        r.coincidence[k] += static_cast<double>(pair_counts[k]) * weight;
      }
    }
    r.n_pairable_values += m;
  }
  if (r.n_pairable_values == 0) {
    throw InvalidInputError("no unit has two or more values; alpha undefined");
  }

  const double n = static_cast<double>(r.n_pairable_values);
  double off_diagonal = 0.0;
  double sum_sq_marginals = 0.0;
  for (std::size_t c = 0; c < num_categories; ++c) {
    double marginal = 0.0;
    for (std::size_t k = 0; k < num_categories; ++k) {
      const double o = r.coincidence_at(c, k);
      marginal += o;
      if (c != k) off_diagonal += o;
    }
    sum_sq_marginals += marginal * marginal;
  }
  r.observed_disagreement = off_diagonal / n;
  r.expected_disagreement = (n * n - sum_sq_marginals) / (n * (n - 1.0));
  if (r.expected_disagreement <= 0.0) {
    r.degenerate = true;
    r.passes_gate = true;
    return r;
  }
  r.alpha = 1.0 - r.observed_disagreement / r.expected_disagreement;
  r.passes_gate = passes_alpha_gate(*r.alpha, threshold);
  return r;
}

std::vector<std::vector<int>> utterance_units(const AnnotationSet& a,
                                              const AnnotationSet& b,
                                              std::size_t utterance_count) {
  if (a.doc_id != b.doc_id) {
    throw ValidationError("annotation sets cover different documents ('" +
                          a.doc_id + "' vs '" + b.doc_id + "')");
  }
  std::vector<std::vector<int>> units;
  units.reserve(utterance_count);
  for (std::size_t u = 0; u < utterance_count; ++u) {
    units.push_back({static_cast<int>(label_index(utterance_label(a, u))),
                     static_cast<int>(label_index(utterance_label(b, u)))});
  }
  return units;
}

std::vector<Disagreement> diff_annotations(const AnnotationSet& a,
                                           const AnnotationSet& b) {
  if (a.doc_id != b.doc_id) {
    throw ValidationError("cannot diff annotations of different documents ('" +
                          a.doc_id + "' vs '" + b.doc_id + "')");
  }
  std::vector<Disagreement> out;
  for (const Annotation& x : a.annotations) {
    bool any_overlap = false;
    for (const Annotation& y : b.annotations) {
      if (!overlaps(x, y)) continue;
      any_overlap = true;
      if (x.label != y.label) out.push_back(make_disagreement(a.doc_id, x, y));
    }
    if (!any_overlap) out.push_back(make_disagreement(a.doc_id, x, std::nullopt));
  }
  for (const Annotation& y : b.annotations) {
    const bool any_overlap =
        std::any_of(a.annotations.begin(), a.annotations.end(),
                    [&](const Annotation& x) { return overlaps(x, y); });
    if (!any_overlap) out.push_back(make_disagreement(a.doc_id, std::nullopt, y));
  }

  const auto key = [](const Disagreement& d) {
    const Annotation& first = d.a_span ? *d.a_span : *d.b_span;
    return std::make_tuple(d.utterance_index, first.char_start, first.char_end,
                           d.id);
  };
  std::sort(out.begin(), out.end(),
            [&](const Disagreement& x, const Disagreement& y) {
              return key(x) < key(y);
            });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Disagreement& x, const Disagreement& y) {
                          return x.id == y.id;
                        }),
            out.end());
  return out;
}

AnnotationSet merge_consensus(const AnnotationSet& a, const AnnotationSet& b,
                              const std::map<std::string, CueLabel>& resolutions) {
  const std::vector<Disagreement> disagreements = diff_annotations(a, b);
  std::string missing;
  for (const Disagreement& d : disagreements) {
    if (!resolutions.contains(d.id)) missing += (missing.empty() ? "" : ", ") + d.id;
  }
  if (!missing.empty()) {
    throw ValidationError("unresolved disagreements: " + missing);
  }

  AnnotationSet merged{a.doc_id, "consensus", {}};
  for (const Annotation& x : a.annotations) {
    const bool agreed =
        std::any_of(b.annotations.begin(), b.annotations.end(),
                    [&](const Annotation& y) {
                      return overlaps(x, y) && x.label == y.label;
                    });
    if (agreed) merged.annotations.push_back(x);
  }
  for (const Disagreement& d : disagreements) {
    Annotation span = d.a_span ? *d.a_span : *d.b_span;
    if (d.a_span && d.b_span) {
      span.char_start = std::min(d.a_span->char_start, d.b_span->char_start);
      span.char_end = std::max(d.a_span->char_end, d.b_span->char_end);
    }
    span.label = resolutions.at(d.id);
    merged.annotations.push_back(span);
  }

  const auto key = [](const Annotation& x) {
    return std::make_tuple(x.utterance_index, x.char_start, x.char_end,
                           label_index(x.label));
  };
  std::sort(merged.annotations.begin(), merged.annotations.end(),
            [&](const Annotation& x, const Annotation& y) { return key(x) < key(y); });
  merged.annotations.erase(
      std::unique(merged.annotations.begin(), merged.annotations.end()),
      merged.annotations.end());
  return merged;
}

std::map<std::string, CueLabel> parse_resolutions(std::string_view content) {
  std::map<std::string, CueLabel> out;
  for (const auto& [line_no, line] : lines_of(content)) {
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw FormatError(line_no, "expected 'disagreement_id<TAB>LABEL'");
    }
    const std::string id(trim(fields[0]));
    if (id.empty()) throw FormatError(line_no, "disagreement_id: empty");
    CueLabel label;
    try {
      label = parse_label(trim(fields[1]));
    } catch (const ValidationError& e) {
      throw FormatError(line_no, e.what());
    }
    if (!out.emplace(id, label).second) {
      throw FormatError(line_no, "duplicate resolution for '" + id + "'");
    }
  }
  return out;
}

}  // namespace cuefid
