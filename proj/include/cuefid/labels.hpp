#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace cuefid {

// The closed three-way classification target. The enumerator order is the
// canonical label order used for matrix indices and argmax tie-breaking.
enum class CueLabel { kGuided = 0, kDirected = 1, kNone = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<CueLabel, kNumLabels> kAllLabels = {
    CueLabel::kGuided, CueLabel::kDirected, CueLabel::kNone};

constexpr std::size_t label_index(CueLabel label) {
  return static_cast<std::size_t>(label);
}

// "GUIDED", "DIRECTED", "NONE".
std::string_view label_name(CueLabel label);

// Accepts exactly the names produced by label_name(); throws ValidationError
// for anything else.
CueLabel parse_label(std::string_view name);

enum class Discipline { kOT = 0, kPT = 1, kSLP = 2 };

inline constexpr std::array<Discipline, 3> kAllDisciplines = {
    Discipline::kOT, Discipline::kPT, Discipline::kSLP};

std::string_view discipline_name(Discipline discipline);
Discipline parse_discipline(std::string_view name);

}  // namespace cuefid
