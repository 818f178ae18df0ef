#include "cuefid/labels.hpp"

#include <string>

#include "cuefid/error.hpp"

namespace cuefid {

std::string_view label_name(CueLabel label) {
  switch (label) {
    case CueLabel::kGuided:
      return "GUIDED";
    case CueLabel::kDirected:
      return "DIRECTED";
    case CueLabel::kNone:
      return "NONE";
  }
  return "NONE";
}

CueLabel parse_label(std::string_view name) {
  for (CueLabel label : kAllLabels) {
    if (name == label_name(label)) return label;
  }
  throw ValidationError("unknown label '" + std::string(name) +
                        "' (expected GUIDED, DIRECTED or NONE)");
}

std::string_view discipline_name(Discipline discipline) {
  switch (discipline) {
    case Discipline::kOT:
      return "OT";
    case Discipline::kPT:
      return "PT";
    case Discipline::kSLP:
      return "SLP";
  }
  return "OT";
}

Discipline parse_discipline(std::string_view name) {
  for (Discipline d : kAllDisciplines) {
    if (name == discipline_name(d)) return d;
  }
  throw ValidationError("unknown discipline '" + std::string(name) +
                        "' (expected OT, PT or SLP)");
}

}  // namespace cuefid
