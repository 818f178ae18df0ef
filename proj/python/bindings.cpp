#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cuefid/agreement.hpp"
#include "cuefid/classify.hpp"
#include "cuefid/cli.hpp"
#include "cuefid/corpus.hpp"
#include "cuefid/error.hpp"
#include "cuefid/evaluate.hpp"
#include "cuefid/lexicon.hpp"
#include "cuefid/util.hpp"

namespace py = pybind11;
using namespace cuefid;

namespace {

std::vector<CueLabel> labels_from(const std::vector<std::string>& names) {
  std::vector<CueLabel> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(parse_label(n));
  return out;
}

}  // namespace

PYBIND11_MODULE(_cuefid, m) {
  m.doc() = "Verbal-cue classification, agreement and evaluation";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "CuefidError", PyExc_ValueError);

  py::enum_<CueLabel>(m, "CueLabel")
      .value("GUIDED", CueLabel::kGuided)
      .value("DIRECTED", CueLabel::kDirected)
      .value("NONE", CueLabel::kNone);

  m.def("clean_text", &clean_text, py::arg("raw"));
  m.def("tokenize", &tokenize, py::arg("text"));

  py::class_<Match>(m, "Match")
      .def_readonly("entry_id", &Match::entry_id)
      .def_readonly("label", &Match::label)
      .def_readonly("start", &Match::start)
      .def_readonly("end", &Match::end)
      .def_readonly("priority", &Match::priority)
      .def("__repr__", [](const Match& x) {
        return "<Match " + x.entry_id + " " + std::string(label_name(x.label)) + " [" +
               std::to_string(x.start) + "," + std::to_string(x.end) + ")>";
      });

  py::class_<CompiledLexicon>(m, "Lexicon")
      .def_static("from_source",
                  [](const std::string& source) { return compile_lexicon(parse_lexicon(source)); },
                  py::arg("source"))
      .def_static("from_file",
                  [](const std::string& path) {
                    return compile_lexicon(parse_lexicon(read_file(path)));
                  },
                  py::arg("path"))
      .def_property_readonly("version_hash", &CompiledLexicon::version_hash)
      .def("__len__", [](const CompiledLexicon& l) { return l.entries().size(); })
      .def("match", [](const CompiledLexicon& l, const std::string& text) {
             return match_utterance(l, text);
           }, py::arg("text"))
      // Returns (label name, matched entry id or None).
      .def("classify", [](const CompiledLexicon& l, const std::string& text) {
             const Prediction p = rule_classify(l, text);
             return py::make_tuple(std::string(label_name(p.label)), p.matched_entry);
           }, py::arg("text"));

  m.def("krippendorff_alpha",
        [](const std::vector<std::vector<int>>& units, std::size_t categories, double threshold) {
          const AgreementResult r = krippendorff_alpha(units, categories, threshold);
          py::dict d;
          d["alpha"] = r.alpha ? py::object(py::float_(*r.alpha)) : py::object(py::none());
          d["degenerate"] = r.degenerate;
          d["n_pairable_values"] = r.n_pairable_values;
          d["observed_disagreement"] = r.observed_disagreement;
          d["expected_disagreement"] = r.expected_disagreement;
          d["passes_gate"] = r.passes_gate;
          return d;
        },
        py::arg("units"), py::arg("categories") = kNumLabels,
        py::arg("threshold") = kDefaultAlphaThreshold);

  m.def("averaged_f1",
        [](const std::vector<std::string>& gold, const std::vector<std::string>& pred,
           const std::string& mode) {
          return averaged_f1(confusion(labels_from(gold), labels_from(pred)),
                             parse_average_mode(mode));
        },
        py::arg("gold"), py::arg("pred"), py::arg("mode") = "macro");

  // Runs the command-line tool in-process; returns (status, stdout, stderr).
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = run_cli(args, out, err);
    return py::make_tuple(status, out.str(), err.str());
  }, py::arg("args"));
}
