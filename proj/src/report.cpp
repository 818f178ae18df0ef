#include "cuefid/report.hpp"

#include <cstdio>
#include <functional>
#include <nlohmann/json.hpp>

#include "cuefid/error.hpp"

namespace cuefid {

namespace {

using nlohmann::json;

struct Labeled {
  CueLabel label;
  std::string source;
};

FidelityReport assess_with(const Transcript& transcript,
                           const std::function<Labeled(const Utterance&,
                                                       const std::string&)>& label_of) {
  if (transcript.utterances.empty()) {
    throw InvalidInputError("transcript '" + transcript.session_id +
                            "' has no utterances");
  }
  FidelityReport report;
  report.session_id = transcript.session_id;
  report.discipline = transcript.discipline;

  bool all_timed = true;
  for (const Utterance& u : transcript.utterances) {
    const std::string cleaned = clean_text(u.text);
    Labeled result = cleaned.empty() ? Labeled{CueLabel::kNone, "empty"}
                                     : label_of(u, cleaned);
    CueInstance instance{u.index, result.label, std::move(result.source),
                         u.text, u.start_ms, u.end_ms};
    ++report.counts[label_index(instance.label)];
    if (const auto d = instance.duration_ms()) {
      report.cue_duration_ms[label_index(instance.label)] += *d;
    } else {
      all_timed = false;
    }
    report.cue_instances.push_back(std::move(instance));
  }

  if (all_timed) {
    const std::int64_t duration = *transcript.utterances.back().end_ms -
                                  *transcript.utterances.front().start_ms;
    report.session_duration_ms = std::max<std::int64_t>(duration, 0);
    if (*report.session_duration_ms > 0) {
      const double minutes = static_cast<double>(*report.session_duration_ms) / 60000.0;
      std::array<double, kNumLabels> freq{};
      for (std::size_t c = 0; c < kNumLabels; ++c) {
        freq[c] = static_cast<double>(report.counts[c]) / minutes;
      }
      report.frequency_per_minute = freq;
    }
  }
  return report;
}

template <typename T>
json per_label(const std::array<T, kNumLabels>& values) {
  json out = json::object();
  for (CueLabel label : kAllLabels) {
    out[std::string(label_name(label))] = values[label_index(label)];
  }
  return out;
}

template <typename T>
std::array<T, kNumLabels> per_label_from(const json& j) {
  std::array<T, kNumLabels> out{};
  for (CueLabel label : kAllLabels) {
    out[label_index(label)] = j.at(std::string(label_name(label))).get<T>();
  }
  return out;
}

std::string clock(std::int64_t ms) {
  char buf[32];
  const std::int64_t s = ms / 1000;
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%03lld",
                static_cast<long long>(s / 3600),
                static_cast<long long>((s / 60) % 60),
                static_cast<long long>(s % 60),
                static_cast<long long>(ms % 1000));
  return buf;
}

std::string padded(std::string_view label) {
  std::string out(label);
  out.resize(10, ' ');
  return out;
}

}  // namespace

std::string utterance_key(std::string_view session_id, std::size_t index) {
  return std::string(session_id) + ":" + std::to_string(index);
}

FidelityReport assess_session(const Transcript& transcript,
                              const Classifier& classifier) {
  const std::string tag = classifier.classifier_id();
  FidelityReport report = assess_with(
      transcript, [&](const Utterance&, const std::string& cleaned) {
        Prediction p = classifier.classify(cleaned);
        return Labeled{p.label, p.matched_entry ? *p.matched_entry : tag};
      });
  report.classifier_id = tag;
  report.version_hash = classifier.version_hash();
  return report;
}

FidelityReport assess_session(const Transcript& transcript,
                              const PredictionMap& predictions,
                              const std::string& version_hash) {
  std::string missing;
  for (const Utterance& u : transcript.utterances) {
    const std::string key = utterance_key(transcript.session_id, u.index);
    if (!predictions.contains(key)) missing += (missing.empty() ? "" : ", ") + key;
  }
  if (!missing.empty()) {
    throw ValidationError("no prediction for utterances: " + missing);
  }
  FidelityReport report = assess_with(
      transcript, [&](const Utterance& u, const std::string&) {
        return Labeled{predictions.at(utterance_key(transcript.session_id, u.index)),
                       "predictions"};
      });
  report.classifier_id = "predictions";
  report.version_hash = version_hash;
  return report;
}

std::string render_report(const FidelityReport& report, ReportFormat format) {
  if (format == ReportFormat::kStructured) {
    json doc;
    doc["session_id"] = report.session_id;
    doc["discipline"] = discipline_name(report.discipline);
    doc["classifier_id"] = report.classifier_id;
    doc["version_hash"] = report.version_hash;
    doc["counts"] = per_label(report.counts);
    doc["cue_duration_ms"] = per_label(report.cue_duration_ms);
    if (report.session_duration_ms) {
      doc["session_duration_ms"] = *report.session_duration_ms;
    }
    if (report.frequency_per_minute) {
      doc["frequency_per_minute"] = per_label(*report.frequency_per_minute);
    }
    json instances = json::array();
    for (const CueInstance& c : report.cue_instances) {
      json item = {{"utterance_index", c.utterance_index},
                   {"label", label_name(c.label)},
                   {"source", c.source},
                   {"text", c.text}};
      if (c.start_ms) item["start_ms"] = *c.start_ms;
      if (c.end_ms) item["end_ms"] = *c.end_ms;
      instances.push_back(std::move(item));
    }
    doc["cue_instances"] = std::move(instances);
    return doc.dump(2) + "\n";
  }

  std::string out;
  char buf[128];
  out += "Fidelity report: session " + report.session_id + " (" +
         std::string(discipline_name(report.discipline)) + ")\n";
  out += "Classifier: " + report.classifier_id;
  if (!report.version_hash.empty()) out += " [" + report.version_hash + "]";
  out += "\nUtterances assessed: " + std::to_string(report.cue_instances.size()) + "\n\n";

  out += "Counts\n";
  for (CueLabel label : kAllLabels) {
    out += "  " + padded(label_name(label)) +
           std::to_string(report.counts[label_index(label)]) + "\n";
  }
  if (report.session_duration_ms) {
    std::snprintf(buf, sizeof buf, "\nSession duration: %.2f min\n",
                  static_cast<double>(*report.session_duration_ms) / 60000.0);
    out += buf;
  }
  if (report.frequency_per_minute) {
    out += "\nFrequency per minute\n";
    for (CueLabel label : kAllLabels) {
      std::snprintf(buf, sizeof buf, "%.3f",
                    (*report.frequency_per_minute)[label_index(label)]);
      out += "  " + padded(label_name(label)) + buf + "\n";
    }
    out += "\nCue duration (s)\n";
    for (CueLabel label : kAllLabels) {
      std::snprintf(buf, sizeof buf, "%.3f",
                    static_cast<double>(report.cue_duration_ms[label_index(label)]) / 1000.0);
      out += "  " + padded(label_name(label)) + buf + "\n";
    }
  }

  for (CueLabel label : {CueLabel::kGuided, CueLabel::kDirected}) {
    out += std::string("\n") +
           (label == CueLabel::kGuided ? "Guided cues\n" : "Directed cues\n");
    bool any = false;
    for (const CueInstance& c : report.cue_instances) {
      if (c.label != label) continue;
      any = true;
      out += "  [" + std::to_string(c.utterance_index) + "] ";
      if (c.start_ms && c.end_ms) {
        out += clock(*c.start_ms) + "-" + clock(*c.end_ms) + " ";
      }
      out += c.text + "  (" + c.source + ")\n";
    }
    if (!any) out += "  (none)\n";
  }
  return out;
}

FidelityReport parse_report(std::string_view structured) {
  json doc;
  try {
    doc = json::parse(structured);
  } catch (const json::exception& e) {
    throw FormatError(0, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    FidelityReport report;
    report.session_id = doc.at("session_id").get<std::string>();
    report.discipline = parse_discipline(doc.at("discipline").get<std::string>());
    report.classifier_id = doc.at("classifier_id").get<std::string>();
    report.version_hash = doc.at("version_hash").get<std::string>();
    report.counts = per_label_from<std::int64_t>(doc.at("counts"));
    report.cue_duration_ms = per_label_from<std::int64_t>(doc.at("cue_duration_ms"));
    if (doc.contains("session_duration_ms")) {
      report.session_duration_ms = doc.at("session_duration_ms").get<std::int64_t>();
    }
    if (doc.contains("frequency_per_minute")) {
      report.frequency_per_minute =
          per_label_from<double>(doc.at("frequency_per_minute"));
    }
    for (const json& item : doc.at("cue_instances")) {
      CueInstance c;
      c.utterance_index = item.at("utterance_index").get<std::size_t>();
      c.label = parse_label(item.at("label").get<std::string>());
      c.source = item.at("source").get<std::string>();
      c.text = item.at("text").get<std::string>();
      if (item.contains("start_ms")) c.start_ms = item.at("start_ms").get<std::int64_t>();
      if (item.contains("end_ms")) c.end_ms = item.at("end_ms").get<std::int64_t>();
      report.cue_instances.push_back(std::move(c));
    }
    return report;
  } catch (const json::exception& e) {
    throw FormatError(0, std::string("malformed report: ") + e.what());
  }
}

}  // namespace cuefid
