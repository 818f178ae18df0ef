#include "cuefid/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>

#include "cuefid/agreement.hpp"
#include "cuefid/classify.hpp"
#include "cuefid/corpus.hpp"
#include "cuefid/error.hpp"
#include "cuefid/evaluate.hpp"
#include "cuefid/lexicon.hpp"
#include "cuefid/report.hpp"
#include "cuefid/util.hpp"

namespace cuefid {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Records what a run read and which seeds it used, for --manifest.
class RunContext {
 public:
  RunContext(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err)
      : args_(args), out(out), err(err) {}

  std::string read(const std::string& path) {
    std::string content = read_file(path);
    inputs_[path] = sha256_hex(content);
    return content;
  }

  void write(const std::string& path, std::string_view content) {
    write_file(path, content);
    outputs_.push_back(path);
  }

  // Writes to `path`, or to `out` when the path is empty.
  void emit(const std::string& path, std::string_view content) {
    if (path.empty()) {
      out << content;
    } else {
      write(path, content);
    }
  }

  void record_seed(const std::string& name, std::uint64_t seed) { seeds_[name] = seed; }

  std::string manifest() const {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    json doc;
    doc["command_line"] = args_;
    doc["inputs"] = inputs_;
    doc["outputs"] = outputs_;
    doc["seeds"] = seeds_;
    doc["versions"] = {{"cuefid", kVersion}};
    doc["timestamp"] = stamp;
    return doc.dump(2) + "\n";
  }

 private:
  std::vector<std::string> args_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::string> outputs_;
  std::map<std::string, std::uint64_t> seeds_;

 public:
  std::ostream& out;
  std::ostream& err;
};

bool looks_like_transcript(std::string_view content) {
  for (const auto& [line_no, line] : lines_of(content)) {
    const std::string_view t = trim(line);
    if (t.empty()) continue;
    return t.starts_with("#session=");
  }
  return false;
}

CompiledLexicon load_lexicon(RunContext& ctx, const std::string& path) {
  try {
    return compile_lexicon(parse_lexicon(ctx.read(path)));
  } catch (const Error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::vector<Transcript> load_transcripts(RunContext& ctx, const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename().string().starts_with('.')) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Transcript> transcripts;
  for (const fs::path& file : files) {
    try {
      transcripts.push_back(parse_transcript(ctx.read(file.string())));
    } catch (const Error& e) {
      throw ValidationError(file.string() + ": " + e.what());
    }
  }
  return transcripts;
}

template <typename T, typename F>
T parse_file(const std::string& path, const std::string& content, F&& parser) {
  try {
    return parser(content);
  } catch (const Error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// Labels every classifiable unit of a corpus or transcript input.
std::vector<std::pair<std::string, CueLabel>> classify_input(
    const std::string& path, const std::string& content,
    const std::function<CueLabel(const std::string&)>& label_of) {
  std::vector<std::pair<std::string, CueLabel>> out;
  if (looks_like_transcript(content)) {
    const Transcript t = parse_file<Transcript>(path, content, parse_transcript);
    for (const Utterance& u : t.utterances) {
      const std::string cleaned = clean_text(u.text);
      out.emplace_back(utterance_key(t.session_id, u.index),
                       cleaned.empty() ? CueLabel::kNone : label_of(cleaned));
    }
  } else {
    const Corpus corpus = parse_file<Corpus>(path, content, parse_corpus);
    for (const GoldExample& e : corpus.examples) {
      out.emplace_back(e.example_id,
                       e.text.empty() ? CueLabel::kNone : label_of(e.text));
    }
  }
  return out;
}

LabelCounts parse_counts(const std::string& spec) {
  LabelCounts counts;
  for (std::string_view part : split(spec, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto kv = split(part, ':');
    const auto n = kv.size() == 2 ? parse_int(trim(kv[1])) : std::nullopt;
    if (!n || *n < 0) {
      throw InvalidInputError("--counts: expected G:N,D:N,N:N, got '" + spec + "'");
    }
    const std::string_view key = trim(kv[0]);
    const auto value = static_cast<std::size_t>(*n);
    if (key == "G" || key == "GUIDED") {
      counts.guided = value;
    } else if (key == "D" || key == "DIRECTED") {
      counts.directed = value;
    } else if (key == "N" || key == "NONE") {
      counts.none = value;
    } else {
      throw InvalidInputError("--counts: unknown label '" + std::string(key) + "'");
    }
  }
  return counts;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (std::string_view part : split(text, ',')) {
    part = trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

json agreement_json(const AgreementResult& r) {
  json doc;
  doc["alpha"] = r.alpha ? json(*r.alpha) : json(nullptr);
  doc["degenerate"] = r.degenerate;
  doc["n_pairable_values"] = r.n_pairable_values;
  doc["observed_disagreement"] = r.observed_disagreement;
  doc["expected_disagreement"] = r.expected_disagreement;
  doc["threshold"] = r.threshold;
  doc["passes_gate"] = r.passes_gate;
  json matrix = json::array();
  for (std::size_t c = 0; c < r.num_categories; ++c) {
    json row = json::array();
    for (std::size_t k = 0; k < r.num_categories; ++k) row.push_back(r.coincidence_at(c, k));
    matrix.push_back(std::move(row));
  }
  doc["coincidence"] = std::move(matrix);
  return doc;
}

std::map<std::string, const AnnotationSet*> index_by_doc(
    const std::vector<AnnotationSet>& sets, const std::string& path) {
  std::map<std::string, const AnnotationSet*> out;
  for (const AnnotationSet& s : sets) {
    if (!out.emplace(s.doc_id, &s).second) {
      throw ValidationError(path + ": document '" + s.doc_id +
                            "' has more than one annotator");
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Verbal-cue fidelity assessment toolkit", "cuefid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Write a run manifest (inputs, seeds, versions)");

  // clean
  std::string clean_in, clean_out;
  auto* clean = app.add_subcommand("clean", "Clean utterance text of a transcript");
  clean->add_option("transcript", clean_in)->required();
  clean->add_option("-o,--out", clean_out)->required();

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Build, balance, split and describe corpora");
  corpus->require_subcommand(1);

  std::string build_dir, build_annotations, build_out, build_pool;
  auto* build = corpus->add_subcommand("build", "Gold corpus from transcripts and annotations");
  build->add_option("--transcripts", build_dir)->required();
  build->add_option("--annotations", build_annotations)->required();
  build->add_option("-o,--out", build_out)->required();
  build->add_option("--pool", build_pool, "Write the none-pool (unannotated utterances)");

  std::string balance_in, balance_pool, balance_out;
  std::uint64_t balance_seed = 0;
  auto* balance = corpus->add_subcommand("balance", "Add a balanced sample of None examples");
  balance->add_option("--in", balance_in)->required();
  balance->add_option("--pool", balance_pool)->required();
  balance->add_option("--seed", balance_seed)->required();
  balance->add_option("-o,--out", balance_out)->required();

  std::string split_in, split_train, split_validation;
  double split_fraction = 0.7;
  std::uint64_t split_seed = 0;
  auto* split_cmd = corpus->add_subcommand("split", "Per-discipline split by session");
  split_cmd->add_option("--in", split_in)->required();
  split_cmd->add_option("--fraction", split_fraction)->capture_default_str();
  split_cmd->add_option("--seed", split_seed)->required();
  split_cmd->add_option("--train", split_train)->required();
  split_cmd->add_option("--validation", split_validation)->required();

  std::string stats_in, stats_out, stats_quantiles = "0.5,0.75,0.9";
  auto* stats = corpus->add_subcommand("stats", "Word-length statistics");
  stats->add_option("--in", stats_in)->required();
  stats->add_option("--quantiles", stats_quantiles)->capture_default_str();
  stats->add_option("-o,--out", stats_out);

  std::string synth_lexicon, synth_counts = "G:50,D:50,N:50", synth_out;
  double synth_noise = 0.0;
  std::uint64_t synth_seed = 0;
  auto* synth = corpus->add_subcommand("synth", "Synthetic labeled corpus from a lexicon");
  synth->add_option("--lexicon", synth_lexicon)->required();
  synth->add_option("--counts", synth_counts)->capture_default_str();
  synth->add_option("--noise", synth_noise)->capture_default_str();
  synth->add_option("--seed", synth_seed)->required();
  synth->add_option("-o,--out", synth_out)->required();

  // lexicon
  auto* lexicon = app.add_subcommand("lexicon", "Lexicon tools");
  lexicon->require_subcommand(1);
  std::string check_path;
  auto* check = lexicon->add_subcommand("check", "Parse and compile a lexicon file");
  check->add_option("file", check_path)->required();

  // classify
  auto* classify = app.add_subcommand("classify", "Label a corpus or transcript");
  classify->require_subcommand(1);
  std::string rule_lexicon, rule_in, rule_out;
  auto* rule = classify->add_subcommand("rule", "Rule classifier");
  rule->add_option("--lexicon", rule_lexicon)->required();
  rule->add_option("--in", rule_in)->required();
  rule->add_option("-o,--out", rule_out)->required();
  std::string model_path, model_in, model_out;
  auto* model_cmd = classify->add_subcommand("model", "Trained baseline model");
  model_cmd->add_option("--model", model_path)->required();
  model_cmd->add_option("--in", model_in)->required();
  model_cmd->add_option("-o,--out", model_out)->required();

  // train
  std::string train_corpus, train_out;
  Hyperparameters hp;
  std::uint64_t train_seed = 0;
  auto* train = app.add_subcommand("train", "Train the baseline classifier");
  train->add_option("--corpus", train_corpus)->required();
  train->add_option("--epochs", hp.epochs)->capture_default_str();
  train->add_option("--batch", hp.batch_size)->capture_default_str();
  train->add_option("--lr", hp.learning_rate)->capture_default_str();
  train->add_option("--l2", hp.l2_penalty)->capture_default_str();
  train->add_option("--min-frequency", hp.min_frequency)->capture_default_str();
  train->add_option("--max-length", hp.max_sequence_length)->capture_default_str();
  train->add_option("--seed", train_seed)->required();
  train->add_option("-o,--out", train_out)->required();

  // agreement
  std::string agree_a, agree_b, agree_transcripts, agree_out, agree_disagreements;
  std::optional<double> min_alpha;
  auto* agreement = app.add_subcommand("agreement", "Krippendorff's alpha between two annotators");
  agreement->add_option("--a", agree_a)->required();
  agreement->add_option("--b", agree_b)->required();
  agreement->add_option("--min-alpha", min_alpha, "Fail (exit 1) unless alpha exceeds this");
  agreement->add_option("--transcripts", agree_transcripts,
                        "Transcript directory; sets utterance counts and disciplines");
  agreement->add_option("-o,--out", agree_out);
  agreement->add_option("--disagreements", agree_disagreements,
                        "Write the disagreement list");

  // consensus
  std::string cons_a, cons_b, cons_resolutions, cons_out;
  auto* consensus = app.add_subcommand("consensus", "Merge two annotation files with resolutions");
  consensus->add_option("--a", cons_a)->required();
  consensus->add_option("--b", cons_b)->required();
  consensus->add_option("--resolutions", cons_resolutions)->required();
  consensus->add_option("-o,--out", cons_out)->required();

  // evaluate
  std::string eval_gold, eval_pred, eval_mode = "macro", eval_out;
  bool by_discipline = false;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against a gold corpus");
  evaluate_cmd->add_option("--gold", eval_gold)->required();
  evaluate_cmd->add_option("--pred", eval_pred)->required();
  evaluate_cmd->add_option("--mode", eval_mode)
      ->check(CLI::IsMember({"macro", "micro", "weighted"}))
      ->capture_default_str();
  evaluate_cmd->add_flag("--by-discipline", by_discipline);
  evaluate_cmd->add_option("-o,--out", eval_out);

  // report
  std::string rep_transcript, rep_lexicon, rep_model, rep_pred, rep_out,
      rep_format = "structured";
  auto* report = app.add_subcommand("report", "Per-session fidelity report");
  report->add_option("--transcript", rep_transcript)->required();
  auto* rep_lex_opt = report->add_option("--lexicon", rep_lexicon);
  auto* rep_model_opt = report->add_option("--model", rep_model);
  auto* rep_pred_opt = report->add_option("--pred", rep_pred);
  rep_lex_opt->excludes(rep_model_opt)->excludes(rep_pred_opt);
  rep_model_opt->excludes(rep_pred_opt);
  report->add_option("-o,--out", rep_out);
  report->add_option("--format", rep_format)
      ->check(CLI::IsMember({"structured", "text"}))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (report->parsed() && rep_lexicon.empty() && rep_model.empty() && rep_pred.empty()) {
    err << "report: one of --lexicon, --model or --pred is required\n";
    return kExitUsage;
  }

  RunContext ctx(args, out, err);
  int status = kExitOk;
  try {
    if (clean->parsed()) {
      Transcript t = parse_file<Transcript>(clean_in, ctx.read(clean_in), parse_transcript);
      for (Utterance& u : t.utterances) u.text = clean_text(u.text);
      ctx.write(clean_out, render_transcript(t));

    } else if (build->parsed()) {
      const auto transcripts = load_transcripts(ctx, build_dir);
      const auto sets = parse_file<std::vector<AnnotationSet>>(
          build_annotations, ctx.read(build_annotations), parse_annotations);
      index_by_doc(sets, build_annotations);
      const GoldBuild gold = build_gold_corpus(transcripts, sets);
      ctx.write(build_out, render_corpus(gold.cued));
      if (!build_pool.empty()) {
        ctx.write(build_pool, render_corpus(Corpus{gold.none_pool, SplitTag::kUnsplit}));
      }
      err << "built " << gold.cued.examples.size() << " cue examples ("
          << gold.cued.count(CueLabel::kGuided) << " guided, "
          << gold.cued.count(CueLabel::kDirected) << " directed); none pool "
          << gold.none_pool.size() << "\n";

    } else if (balance->parsed()) {
      ctx.record_seed("balance", balance_seed);
      const Corpus cued = parse_file<Corpus>(balance_in, ctx.read(balance_in), parse_corpus);
      const Corpus pool = parse_file<Corpus>(balance_pool, ctx.read(balance_pool), parse_corpus);
      const BalanceResult result = balance_with_none(cued, pool.examples, balance_seed);
      for (const std::string& w : result.warnings) err << "warning: " << w << "\n";
      ctx.write(balance_out, render_corpus(result.corpus));

    } else if (split_cmd->parsed()) {
      ctx.record_seed("split", split_seed);
      const Corpus c = parse_file<Corpus>(split_in, ctx.read(split_in), parse_corpus);
      const CorpusSplit s = split_corpus(c, split_fraction, split_seed);
      ctx.write(split_train, render_corpus(s.train));
      ctx.write(split_validation, render_corpus(s.validation));

    } else if (stats->parsed()) {
      const Corpus c = parse_file<Corpus>(stats_in, ctx.read(stats_in), parse_corpus);
      std::vector<double> qs;
      const std::vector<std::string> names = split_list(stats_quantiles);
      for (const std::string& q : names) {
        const auto v = parse_double(q);
        if (!v) throw InvalidInputError("--quantiles: '" + q + "' is not a number");
        qs.push_back(*v);
      }
      const LengthStats ls = length_stats(c, qs);
      json doc;
      doc["count"] = ls.count;
      doc["min_words"] = ls.min_words;
      doc["max_words"] = ls.max_words;
      doc["mean_words"] = ls.mean_words;
      json quantiles = json::object();
      for (std::size_t i = 0; i < names.size(); ++i) quantiles[names[i]] = ls.quantiles.at(qs[i]);
      doc["quantiles"] = std::move(quantiles);
      ctx.emit(stats_out, doc.dump(2) + "\n");

    } else if (synth->parsed()) {
      ctx.record_seed("synth", synth_seed);
      const CompiledLexicon lex = load_lexicon(ctx, synth_lexicon);
      const Corpus c = generate_synthetic(lex, parse_counts(synth_counts), synth_noise, synth_seed);
      ctx.write(synth_out, render_corpus(c));

    } else if (check->parsed()) {
      const CompiledLexicon lex = load_lexicon(ctx, check_path);
      out << check_path << ": ok, " << lex.entries().size() << " entries, "
          << lex.node_count() << " automaton states, version " << lex.version_hash()
          << "\n";

    } else if (rule->parsed()) {
      const CompiledLexicon lex = load_lexicon(ctx, rule_lexicon);
      const auto predictions = classify_input(
          rule_in, ctx.read(rule_in),
          [&](const std::string& text) { return rule_classify(lex, text).label; });
      ctx.write(rule_out, render_predictions(predictions));

    } else if (model_cmd->parsed()) {
      const BaselineModel model =
          parse_file<BaselineModel>(model_path, ctx.read(model_path), load_model);
      const auto predictions = classify_input(
          model_in, ctx.read(model_in),
          [&](const std::string& text) { return predict(model, text).label; });
      ctx.write(model_out, render_predictions(predictions));

    } else if (train->parsed()) {
      ctx.record_seed("train", train_seed);
      const Corpus c = parse_file<Corpus>(train_corpus, ctx.read(train_corpus), parse_corpus);
      const BaselineModel model = train_baseline(c, hp, train_seed);
      ctx.write(train_out, save_model(model));
      for (std::size_t e = 0; e < model.loss_history.size(); ++e) {
        err << "epoch " << (e + 1) << " mean loss " << model.loss_history[e] << "\n";
      }

    } else if (agreement->parsed()) {
      const auto sets_a = parse_file<std::vector<AnnotationSet>>(agree_a, ctx.read(agree_a), parse_annotations);
      const auto sets_b = parse_file<std::vector<AnnotationSet>>(agree_b, ctx.read(agree_b), parse_annotations);
      const auto docs_a = index_by_doc(sets_a, agree_a);
      const auto docs_b = index_by_doc(sets_b, agree_b);
      std::map<std::string, Transcript> transcripts;
      if (!agree_transcripts.empty()) {
        for (Transcript& t : load_transcripts(ctx, agree_transcripts)) {
          const std::string id = t.session_id;
          transcripts.emplace(id, std::move(t));
        }
      }
      const double threshold = min_alpha.value_or(kDefaultAlphaThreshold);
      std::vector<std::vector<int>> all_units;
      std::map<Discipline, std::vector<std::vector<int>>> units_by_discipline;
      std::vector<Disagreement> disagreements;
      for (const auto& [doc, a] : docs_a) {
        const auto it = docs_b.find(doc);
        if (it == docs_b.end()) {
          err << "warning: document '" << doc << "' annotated only in " << agree_a << "\n";
          continue;
        }
        const AnnotationSet& b = *it->second;
        std::size_t count = 0;
        const auto t = transcripts.find(doc);
        if (t != transcripts.end()) {
          validate_annotations(*a, t->second);
          validate_annotations(b, t->second);
          count = t->second.utterances.size();
        } else {
          for (const auto* set : {a, &b}) {
            for (const Annotation& x : set->annotations) count = std::max(count, x.utterance_index + 1);
          }
        }
        auto units = utterance_units(*a, b, count);
        if (t != transcripts.end()) {
          auto& bucket = units_by_discipline[t->second.discipline];
          bucket.insert(bucket.end(), units.begin(), units.end());
        }
        all_units.insert(all_units.end(), units.begin(), units.end());
        auto diffs = diff_annotations(*a, b);
        disagreements.insert(disagreements.end(), diffs.begin(), diffs.end());
      }
      for (const auto& [doc, b] : docs_b) {
        if (!docs_a.contains(doc)) {
          err << "warning: document '" << doc << "' annotated only in " << agree_b << "\n";
        }
      }
      const AgreementResult overall = krippendorff_alpha(all_units, kNumLabels, threshold);
      json doc = agreement_json(overall);
      doc["disagreements"] = disagreements.size();
      bool passes = overall.passes_gate;
      if (!units_by_discipline.empty()) {
        json per = json::object();
        for (const auto& [discipline, units] : units_by_discipline) {
          const AgreementResult r = krippendorff_alpha(units, kNumLabels, threshold);
          passes = passes && r.passes_gate;
          per[std::string(discipline_name(discipline))] = agreement_json(r);
        }
        doc["by_discipline"] = std::move(per);
      }
      doc["gate"] = passes ? "pass" : "fail";
      ctx.emit(agree_out, doc.dump(2) + "\n");
      if (!agree_disagreements.empty()) {
        std::string text;
        for (const Disagreement& d : disagreements) {
          text += d.id + '\t' +
                  (d.a_span ? std::string(label_name(d.a_span->label)) : std::string("-")) + '\t' +
                  (d.b_span ? std::string(label_name(d.b_span->label)) : std::string("-")) + '\n';
        }
        ctx.write(agree_disagreements, text);
      }
      if (min_alpha && !passes) {
        err << "agreement gate failed: alpha does not exceed " << threshold << "\n";
        status = kExitFailure;
      }

    } else if (consensus->parsed()) {
      const auto sets_a = parse_file<std::vector<AnnotationSet>>(cons_a, ctx.read(cons_a), parse_annotations);
      const auto sets_b = parse_file<std::vector<AnnotationSet>>(cons_b, ctx.read(cons_b), parse_annotations);
      const auto resolutions = parse_file<std::map<std::string, CueLabel>>(
          cons_resolutions, ctx.read(cons_resolutions), parse_resolutions);
      const auto docs_a = index_by_doc(sets_a, cons_a);
      const auto docs_b = index_by_doc(sets_b, cons_b);
      std::vector<AnnotationSet> merged;
      for (const auto& [doc, a] : docs_a) {
        const auto it = docs_b.find(doc);
        if (it == docs_b.end()) {
          throw ValidationError("document '" + doc + "' missing from " + cons_b);
        }
        merged.push_back(merge_consensus(*a, *it->second, resolutions));
      }
      for (const auto& [doc, b] : docs_b) {
        if (!docs_a.contains(doc)) {
          throw ValidationError("document '" + doc + "' missing from " + cons_a);
        }
      }
      ctx.write(cons_out, render_annotations(merged));

    } else if (evaluate_cmd->parsed()) {
      const Corpus gold = parse_file<Corpus>(eval_gold, ctx.read(eval_gold), parse_corpus);
      const PredictionMap pred =
          parse_file<PredictionMap>(eval_pred, ctx.read(eval_pred), load_predictions);
      const AverageMode mode = parse_average_mode(eval_mode);
      const AlignedLabels aligned = align_predictions(gold, pred);
      const EvalResult result = evaluate(aligned.gold, aligned.pred, mode);
      const ErrorBreakdown breakdown = error_breakdown(result.matrix);
      std::optional<DisciplineTable> table;
      if (by_discipline) table = evaluate_by_discipline(gold, pred, mode);
      ctx.emit(eval_out, render_metrics(result, breakdown, table ? &*table : nullptr));

    } else if (report->parsed()) {
      const Transcript t =
          parse_file<Transcript>(rep_transcript, ctx.read(rep_transcript), parse_transcript);
      FidelityReport r;
      if (!rep_lexicon.empty()) {
        r = assess_session(t, RuleClassifier(load_lexicon(ctx, rep_lexicon)));
      } else if (!rep_model.empty()) {
        r = assess_session(t, BaselineClassifier(parse_file<BaselineModel>(
                                  rep_model, ctx.read(rep_model), load_model)));
      } else {
        const std::string content = ctx.read(rep_pred);
        r = assess_session(t, parse_file<PredictionMap>(rep_pred, content, load_predictions),
                           sha256_hex(content));
      }
      ctx.emit(rep_out, render_report(r, rep_format == "text" ? ReportFormat::kText
                                                               : ReportFormat::kStructured));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  if (!manifest_path.empty()) {
    try {
      write_file(manifest_path, ctx.manifest());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitFailure;
    }
  }
  return status;
}

}  // namespace cuefid
