#include <doctest.h>

#include <random>
#include <set>

#include "cuefid/annotation.hpp"
#include "cuefid/classify.hpp"
#include "cuefid/corpus.hpp"
#include "cuefid/error.hpp"
#include "cuefid/lexicon.hpp"
#include "cuefid/util.hpp"
#include "test_support.hpp"

using namespace cuefid;

TEST_CASE("transcript parsing") {
  const Transcript t = parse_transcript(
      "#session=s1 discipline=OT\n"
      "0\t0\t1500\tT\tDo you want to write it out?\n"
      "1\t-\t-\t-\tmhm\n"
      "2\t2000\t2600\tP\tokay\tthen\n");
  CHECK(t.session_id == "s1");
  CHECK(t.discipline == Discipline::kOT);
  REQUIRE(t.utterances.size() == 3);
  CHECK(t.utterances[0].index == 0);
  CHECK(t.utterances[2].index == 2);
  CHECK(t.utterances[0].speaker == "T");
  CHECK(*t.utterances[0].end_ms == 1500);
  CHECK_FALSE(t.utterances[1].start_ms.has_value());
  CHECK_FALSE(t.utterances[1].speaker.has_value());
  // Tabs after the fourth field belong to the text.
  CHECK(t.utterances[2].text == "okay\tthen");
  CHECK(parse_transcript(render_transcript(t)) == t);

  CHECK_THROWS_AS(parse_transcript("#session=s1 discipline=XYZ\n0\t-\t-\t-\thi\n"),
                  ValidationError);
  CHECK_THROWS_AS(parse_transcript("#session=s1 discipline=PT\n0\t900\t100\t-\thi\n"),
                  ValidationError);
  CHECK_THROWS_AS(parse_transcript("#session=s1 discipline=PT\n1\t-\t-\t-\thi\n"),
                  FormatError);
  CHECK_THROWS_AS(parse_transcript("0\t-\t-\t-\thi\n"), FormatError);
  try {
    parse_transcript("#session=s1 discipline=PT\n0\t-\t-\t-\thi\n1\tx\t-\t-\tyo\n");
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("clean_text") {
  CHECK(clean_text("  hello   world  ") == "hello world");
  CHECK(clean_text("Do you want to write it out?") == "do you want to write it out");
  CHECK(clean_text("") == "");
  CHECK(clean_text("Let's try that again...") == "let's try that again");
  CHECK(clean_text("\xE2\x80\x9CLet\xE2\x80\x99s go,\xE2\x80\x9D she said!") == "let's go she said");
  CHECK(clean_text("'quoted' words") == "quoted words");
  CHECK(clean_text("a;b:c") == "a b c");

  std::mt19937_64 gen(11);
  const std::string alphabet = "aZ .,?!;:'\" \t\nxY'";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const std::size_t len = gen() % 30;
    for (std::size_t k = 0; k < len; ++k) s += alphabet[gen() % alphabet.size()];
    const std::string once = clean_text(s);
    CHECK(clean_text(once) == once);
    CHECK(once.find("  ") == std::string::npos);
    if (!once.empty()) {
      CHECK(once.front() != ' ');
      CHECK(once.back() != ' ');
    }
  }
}

TEST_CASE("gold corpus construction") {
  const Transcript t = parse_transcript(
      "#session=s1 discipline=SLP\n"
      "0\t-\t-\tT\tWhat do you think went well?\n"
      "1\t-\t-\tT\tLet's try that again.\n"
      "2\t-\t-\tP\tokay\n"
      "3\t-\t-\tT\tHow did you do?\n"
      "4\t-\t-\tT\t...\n");
  const auto sets = parse_annotations(
      "s1\tA\t0\t0\t28\tGUIDED\n"
      "s1\tA\t1\t0\t21\tDIRECTED\n"
      "s1\tA\t3\t0\t15\tGUIDED\n");
  const GoldBuild gold = build_gold_corpus(std::vector<Transcript>{t}, sets);
  REQUIRE(gold.cued.examples.size() == 3);
  CHECK(gold.cued.count(CueLabel::kGuided) == 2);
  CHECK(gold.cued.count(CueLabel::kDirected) == 1);
  CHECK(gold.cued.examples[0].text == "what do you think went well");
  CHECK(gold.cued.examples[0].discipline == Discipline::kSLP);
  // Utterance 4 cleans to nothing and is not a pool candidate.
  REQUIRE(gold.none_pool.size() == 1);
  CHECK(gold.none_pool[0].text == "okay");
  CHECK(gold.none_pool[0].label == CueLabel::kNone);

  const auto empty = build_gold_corpus(std::vector<Transcript>{t}, {});
  CHECK(empty.cued.examples.empty());
  CHECK(empty.none_pool.size() == 4);

  CHECK_THROWS_AS(build_gold_corpus(std::vector<Transcript>{t},
                                    parse_annotations("s1\tA\t2\t0\t9\tGUIDED\n")),
                  ValidationError);
  CHECK_THROWS_AS(build_gold_corpus(std::vector<Transcript>{t},
                                    parse_annotations("s9\tA\t0\t0\t4\tGUIDED\n")),
                  ValidationError);
}

namespace {

Corpus cue_corpus(std::size_t guided, std::size_t directed) {
  Corpus c;
  for (std::size_t i = 0; i < guided + directed; ++i) {
    c.examples.push_back({"c" + std::to_string(i), "what now",
                          i < guided ? CueLabel::kGuided : CueLabel::kDirected,
                          Discipline::kOT, "s"});
  }
  return c;
}

std::vector<GoldExample> pool_of(std::size_t n) {
  std::vector<GoldExample> pool;
  for (std::size_t i = 0; i < n; ++i) {
    pool.push_back({"p" + std::to_string(i), "fine", CueLabel::kNone, Discipline::kPT, "s"});
  }
  return pool;
}

}  // namespace

TEST_CASE("balance_with_none") {
  auto r = balance_with_none(cue_corpus(784, 784), pool_of(2000), 1);
  CHECK(r.corpus.count(CueLabel::kGuided) == 784);
  CHECK(r.corpus.count(CueLabel::kDirected) == 784);
  CHECK(r.corpus.count(CueLabel::kNone) == 784);
  CHECK(r.warnings.empty());

  r = balance_with_none(cue_corpus(5, 3), pool_of(100), 1);
  CHECK(r.corpus.count(CueLabel::kNone) == 5);

  r = balance_with_none(cue_corpus(4, 4), pool_of(2), 1);
  CHECK(r.corpus.count(CueLabel::kNone) == 2);
  CHECK(r.warnings.size() == 1);

  const auto a = balance_with_none(cue_corpus(20, 10), pool_of(100), 77);
  const auto b = balance_with_none(cue_corpus(20, 10), pool_of(100), 77);
  const auto c = balance_with_none(cue_corpus(20, 10), pool_of(100), 78);
  CHECK(a.corpus == b.corpus);
  CHECK_FALSE(a.corpus == c.corpus);
  std::set<std::string> ids;
  for (const auto& e : a.corpus.examples) CHECK(ids.insert(e.example_id).second);
}

TEST_CASE("split_corpus over transcripts") {
  std::vector<Transcript> docs;
  for (Discipline d : kAllDisciplines) {
    for (int i = 0; i < 10; ++i) {
      docs.push_back({std::string(discipline_name(d)) + std::to_string(i), d,
                      {{0, "hi", {}, {}, {}}}});
    }
  }
  const auto s = split_corpus(docs, 0.7, 5);
  for (Discipline d : kAllDisciplines) {
    auto count = [&](const std::vector<Transcript>& side) {
      return std::count_if(side.begin(), side.end(),
                           [&](const Transcript& t) { return t.discipline == d; });
    };
    CHECK(count(s.train) == 7);
    CHECK(count(s.validation) == 3);
  }
  std::set<std::string> seen;
  for (const auto* side : {&s.train, &s.validation}) {
    for (const auto& t : *side) CHECK(seen.insert(t.session_id).second);
  }
  CHECK(seen.size() == 30);

  const auto again = split_corpus(docs, 0.7, 5);
  CHECK(again.train == s.train);
  CHECK(again.validation == s.validation);

  const auto none = split_corpus(std::vector<Transcript>{}, 0.7, 5);
  CHECK(none.train.empty());
  CHECK(none.validation.empty());
  CHECK_THROWS(split_corpus(docs, 1.0, 5));
}

TEST_CASE("length_stats") {
  Corpus c;
  for (int i = 0; i < 100; ++i) {
    const std::size_t words = i < 76 ? 1 + i % 15 : 16 + i;
    std::string text = "w";
    for (std::size_t k = 1; k < words; ++k) text += " w";
    c.examples.push_back({"e" + std::to_string(i), text, CueLabel::kNone, Discipline::kOT, "s"});
  }
  const std::vector<double> qs = {0.0, 0.25, 0.5, 0.75, 0.9, 1.0};
  const LengthStats s = length_stats(c, qs);
  CHECK(s.count == 100);
  CHECK(s.quantiles.at(0.75) < 16);
  CHECK(s.quantiles.at(1.0) == s.max_words);
  std::size_t prev = 0;
  for (double q : qs) {
    CHECK(s.quantiles.at(q) >= prev);
    CHECK(s.quantiles.at(q) >= s.min_words);
    CHECK(s.quantiles.at(q) <= s.max_words);
    prev = s.quantiles.at(q);
  }

  Corpus one;
  one.examples.push_back({"x", "a b c d e", CueLabel::kGuided, Discipline::kOT, "s"});
  const LengthStats single = length_stats(one, std::vector<double>{0.5});
  CHECK(single.min_words == 5);
  CHECK(single.max_words == 5);
  CHECK(single.mean_words == 5.0);
  CHECK_THROWS(length_stats(Corpus{}, std::vector<double>{0.5}));
}

TEST_CASE("synthetic corpus") {
  const CompiledLexicon lex = test_support::seed_lexicon();
  const Corpus c = generate_synthetic(lex, {50, 50, 50}, 0.0, 3);
  CHECK(c.examples.size() == 150);
  CHECK(c.count(CueLabel::kGuided) == 50);
  CHECK(c.count(CueLabel::kDirected) == 50);
  CHECK(c.count(CueLabel::kNone) == 50);
  for (const auto& e : c.examples) {
    const auto matches = match_utterance(lex, e.text);
    if (e.label == CueLabel::kNone) {
      CHECK(matches.empty());
    } else {
      REQUIRE_FALSE(matches.empty());
      CHECK(matches.front().label == e.label);
    }
    CHECK(clean_text(e.text) == e.text);
  }
  CHECK(render_corpus(generate_synthetic(lex, {50, 50, 50}, 0.0, 3)) == render_corpus(c));
  CHECK(parse_corpus(render_corpus(c)) == c);

  const CompiledLexicon guided_only =
      compile_lexicon(parse_lexicon("G1\t1\t^\twhat\tGUIDED\n"));
  CHECK_THROWS(generate_synthetic(guided_only, {1, 1, 1}, 0.0, 1));
}

TEST_CASE("corpus file format") {
  CHECK_THROWS_AS(parse_corpus("a\tMAYBE\tOT\ts\ttext\n"), FormatError);
  CHECK_THROWS_AS(parse_corpus("a\tGUIDED\tOT\ts\ttext\na\tNONE\tOT\ts\tx\n"), FormatError);
  const Corpus c = parse_corpus("a\tGUIDED\tOT\ts\t  What   NOW?\n");
  CHECK(c.examples[0].text == "what now");
}
