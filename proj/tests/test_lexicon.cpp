#include <doctest.h>

#include <algorithm>
#include <random>

#include "cuefid/classify.hpp"
#include "cuefid/error.hpp"
#include "cuefid/lexicon.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace cuefid;

namespace {

std::vector<std::string> toks(std::string_view text) { return tokenize(text); }

bool same(const std::vector<Match>& got, const std::vector<oracle::RefMatch>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].entry_id != want[i].entry_id || got[i].label != want[i].label ||
        got[i].start != want[i].start || got[i].end != want[i].end ||
        got[i].priority != want[i].priority) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("lexicon line parsing") {
  auto entries = parse_lexicon("G1\t50\t^\twhat do you think\tGUIDED\n");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].anchored);
  CHECK(entries[0].priority == 50);
  CHECK(entries[0].label == CueLabel::kGuided);
  REQUIRE(entries[0].pattern.atoms.size() == 4);
  for (const auto& a : entries[0].pattern.atoms) {
    CHECK_FALSE(a.group);
    CHECK(a.alternatives.size() == 1);
  }

  entries = parse_lexicon("D7\t60\t^\tlet's (start|go|try|give)\tDIRECTED\n");
  REQUIRE(entries[0].pattern.atoms.size() == 2);
  CHECK(entries[0].pattern.atoms[1].group);
  CHECK(entries[0].pattern.atoms[1].alternatives.size() == 4);

  try {
    parse_lexicon("# header\nG1\t50\t^\twhat\tGUIDED\nX\t1\t-\tfoo\tMAYBE\n");
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_lexicon("A\t1\t-\t(a|b\tNONE\n"), FormatError);
  CHECK_THROWS_AS(parse_lexicon("A\t1\t-\ta|b)\tNONE\n"), FormatError);
  CHECK_THROWS_AS(parse_lexicon("A\t1\t-\t\tNONE\n"), FormatError);
  CHECK_THROWS_AS(parse_lexicon("A\t1\t-\t(a|(b|c))\tNONE\n"), FormatError);
  CHECK_THROWS_AS(parse_lexicon("A\t1\t-\t(a||b)\tNONE\n"), FormatError);
  CHECK_THROWS_AS(parse_lexicon("A\t1\t-\ta?\tNONE\n"), FormatError);
  CHECK_THROWS_AS(parse_lexicon("A\t1\t-\ta  b\tNONE\n"), FormatError);
  CHECK_THROWS_AS(parse_lexicon("A\t1\t-\tLook\tNONE\n"), FormatError);
  CHECK_THROWS_AS(parse_lexicon("A\t1\t*\ta\tNONE\n"), FormatError);
  CHECK_THROWS_AS(parse_lexicon("A\t1\t-\ta\tNONE\nA\t2\t-\tb\tNONE\n"), FormatError);
}

TEST_CASE("pattern render round trip") {
  for (const char* p : {"a", "a b? c", "(a|b c)", "(a|b)? c", "let's (talk about|come up with)"}) {
    const PatternTree tree = parse_pattern(p);
    CHECK(render_pattern(tree) == p);
    CHECK(parse_pattern(render_pattern(tree)) == tree);
  }
  const auto src = read_file(test_support::data_path("seed_lexicon.tsv"));
  const auto entries = parse_lexicon(src);
  CHECK(parse_lexicon(render_lexicon(entries)) == entries);
}

TEST_CASE("compiled automaton acceptance") {
  const auto one = compile_lexicon(parse_lexicon("N\t60\t-\tlook better\tNONE\n"));
  CHECK(one.accepting_entries(toks("look better")).size() == 1);
  CHECK(one.accepting_entries(toks("look")).empty());
  CHECK(one.accepting_entries(toks("look better now")).empty());

  const auto alt = compile_lexicon(parse_lexicon("G\t1\t-\tdo you (want|need)\tGUIDED\n"));
  CHECK(alt.accepting_entries(toks("do you want")).size() == 1);
  CHECK(alt.accepting_entries(toks("do you need")).size() == 1);
  CHECK(alt.accepting_entries(toks("do you")).empty());
  CHECK(alt.accepting_entries(toks("do you like")).empty());

  CHECK_THROWS_AS(
      compile_lexicon(parse_lexicon("A\t5\t-\ta b\tNONE\nB\t5\t-\ta b\tNONE\n")),
      ValidationError);
  // Differing priority or label is a distinct rule.
  CHECK_NOTHROW(compile_lexicon(parse_lexicon("A\t5\t-\ta b\tNONE\nB\t6\t-\ta b\tNONE\n")));

  const auto a = test_support::seed_lexicon();
  const auto b = test_support::seed_lexicon();
  CHECK(a.version_hash() == b.version_hash());
  CHECK(a.version_hash().size() == 64);
}

TEST_CASE("match_utterance on the seed lexicon") {
  const auto lex = test_support::seed_lexicon();
  auto m = match_utterance(lex, "let's try that again");
  REQUIRE_FALSE(m.empty());
  CHECK(m.front().entry_id == "D7");
  CHECK(m.front().start == 0);
  CHECK(match_utterance(lex, "").empty());

  m = match_utterance(lex, "look better please");
  REQUIRE(m.size() == 2);
  CHECK(m[0].entry_id == "N3");
  CHECK(m[0].label == CueLabel::kNone);
  CHECK(m[1].entry_id == "D2");
  CHECK(m[1].label == CueLabel::kDirected);
  CHECK(same(m, oracle::brute_force_matches(lex.entries(), toks("look better please"))));
}

TEST_CASE("matcher equals brute-force scan on random lexicons") {
  std::mt19937_64 gen(2024);
  const auto vocab = oracle::small_vocab();
  for (int trial = 0; trial < 300; ++trial) {
    const auto entries = parse_lexicon(oracle::random_lexicon_source(gen, 1 + gen() % 30));
    const auto lex = compile_lexicon(entries);
    std::vector<std::string> tokens(gen() % 41);
    for (auto& t : tokens) t = vocab[gen() % vocab.size()];
    const auto got = lex.match_tokens(tokens);
    CHECK(same(got, oracle::brute_force_matches(entries, tokens)));
    for (const Match& x : got) {
      CHECK(x.end > x.start);
      const auto it = std::find_if(entries.begin(), entries.end(),
                                   [&](const LexiconEntry& e) { return e.entry_id == x.entry_id; });
      if (it->anchored) CHECK(x.start == 0);
    }
    for (std::size_t i = 1; i < got.size(); ++i) {
      CHECK(match_precedes(got[i - 1], got[i]));
      CHECK_FALSE(match_precedes(got[i], got[i - 1]));
    }
  }
}

TEST_CASE("entry order does not change the rule label") {
  const auto src = read_file(test_support::data_path("seed_lexicon.tsv"));
  auto entries = parse_lexicon(src);
  const auto base = compile_lexicon(entries);
  const std::vector<std::string> texts = {
      "look better please", "what if your feet get out", "let's talk about it",
      "can you say those words backwards", "do you need a drink of water", "hello"};
  std::mt19937_64 gen(5);
  for (int round = 0; round < 20; ++round) {
    std::shuffle(entries.begin(), entries.end(), gen);
    const auto shuffled = compile_lexicon(entries);
    for (const auto& t : texts) {
      CHECK(rule_classify(shuffled, t).label == rule_classify(base, t).label);
      CHECK(rule_classify(shuffled, t).matched_entry == rule_classify(base, t).matched_entry);
    }
    // The hash is computed over id-sorted entries, so it is order independent too.
    CHECK(shuffled.version_hash() == base.version_hash());
  }
}
