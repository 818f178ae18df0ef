import os

import cuefid
import pytest

DATA = os.environ.get("CUEFID_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))
LEXICON = os.path.join(DATA, "seed_lexicon.tsv")


def test_clean_and_tokenize():
    assert cuefid.clean_text("  Do you want to write it out?  ") == "do you want to write it out"
    assert cuefid.tokenize("walk me through your plan") == ["walk", "me", "through", "your", "plan"]


def test_rule_classifier():
    lex = cuefid.Lexicon.from_file(LEXICON)
    assert len(lex) > 0
    assert lex.classify("look better") == ("NONE", "N3")
    assert lex.classify("look at that")[0] == "DIRECTED"
    assert lex.classify("the weather is nice") == ("NONE", None)
    matches = lex.match("look better please")
    assert [m.entry_id for m in matches] == ["N3", "D2"]
    assert matches[0].label == cuefid.CueLabel.NONE


def test_bad_lexicon_raises():
    with pytest.raises(ValueError, match="line 1"):
        cuefid.Lexicon.from_source("X\t1\t-\tfoo\tMAYBE\n")


def test_alpha_and_f1():
    r = cuefid.krippendorff_alpha([[0, 0], [1, 1], [0, 1], [2, 2]])
    assert r["alpha"] == pytest.approx(2 / 3, abs=1e-9)
    assert not r["passes_gate"]
    f1 = cuefid.averaged_f1(["GUIDED", "GUIDED", "DIRECTED", "NONE"],
                            ["GUIDED", "DIRECTED", "DIRECTED", "NONE"])
    assert f1 == pytest.approx(7 / 9, abs=1e-12)


def test_cli_in_process():
    status, out, _ = cuefid.run_cli(["lexicon", "check", LEXICON])
    assert status == 0
    assert "ok" in out
    assert cuefid.run_cli(["no-such-command"])[0] == 2
