import subprocess
import sys

import pytest

from pbparse.cli import main
from pbparse.corpus import bundled_path, read_tables

CORPUS, LEXICON, SUITE = (bundled_path(n) for n in ("corpus.txt", "lexicon.tsv", "suite.tsv"))


@pytest.fixture(scope="module")
def table_file(tmp_path_factory):
    out = tmp_path_factory.mktemp("model") / "tables.txt"
    assert main(["train", "--corpus", CORPUS, "--lexicon", LEXICON, "--out", str(out)]) == 0
    return str(out)


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def model(table_file):
    return ["--lexicon", LEXICON, "--tables", table_file]


def test_train_flat(table_file):
    schema_table, _ = read_tables(open(table_file).read())
    assert abs(sum(schema_table.entries.values()) - 1.0) < 1e-9


def test_train_mother(tmp_path, capsys):
    out = tmp_path / "t.txt"
    code, _, _ = run(["train", "--corpus", CORPUS, "--out", str(out),
                      "--conditioning", "mother"], capsys)
    assert code == 0
    schema_table, _ = read_tables(out.read_text())
    assert schema_table.entries[1] == 1.0 and schema_table.entries[2] == 1.0


def test_train_missing_corpus(tmp_path, capsys):
    code, _, err = run(["train", "--corpus", str(tmp_path / "nope"), "--out",
                        str(tmp_path / "t")], capsys)
    assert code == 2
    assert "cannot read" in err


def test_train_bad_tree_reports_location(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("\n(N:-:- (Det:-:- =the) ^(N:-:+ =dog))\n")
    code, _, err = run(["train", "--corpus", str(bad), "--out", str(tmp_path / "t")], capsys)
    assert code == 1
    assert "bad.txt:2:" in err


def test_parse_prints_rank_one_first(table_file, capsys):
    code, out, _ = run(["parse", *model(table_file), "the", "dog", "barked"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "sentence: the dog barked"
    assert lines[1] == "analyses: 1"
    assert lines[2].startswith("rank 1  global=")


def test_parse_unknown_word(table_file, capsys):
    code, _, err = run(["parse", *model(table_file), "zzz"], capsys)
    assert code == 1
    assert err.strip() == "out of vocabulary: zzz"


def test_top_one(table_file, capsys):
    code, out, _ = run(["parse", *model(table_file), "--top", "1",
                        "john saw mary with the telescope"], capsys)
    assert code == 0
    assert int(out.splitlines()[1].split()[1]) >= 2
    assert sum(line.startswith("rank ") for line in out.splitlines()) == 1


def test_trace_shows_events(table_file, capsys):
    code, out, _ = run(["parse", *model(table_file), "--trace", "john saw mary"], capsys)
    assert code == 0
    assert "schema 3" in out and "theta saw@1" in out and "case saw@1 acc" in out


def test_eval_bundled_suite(table_file, tmp_path, capsys):
    report = tmp_path / "report.txt"
    code, out, _ = run(["eval", *model(table_file), "--suite", SUITE,
                        "--report", str(report)], capsys)
    assert code == 0
    assert "sentences: 16" in out
    values = dict(line.split("=", 1) for line in report.read_text().splitlines())
    assert values["sentences"] == "16"
    assert values["failed"] == "0"


def test_eval_empty_suite(table_file, tmp_path, capsys):
    empty = tmp_path / "empty.tsv"
    empty.write_text("")
    code, out, _ = run(["eval", *model(table_file), "--suite", str(empty)], capsys)
    assert code == 0
    assert "sentences: 0" in out


def test_eval_oov_row(table_file, tmp_path, capsys):
    suite = tmp_path / "s.tsv"
    suite.write_text("the dog barked\nthe zzz barked\njohn slept\n")
    code, out, _ = run(["eval", *model(table_file), "--suite", str(suite)], capsys)
    assert code == 0
    assert "FAILED: out of vocabulary: zzz" in out
    assert "failed: 1" in out
    assert "analysis counts: 1 1" in out


def test_missing_tables(capsys, tmp_path):
    code, _, err = run(["parse", "--lexicon", LEXICON, "--tables", str(tmp_path / "x"),
                        "dog"], capsys)
    assert code == 2 and "cannot read" in err


def test_output_is_byte_identical(table_file):
    argv = [sys.executable, "-m", "pbparse", "eval", *model(table_file), "--suite", SUITE]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first
