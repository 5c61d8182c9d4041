import math
import re
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from conftest import read_text
from pbparse.corpus import (extract_counts, format_tree, read_corpus, read_lexicon,
                            read_tables, train, write_lexicon, write_tables)
from pbparse.engine import parse
from pbparse.errors import EmptyCorpusError, LoadError, UnclassifiableBranchError
from pbparse.model import Category
from pbparse.theta import estimate_theta_table
from pbparse.xbar import FLAT, MOTHER, estimate_flat, estimate_mother_conditioned

N, P = Category.N, Category.P
THE_DOG = "(N:-:- (Det:-:- =the) ^(N:+:- =dog))"
OBJECT_AND_ADJUNCT = ("(I:-:- (N:-:- =john) ^(I:+:- ^(I:+:- ^(I:+:+ =ate) +(N:-:- =fish))"
                      " (P:-:- ^(P:-:+ =with) +(N:-:- =john))))")


def test_missing_sibling():
    with pytest.raises(LoadError, match="two daughters"):
        read_corpus("(N:-:- ^(N:+:- =dog))")


def test_empty_document():
    with pytest.raises(LoadError):
        read_corpus("  ; only a comment\n")


def test_unbalanced():
    with pytest.raises(LoadError):
        read_corpus(THE_DOG[:-1])


def test_missing_head_marker_names_line():
    with pytest.raises(LoadError) as info:
        read_corpus("\n\n(N:-:- (Det:-:- =the) (N:+:- =dog))", "c.txt")
    assert str(info.value).startswith("c.txt:3:")


def test_bundled_corpus_has_twenty_trees(corpus_trees):
    assert len(corpus_trees) == 20
    assert extract_counts(corpus_trees).tree_count == 20


def test_format_round_trip(corpus_trees):
    for tree in corpus_trees:
        assert format_tree(read_corpus(format_tree(tree))[0]) == format_tree(tree)


def test_determiner_specifier_counts():
    bundle = extract_counts(read_corpus(THE_DOG))
    assert {k: v for k, v in bundle.schema_counts.items() if v} == {1: 1}
    assert bundle.theta_observations == []


def test_object_and_adjunct_counts():
    bundle = extract_counts(read_corpus(OBJECT_AND_ADJUNCT))
    assert bundle.theta_observations == [("ate", (N,))]
    assert bundle.schema_counts[3] == 2  # the verb's object and the preposition's
    assert bundle.schema_counts[4] == 1


def test_unclassifiable_node():
    tree = read_corpus("(N:-:- (Det:-:- =the) ^(N:-:+ =dog))")
    with pytest.raises(UnclassifiableBranchError):
        extract_counts(tree)


def test_no_trees():
    with pytest.raises(EmptyCorpusError):
        extract_counts([])


# An independent pass over the raw text: a small s-expression reader and a
# feature-pattern classifier that share nothing with the package.
def _sexp(text):
    text = re.sub(r";[^\n]*", "", text)
    tokens = re.findall(r"[\^+]?\(|\)|[^\s()]+", text)
    pos = 0

    def node():
        nonlocal pos
        prefix = tokens[pos][:-1]
        pos += 1
        label = tokens[pos]
        pos += 1
        kids = []
        while tokens[pos] != ")":
            if tokens[pos].startswith("="):
                kids.append(tokens[pos])
                pos += 1
            else:
                kids.append(node())
        pos += 1
        return prefix, label, kids

    out = []
    while pos < len(tokens):
        out.append(node())
    return out


def _independent_schema_counts(text):
    counts = Counter()

    def feats(label):
        cat, s, c = label.split(":")
        return s == "+", c == "+"

    def visit(n):
        prefix, label, kids = n
        if len(kids) == 2:
            (pa, la, _), (pb, lb, _) = kids
            head_left = pa == "^"
            hl, nl = (la, lb) if head_left else (lb, la)
            npre = pb if head_left else pa
            m, h, d = feats(label), feats(hl), feats(nl)
            if not head_left:
                counts[1 if h[0] and not m[0] else 5] += 1
            elif npre == "+":
                counts[2 if m[1] else 3] += 1
            else:
                counts[4] += 1
            for k in kids:
                visit(k)
    for tree in _sexp(text):
        visit(tree)
    return counts


def test_counts_agree_with_independent_pass(corpus_trees):
    expected = _independent_schema_counts(read_text("corpus.txt"))
    got = extract_counts(corpus_trees).schema_counts
    assert {k: v for k, v in got.items() if v} == dict(expected)
    assert sum(got.values()) == sum(len(t.leaves()) - 1 for t in corpus_trees)


def test_corpus_trees_are_reachable_by_the_parser(corpus_trees, lexicon):
    for tree in corpus_trees:
        words = [leaf.word for leaf in tree.leaves()]
        found = {m.bracketed() for m in parse(words, lexicon).completed}
        assert format_tree(tree) in found


def test_mother_conditioned_unique_mothers(corpus_trees):
    counts = extract_counts(corpus_trees).schema_counts
    assert counts[1] and counts[2]
    table = estimate_mother_conditioned(counts)
    assert table.entries[1] == 1.0 and table.entries[2] == 1.0


def test_flat_sample_normalizes(corpus_trees, lexicon):
    schema_table, theta_table, _ = train(corpus_trees, lexicon)
    assert math.isclose(math.fsum(schema_table.entries.values()), 1.0, abs_tol=1e-9)
    for total in theta_table.head_totals().values():
        assert math.isclose(total, 1.0, abs_tol=1e-9)


# -- lexicon -----------------------------------------------------------------

def test_lexicon_round_trip(lexicon):
    text = write_lexicon(lexicon)
    again = read_lexicon(text)
    assert again == lexicon
    assert write_lexicon(again) == text


def test_duplicate_lexicon_record_names_line():
    text = "saw\tI\t+\tagent/ext:N;theme/int:N\t3\nsaw\tI\t+\tagent/ext:N;theme/int:N\t2\n"
    with pytest.raises(LoadError) as info:
        read_lexicon(text, "lex.tsv")
    assert str(info.value).startswith("lex.tsv:2:")


def test_lexicon_field_count():
    with pytest.raises(LoadError):
        read_lexicon("dog\tN\t+\n")


def test_lexicon_conflicting_spec():
    with pytest.raises(LoadError):
        read_lexicon("dog\tN\t+\t-\ndog\tN\t-\tagent/ext:N\n")


def test_empty_lexicon():
    with pytest.raises(LoadError):
        read_lexicon("# nothing\n")


# -- tables ------------------------------------------------------------------

def test_tables_round_trip(tables):
    text = write_tables(*tables)
    schema_table, theta_table = read_tables(text)
    assert schema_table == tables[0]
    assert theta_table.entries == tables[1].entries
    assert theta_table.counts == tables[1].counts
    assert write_tables(schema_table, theta_table) == text


def test_mother_tables_round_trip(corpus_trees, lexicon):
    tabs = train(corpus_trees, lexicon, MOTHER)[:2]
    again = read_tables(write_tables(*tabs))
    assert again[0] == tabs[0]
    assert again[1].entries == tabs[1].entries


schema_counts = st.dictionaries(st.integers(1, 5), st.integers(0, 500)).filter(
    lambda d: sum(d.values()) > 0)
theta_counts = st.dictionaries(
    st.tuples(st.sampled_from(["saw", "put", "ate"]),
              st.lists(st.sampled_from([N, P]), max_size=2).map(tuple)),
    st.integers(1, 500), min_size=1)


@settings(max_examples=60)
@given(schema_counts, theta_counts, st.sampled_from([FLAT, MOTHER]))
def test_any_tables_round_trip(sc, tc, mode):
    est = estimate_flat if mode == FLAT else estimate_mother_conditioned
    schema_table, theta_table = est(sc), estimate_theta_table(tc)
    again = read_tables(write_tables(schema_table, theta_table))
    assert again[0] == schema_table
    assert again[1].entries == theta_table.entries


def test_probabilities_summing_to_point_nine(tables):
    text = write_tables(*tables)
    lines = [l for l in text.split("\n")]
    edited = []
    for line in lines:
        if line.startswith("schema 1 "):
            sid, label, count, p = line.split()
            line = " ".join([sid, label, count, repr(float(p) - 0.1)])
        edited.append(line)
    with pytest.raises(LoadError, match="sum"):
        read_tables("\n".join(edited))


def test_table_version_checked(tables):
    text = write_tables(*tables).replace("pbparse-tables 1", "pbparse-tables 9")
    with pytest.raises(LoadError, match="version"):
        read_tables(text)


def test_lexicon_counts_feed_theta_table(corpus_trees):
    lex = read_lexicon("saw\tI\t+\tagent/ext:N;theme/int:N\t5\n")
    _, with_lex, _ = train(corpus_trees, lex)
    _, without, _ = train(corpus_trees)
    assert with_lex.counts[("saw", (N,))] == without.counts.get(("saw", (N,)), 0) + 5
