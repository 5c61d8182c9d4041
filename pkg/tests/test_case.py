from dataclasses import replace

from pbparse.case import assign_case, case_filter
from pbparse.engine import parse
from pbparse.model import Case, PhraseMarker


def branch_with(marker, schema):
    return next(b for b in marker.branches if b.schema == schema)


def test_verb_object_is_accusative(desk_lexicon):
    marker, = parse("john saw dogs".split(), desk_lexicon).completed
    assert assign_case(branch_with(marker, 3)).value == Case.ACCUSATIVE


def test_preposition_object_is_oblique(desk_lexicon):
    markers = parse("dogs with john".split(), desk_lexicon, case_filter=False).completed
    pp = [b for m in markers for b in m.branches if b.head.category.value == "P"]
    assert pp and all(assign_case(b).value == Case.OBLIQUE for b in pp)


def test_adjunct_is_not_a_case_position(desk_lexicon):
    markers = parse("john saw dogs with the telescope".split(), desk_lexicon).completed
    adjuncts = [b for m in markers for b in m.branches if b.schema == 4]
    assert adjuncts
    assert all(assign_case(b) is None for b in adjuncts)


def test_subject_of_finite_verb_is_nominative(lexicon):
    marker, = parse("the dog barked".split(), lexicon).completed
    assert case_filter(marker)
    assert [e.value for e in marker.case_events()] == [Case.NOMINATIVE]


def test_caseless_theta_marked_noun_fails(desk_lexicon):
    markers = parse(["dogs", "bark"], desk_lexicon, case_filter=False).completed
    verb_reading = next(m for m in markers if m.leaves[1].category.value == "V")
    assert not case_filter(verb_reading)


def test_stripping_a_case_event_fails(desk_lexicon):
    marker, = parse("john saw dogs".split(), desk_lexicon).completed
    branches = tuple(replace(b, case_event=None) if b.schema == 3 else b
                     for b in marker.branches)
    assert not case_filter(PhraseMarker(marker.leaves, branches))


def test_no_nouns_passes(desk_lexicon):
    marker, = parse(["big"], desk_lexicon).completed
    assert case_filter(marker)
