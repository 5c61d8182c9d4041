"""Case theory.  Structural only: it filters parses but never scores them.

Assigners: V and I give accusative to an N complement, P gives oblique to
its N complement, and I gives nominative to its N specifier.  Finite verbs
are listed under I in the lexicon, so I also covers the verb's object.
"""
from __future__ import annotations

from collections import Counter
from typing import Optional

from .model import (COMPLEMENT_SCHEMATA, Case, CaseEvent, Category,
                    PhraseMarker, ProperBranch)

COMPLEMENT_CASE = {
    Category.V: Case.ACCUSATIVE,
    Category.I: Case.ACCUSATIVE,
    Category.P: Case.OBLIQUE,
}
SPECIFIER_CASE = {Category.I: Case.NOMINATIVE}

# CaseAssignment in the domain model is the event record itself.
CaseAssignment = CaseEvent


def assign_case(branch: ProperBranch) -> Optional[CaseEvent]:
    receiver = branch.nonhead
    if receiver.category != Category.N or branch.theta_event is None:
        return None
    head = branch.head
    if branch.schema in COMPLEMENT_SCHEMATA:
        value = COMPLEMENT_CASE.get(head.category)
    elif branch.schema == 1:
        value = SPECIFIER_CASE.get(head.category)
    else:
        value = None
    if value is None:
        return None
    return CaseEvent(head.head_word, head.head_index, head.category, value,
                     receiver.span)


def case_filter(marker: PhraseMarker) -> bool:
    """Every theta-marked noun phrase has exactly one case."""
    cased = Counter(e.receiver for e in marker.case_events())
    if any(n > 1 for n in cased.values()):
        return False
    for branch in marker.branches:
        event = branch.theta_event
        if event is not None and branch.nonhead.category == Category.N:
            if cased[event.receiver] != 1:
                return False
    return True
