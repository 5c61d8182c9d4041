"""X-bar theory: the five parametrised schemata and their probabilities.

A node is written Cat(spec, comp).  The head daughter is the one sharing
the mother's category; the other daughter always has a different category.

    1  specifier        X(-,-) <- Y(-,-)   H:X(+,-)
    2  complement       X(S,+) <- H:X(S,+) Y(*,-)     head keeps >= 1 role
    3  final complement X(S,-) <- H:X(S,+) Y(-,-)     head's last role
    4  right adjunct    X(S,-) <- H:X(S,-) Y(-,-)
    5  left adjunct     X(S,-) <- Y(-,-)   H:X(S,-)

Complements (2, 3) discharge the head's next internal theta role; a
specifier discharges the external role when the head still has one.
Adjuncts (4, 5) take no role but must be modifiers of a content head
(see :func:`pbparse.theta.licenses_adjunct`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, NamedTuple, Optional, Tuple

from .errors import (EmptyCorpusError, SpanError, ThetaError,
                     UnclassifiableBranchError, UnseenSchemaError)
from .model import (EXTERNAL, INTERNAL, PhraseMarker, ProperBranch,
                    SyntacticNode, project)
from .theta import discharge, licenses_adjunct

SCHEMA_IDS = (1, 2, 3, 4, 5)
FLAT, MOTHER = "flat", "mother_conditioned"
#: Schemata grouped by the shape of the mother they build.
MOTHER_CLASSES = ((1,), (2,), (3, 4, 5))


class SchemaShape(NamedTuple):
    """Feature pattern of one schema.  ``"S"`` copies the head's SPEC; None is free."""

    head_left: bool
    mother: Tuple[object, bool]
    head: Tuple[object, bool]
    nonhead: Tuple[Optional[bool], bool]
    complement: bool


SCHEMATA: Dict[int, SchemaShape] = {
    1: SchemaShape(False, (False, False), (True, False), (False, False), False),
    2: SchemaShape(True, ("S", True), ("S", True), (None, False), True),
    3: SchemaShape(True, ("S", False), ("S", True), (False, False), True),
    4: SchemaShape(True, ("S", False), ("S", False), (False, False), False),
    5: SchemaShape(False, ("S", False), ("S", False), (False, False), False),
}


def classify(mother, head, nonhead, head_left: bool, complement: bool) -> List[int]:
    """Schemata whose shape fits the given (spec, comp) feature pairs."""
    found = []
    for sid, shape in SCHEMATA.items():
        if shape.head_left != head_left or shape.complement != complement:
            continue
        s = head[0]
        want_mother = tuple(s if v == "S" else v for v in shape.mother)
        want_head = tuple(s if v == "S" else v for v in shape.head)
        if tuple(mother) != want_mother or tuple(head) != want_head:
            continue
        if shape.nonhead[0] is not None and nonhead[0] != shape.nonhead[0]:
            continue
        if nonhead[1] != shape.nonhead[1]:
            continue
        found.append(sid)
    return found


def _mark(node: SyntacticNode, event) -> SyntacticNode:
    return replace(node, assigned_role=event.role) if event else node


def license_branches(left: SyntacticNode, right: SyntacticNode) -> List[ProperBranch]:
    """Every schema instantiation over two adjacent daughters, theta-gated.

    Complement and theta-marked specifier daughters come back carrying
    their assigned role.  Case is left to the caller.
    """
    if left.span[1] != right.span[0]:
        raise SpanError("daughters %r and %r are not adjacent" % (left.span, right.span))
    if left.category == right.category:
        return []
    span = (left.span[0], right.span[1])
    out = []

    # head on the right
    if left.saturated and not right.comp:
        if right.spec:
            head, event = right, None
            if right.external_pending:
                try:
                    head, event = discharge(right, left, EXTERNAL)
                except ThetaError:
                    head = None
            if head is not None:
                out.append(ProperBranch(project(head, False, False, span),
                                        _mark(left, event), right, 1, event))
        if licenses_adjunct(right, left):
            out.append(ProperBranch(project(right, right.spec, False, span),
                                    left, right, 5))

    # head on the left
    if left.comp and not right.comp:
        if left.remaining_internal >= 2 or (left.remaining_internal == 1 and not right.spec):
            try:
                head, event = discharge(left, right, INTERNAL, open_spec=True)
            except ThetaError:
                pass
            else:
                sid = 2 if head.comp else 3
                out.append(ProperBranch(project(head, left.spec, head.comp, span),
                                        left, _mark(right, event), sid, event))
    elif not left.comp and right.saturated and licenses_adjunct(left, right):
        out.append(ProperBranch(project(left, left.spec, False, span),
                                left, right, 4))
    return out


def match_schemata(left: SyntacticNode, right: SyntacticNode):
    """(schema id, mother) for every schema licensing ``left right``."""
    return [(b.schema, b.mother) for b in license_branches(left, right)]


@dataclass(frozen=True)
class SchemaTable:
    mode: str
    entries: Mapping[int, float]
    per_schema_count: Mapping[int, int] = field(default_factory=dict)

    @property
    def total_count(self) -> int:
        return sum(self.per_schema_count.values())

    def probability(self, schema: int) -> float:
        p = self.entries.get(schema, 0.0)
        if p <= 0.0:
            raise UnseenSchemaError("schema %d has no probability mass" % schema)
        return p


def _clean_counts(branch_counts: Mapping[int, int]) -> Dict[int, int]:
    counts = {sid: int(branch_counts.get(sid, 0)) for sid in SCHEMA_IDS}
    unknown = set(branch_counts) - set(SCHEMA_IDS)
    if unknown:
        raise ValueError("unknown schema ids %s" % sorted(unknown))
    if any(c < 0 for c in counts.values()):
        raise ValueError("schema counts must be nonnegative")
    if sum(counts.values()) == 0:
        raise EmptyCorpusError("no schema applications counted")
    return counts


def estimate_flat(branch_counts: Mapping[int, int]) -> SchemaTable:
    """Each schema's share of all branches, regardless of mother."""
    counts = _clean_counts(branch_counts)
    total = sum(counts.values())
    return SchemaTable(FLAT, {sid: c / total for sid, c in counts.items()}, counts)


def estimate_mother_conditioned(branch_counts: Mapping[int, int]) -> SchemaTable:
    """SCFG-style estimate: normalized among schemata sharing a mother shape."""
    counts = _clean_counts(branch_counts)
    entries = {}
    for group in MOTHER_CLASSES:
        total = sum(counts[sid] for sid in group)
        for sid in group:
            entries[sid] = counts[sid] / total if total else 0.0
    return SchemaTable(MOTHER, entries, counts)


def xbar_log_factors(marker: PhraseMarker, table: SchemaTable):
    return [math.log(table.probability(b.schema)) for b in marker.branches]


def xbar_parse_probability(marker: PhraseMarker, table: SchemaTable) -> float:
    """Product of the schema probabilities over every branch of the marker."""
    return math.exp(math.fsum(xbar_log_factors(marker, table)))
