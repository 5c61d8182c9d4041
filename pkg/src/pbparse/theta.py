"""Theta theory: grid discharge, the theta criterion, grid probabilities."""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import (CriterionViolation, DoubleRoleError, EmptyCorpusError,
                     SelectionError, UnseenGridError)
from .model import (EXTERNAL, INTERNAL, Category, PhraseMarker,
                    SyntacticNode, ThetaEvent)

GridKey = Tuple[str, Tuple[Category, ...]]


def discharge(head: SyntacticNode, argument: SyntacticNode, position_kind: str,
              open_spec: bool = False):
    """Assign the head's next role of the given kind to ``argument``.

    Internal roles go strictly in grid order.  Returns the head with its
    theta state advanced (span and SPEC untouched) plus the event record.
    ``open_spec`` waives the SPEC=- requirement on the argument, which the
    non-final complement schema needs.
    """
    if argument.assigned_role is not None:
        raise DoubleRoleError("%s already bears %s" % (argument, argument.assigned_role))
    if argument.comp or (argument.spec and not open_spec):
        raise CriterionViolation("%s is not a maximal projection" % argument)

    if position_kind == INTERNAL:
        role = head.next_internal()
        if role is None:
            raise CriterionViolation("%s has no internal role left" % head)
        remaining = head.remaining_internal - 1
        updated = replace(head, remaining_internal=remaining, comp=remaining > 0)
    elif position_kind == EXTERNAL:
        if not head.external_pending:
            raise CriterionViolation("%s has no external role to assign" % head)
        role = head.selected_grid.external
        updated = replace(head, external_pending=False)
    else:
        raise ValueError("position_kind must be %r or %r" % (INTERNAL, EXTERNAL))

    if role.selects != argument.category:
        raise SelectionError("%s selects %s, not %s" % (role, role.selects, argument.category))
    event = ThetaEvent(head.head_word, head.head_index, role, argument.span)
    return updated, event


#: Categories that can modify a projection without being theta-marked.
ADJUNCT_CATEGORIES = frozenset({Category.A, Category.Adv, Category.P})
#: Categories whose projections accept modifiers; functional Det and C do not.
HOST_CATEGORIES = frozenset({Category.N, Category.V, Category.A, Category.P,
                             Category.I})


def licenses_adjunct(host: SyntacticNode, adjunct: SyntacticNode) -> bool:
    """Whether ``adjunct`` may modify ``host`` without taking a theta role."""
    return host.category in HOST_CATEGORIES and adjunct.category in ADJUNCT_CATEGORIES


def check_complete(marker: PhraseMarker) -> bool:
    """Theta criterion over a whole marker, recomputed from its events.

    Every leaf's grid must be fully discharged, every complement and every
    theta-marked specifier must bear exactly one role, adjuncts none, and
    the root must be saturated.
    """
    internal_done = Counter()
    external_done = Counter()
    receivers = Counter()
    for branch in marker.branches:
        event = branch.theta_event
        if branch.schema in (2, 3) and event is None:
            return False
        if branch.schema in (4, 5) and event is not None:
            return False
        if event is None:
            continue
        if event.receiver != branch.nonhead.span or \
                event.licenser_index != branch.head.head_index:
            return False
        if event.role.external:
            external_done[event.licenser_index] += 1
        else:
            internal_done[event.licenser_index] += 1
        receivers[event.receiver] += 1

    for leaf in marker.leaves:
        grid = leaf.selected_grid
        if internal_done[leaf.head_index] != len(grid.internal):
            return False
        if external_done[leaf.head_index] != (grid.external is not None):
            return False
    if any(n != 1 for n in receivers.values()):
        return False
    root = marker.root
    return not root.spec and not root.comp and not root.external_pending


@dataclass(frozen=True)
class ThetaTable:
    """Per-head grid distribution; heads not listed get ``default_probability``."""

    entries: Mapping[GridKey, float] = field(default_factory=dict)
    counts: Mapping[GridKey, int] = field(default_factory=dict)
    default_probability: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.default_probability <= 1.0:
            raise ValueError("default probability must lie in (0, 1]")

    @cached_property
    def heads(self):
        return {word for word, _ in self.entries}

    def probability(self, word: str, identity: Tuple[Category, ...]) -> float:
        key = (word, tuple(identity))
        if key in self.entries:
            p = self.entries[key]
            if p <= 0.0:
                raise UnseenGridError("grid <%s> has zero probability for %r" % (
                    ",".join(map(str, identity)), word))
            return p
        if word in self.heads:
            raise UnseenGridError("grid <%s> never observed with %r" % (
                ",".join(map(str, identity)), word))
        return self.default_probability

    def head_totals(self) -> Dict[str, float]:
        totals = defaultdict(float)
        for (word, _), p in self.entries.items():
            totals[word] += p
        return dict(totals)


def estimate_theta_table(
        observations: Union[Iterable[GridKey], Mapping[GridKey, int]],
        default_probability: float = 1.0) -> ThetaTable:
    """Relative frequency of each grid among all grids seen with its head.

    ``observations`` is either a sequence of (head word, grid identity)
    pairs or a mapping from such pairs to counts.
    """
    counts = Counter(observations)
    counts = Counter({(w, tuple(g)): c for (w, g), c in counts.items() if c > 0})
    if not counts:
        raise EmptyCorpusError("no theta observations")
    per_head = Counter()
    for (word, _), c in counts.items():
        per_head[word] += c
    entries = {key: c / per_head[key[0]] for key, c in counts.items()}
    return ThetaTable(entries, dict(counts), default_probability)


def theta_log_factors(marker: PhraseMarker, table: ThetaTable):
    """One log factor per leaf: the probability of its selected grid as a whole."""
    if not check_complete(marker):
        raise CriterionViolation("marker violates the theta criterion")
    return [math.log(table.probability(leaf.head_word, leaf.selected_grid.identity))
            for leaf in marker.leaves]


def theta_parse_probability(marker: PhraseMarker, table: ThetaTable) -> float:
    return math.exp(math.fsum(theta_log_factors(marker, table)))
