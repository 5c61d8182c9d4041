"""Bottom-up chart that proposes proper branches and keeps the licensed ones.

Any structure-proposing interpreter would do, since the grammar only sees
individual branches.  The chart tries every adjacent pair of items, which
makes the enumeration of complete phrase markers exhaustive.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Sequence, Tuple

from . import case as case_module
from .errors import EmptyInputError, ParseLimitError
from .model import (Category, Lexicon, PhraseMarker, ProperBranch, Span,
                    SyntacticNode, leaf_node)
from .theta import check_complete
from .xbar import license_branches

log = logging.getLogger(__name__)

DEFAULT_MAX_PARSES = 10_000

Chart = Dict[Span, Dict[SyntacticNode, List[ProperBranch]]]


@dataclass
class ParseForest:
    sentence: Tuple[str, ...]
    items: Chart
    completed: Tuple[PhraseMarker, ...] = ()
    case_filter: bool = True

    def item_count(self) -> int:
        return sum(len(cell) for cell in self.items.values())


def _with_case(branch: ProperBranch) -> ProperBranch:
    event = case_module.assign_case(branch)
    if event is None:
        return branch
    marked = replace(branch.nonhead, case=event.value)
    if branch.nonhead is branch.left:
        return replace(branch, left=marked, case_event=event)
    return replace(branch, right=marked, case_event=event)


def _caseless_argument(branch: ProperBranch) -> bool:
    return (branch.theta_event is not None and branch.case_event is None
            and branch.nonhead.category == Category.N)


def build_chart(tokens: Sequence[str], lexicon: Lexicon, case_filter: bool = True) -> Chart:
    n = len(tokens)
    chart: Chart = {}
    for i, word in enumerate(tokens):
        cell = chart[(i, i + 1)] = {}
        for entry in lexicon.lookup(word):
            for grid in entry.grids:
                cell[leaf_node(entry, grid, i, n)] = []

    for length in range(2, n + 1):
        for start in range(0, n - length + 1):
            end = start + length
            cell = chart[(start, end)] = {}
            for split in range(start + 1, end):
                for left in chart[(start, split)]:
                    for right in chart[(split, end)]:
                        for branch in license_branches(left, right):
                            if branch.nonhead.external_pending:
                                # its head has stopped projecting; the role is lost
                                continue
                            branch = _with_case(branch)
                            if case_filter and _caseless_argument(branch):
                                continue
                            cell.setdefault(branch.mother, []).append(branch)
    return chart


def _derivations(chart: Chart, node: SyntacticNode, memo):
    key = (node.span, node)
    if key in memo:
        return memo[key]
    backpointers = chart[node.span][node]
    if not backpointers:
        result = [((node,), ())]
    else:
        result = []
        for branch in backpointers:
            lefts = _derivations(chart, branch.left.bare(), memo)
            rights = _derivations(chart, branch.right.bare(), memo)
            for (ll, lb), (rl, rb) in itertools.product(lefts, rights):
                result.append((ll + rl, lb + rb + (branch,)))
    memo[key] = result
    return result


def parse(tokens: Sequence[str], lexicon: Lexicon, case_filter: bool = True,
          max_parses: int = DEFAULT_MAX_PARSES) -> ParseForest:
    """All complete phrase markers of ``tokens`` licensed by the grammar."""
    tokens = tuple(tokens)
    if not tokens:
        raise EmptyInputError("cannot parse an empty sentence")
    chart = build_chart(tokens, lexicon, case_filter)
    memo = {}
    found = {}
    for root in chart[(0, len(tokens))]:
        if root.spec or root.comp or root.external_pending:
            continue
        for leaves, branches in _derivations(chart, root, memo):
            marker = PhraseMarker(leaves, branches)
            if not check_complete(marker):
                continue
            if case_filter and not case_module.case_filter(marker):
                continue
            found[marker] = None
            if len(found) > max_parses:
                raise ParseLimitError("more than %d parses for %r" % (
                    max_parses, " ".join(tokens)))
    completed = tuple(sorted(found, key=PhraseMarker.key))
    log.debug("%d items, %d parses for %r", sum(map(len, chart.values())),
              len(completed), " ".join(tokens))
    return ParseForest(tokens, chart, completed, case_filter)


def enumerate_markers(forest: ParseForest) -> List[PhraseMarker]:
    """Completed markers in canonical (serialization) order, without duplicates."""
    unique = {m.key(): m for m in forest.completed}
    return [unique[k] for k in sorted(unique)]
