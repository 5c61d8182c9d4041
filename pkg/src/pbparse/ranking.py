"""Per-module ("pure") parse probabilities and their product.

Each module's probability is built only from that module's own factors;
the global probability is their product.  Factors are accumulated as logs
with ``math.fsum``, which is exactly rounded, so markers with the same
multiset of factors get bit-identical scores whatever the branch order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from .model import PhraseMarker
from .theta import ThetaTable, theta_log_factors
from .xbar import SchemaTable, xbar_log_factors

LogFactors = Callable[[PhraseMarker], List[float]]


@dataclass(frozen=True)
class RankedParse:
    marker: PhraseMarker
    xbar_prob: float
    theta_prob: float
    global_prob: float
    rank: int
    log_prob: float = 0.0


class Scorer:
    """Named log-factor sources combined by product.

    Only X-bar and theta ship; Case deliberately contributes nothing.
    """

    def __init__(self, schema_table: SchemaTable, theta_table: ThetaTable):
        self.factors: Dict[str, LogFactors] = {
            "xbar": lambda m: xbar_log_factors(m, schema_table),
            "theta": lambda m: theta_log_factors(m, theta_table),
        }

    def module_logs(self, marker: PhraseMarker) -> Dict[str, List[float]]:
        return {name: fn(marker) for name, fn in self.factors.items()}

    def __call__(self, marker: PhraseMarker) -> Tuple[float, float, float, float]:
        logs = self.module_logs(marker)
        everything = [x for name in logs for x in logs[name]]
        total = math.fsum(everything)
        return (math.exp(math.fsum(logs["xbar"])),
                math.exp(math.fsum(logs["theta"])),
                math.exp(total), total)


def score(marker: PhraseMarker, schema_table: SchemaTable,
          theta_table: ThetaTable) -> Tuple[float, float, float]:
    """(xbar_prob, theta_prob, global_prob) for one complete marker."""
    return Scorer(schema_table, theta_table)(marker)[:3]


def rank(markers: Sequence[PhraseMarker], schema_table: SchemaTable,
         theta_table: ThetaTable) -> List[RankedParse]:
    scorer = Scorer(schema_table, theta_table)
    scored = []
    for marker in markers:
        xbar, theta, glob, logp = scorer(marker)
        scored.append((-logp, marker.key(), marker, xbar, theta, glob))
    scored.sort(key=lambda row: row[:2])
    return [RankedParse(marker, xbar, theta, glob, i, -neg)
            for i, (neg, _, marker, xbar, theta, glob) in enumerate(scored, 1)]
