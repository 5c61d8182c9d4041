"""Shared syntactic vocabulary: categories, theta grids, nodes, branches.

Feature values are plain booleans (``True`` is the ``+`` mark).  Spans are
half-open ``(start, end)`` token intervals.  Every object here is immutable;
updates build new objects, so subtrees can be shared freely between parses.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, Optional, Sequence, Tuple

from .errors import InvalidGridError, OutOfVocabularyError, SpanError

Span = Tuple[int, int]


class Category(str, enum.Enum):
    N = "N"
    V = "V"
    P = "P"
    A = "A"
    Adv = "Adv"
    Det = "Det"
    I = "I"
    C = "C"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, label: str) -> "Category":
        try:
            return cls(label)
        except ValueError:
            raise ValueError("unknown category %r" % label) from None


#: Heads whose grids are estimated from the corpus.  Finite verbs are
#: listed under I, non-finite ones under V.
VERBAL = frozenset({Category.V, Category.I})


class Case(str, enum.Enum):
    NOMINATIVE = "nom"
    ACCUSATIVE = "acc"
    OBLIQUE = "obl"
    NONE = "none"

    def __str__(self):
        return self.value


ROLE_LABELS = ("agent", "theme", "goal", "proposition", "location",
               "instrument")
EXTERNAL, INTERNAL = "ext", "int"


def mark(value: bool) -> str:
    return "+" if value else "-"


def parse_mark(text: str) -> bool:
    if text == "+":
        return True
    if text in ("-", "−"):
        return False
    raise ValueError("feature mark must be + or -, got %r" % text)


@dataclass(frozen=True)
class ThetaRole:
    label: str
    position: str
    selects: Category

    def __post_init__(self):
        if self.label not in ROLE_LABELS:
            raise ValueError("unknown theta role %r" % self.label)
        if self.position not in (EXTERNAL, INTERNAL):
            raise ValueError("role position must be ext or int")

    @property
    def external(self) -> bool:
        return self.position == EXTERNAL

    def __str__(self):
        return "%s/%s:%s" % (self.label, self.position, self.selects)

    @classmethod
    def parse(cls, text: str) -> "ThetaRole":
        try:
            label, rest = text.split("/", 1)
            position, selects = rest.split(":", 1)
        except ValueError:
            raise ValueError("malformed theta role %r" % text) from None
        return cls(label, position, Category.parse(selects))


@dataclass(frozen=True)
class ThetaGrid:
    """An ordered argument structure.  Equality is by role sequence only."""

    roles: Tuple[ThetaRole, ...] = ()
    count: int = field(default=0, compare=False)

    def __post_init__(self):
        if sum(r.external for r in self.roles) > 1:
            raise ValueError("a grid has at most one external role")
        if self.count < 0:
            raise ValueError("grid count must be nonnegative")

    @property
    def external(self) -> Optional[ThetaRole]:
        for role in self.roles:
            if role.external:
                return role
        return None

    @property
    def internal(self) -> Tuple[ThetaRole, ...]:
        return tuple(r for r in self.roles if not r.external)

    @property
    def identity(self) -> Tuple[Category, ...]:
        """Grid identity used for probability lookup: internal categories in order."""
        return tuple(r.selects for r in self.internal)

    def __str__(self):
        return ";".join(map(str, self.roles)) or "-"

    @classmethod
    def parse(cls, text: str, count: int = 0) -> "ThetaGrid":
        text = text.strip()
        if text in ("", "-"):
            return cls((), count)
        return cls(tuple(ThetaRole.parse(t) for t in text.split(";")), count)


def format_identity(identity: Sequence[Category]) -> str:
    return "<%s>" % ",".join(map(str, identity))


def parse_identity(text: str) -> Tuple[Category, ...]:
    if not (text.startswith("<") and text.endswith(">")):
        raise ValueError("grid identity must look like <N,P>, got %r" % text)
    inner = text[1:-1]
    return tuple(Category.parse(c) for c in inner.split(",")) if inner else ()


@dataclass(frozen=True)
class LexicalEntry:
    word: str
    category: Category
    spec_required: bool
    grids: Tuple[ThetaGrid, ...]

    def __post_init__(self):
        if not self.grids:
            raise ValueError("entry %r has no theta grid" % self.word)
        if len(set(self.grids)) != len(self.grids):
            raise ValueError("entry %r repeats a theta grid" % self.word)


class Lexicon:
    """Word form to lexical entries, in file order."""

    def __init__(self, entries: Sequence[LexicalEntry] = ()):
        self._entries: Dict[str, Tuple[LexicalEntry, ...]] = {}
        for entry in entries:
            self._entries[entry.word] = self._entries.get(entry.word, ()) + (entry,)

    def __contains__(self, word):
        return word in self._entries

    def __iter__(self) -> Iterator[LexicalEntry]:
        for entries in self._entries.values():
            yield from entries

    def __len__(self):
        return sum(len(e) for e in self._entries.values())

    def __eq__(self, other):
        return isinstance(other, Lexicon) and self._entries == other._entries

    def lookup(self, word: str) -> Tuple[LexicalEntry, ...]:
        try:
            return self._entries[word]
        except KeyError:
            raise OutOfVocabularyError(word) from None

    def words(self):
        return list(self._entries)


@dataclass(frozen=True)
class SyntacticNode:
    """A (possibly partial) projection of a lexical head.

    ``spec`` is True while the head still wants a specifier, ``comp`` while
    its grid has undischarged internal roles.  ``assigned_role`` and ``case``
    are only set on the copy of a daughter stored inside the branch that
    marked it; chart items never carry them.
    """

    category: Category
    spec: bool
    comp: bool
    head_word: str
    head_index: int
    selected_grid: ThetaGrid
    remaining_internal: int
    external_pending: bool
    span: Span
    head_entry: Optional[LexicalEntry] = field(default=None, compare=False,
                                               repr=False)
    assigned_role: Optional[ThetaRole] = None
    case: Optional[Case] = None

    def __post_init__(self):
        assert self.comp == (self.remaining_internal > 0), \
            "COMP must mirror the undischarged internal roles"
        assert 0 <= self.remaining_internal <= len(self.selected_grid.internal)
        start, end = self.span
        if not 0 <= start < end:
            raise SpanError("bad span %r" % (self.span,))

    @property
    def saturated(self) -> bool:
        return not self.spec and not self.comp

    @property
    def features(self) -> str:
        return "%s:%s:%s" % (self.category, mark(self.spec), mark(self.comp))

    def bare(self) -> "SyntacticNode":
        if self.assigned_role is None and self.case is None:
            return self
        return replace(self, assigned_role=None, case=None)

    def next_internal(self) -> Optional[ThetaRole]:
        internal = self.selected_grid.internal
        if self.remaining_internal == 0:
            return None
        return internal[len(internal) - self.remaining_internal]

    def __str__(self):
        return "%s[%s]%d-%d" % (self.features, self.head_word, *self.span)


def leaf_node(entry: LexicalEntry, grid: ThetaGrid, position: int,
              sentence_length: Optional[int] = None) -> SyntacticNode:
    if grid not in entry.grids:
        raise InvalidGridError("grid %s does not belong to %r" % (grid, entry.word))
    if position < 0 or (sentence_length is not None and position >= sentence_length):
        raise SpanError("position %d outside the sentence" % position)
    n_internal = len(grid.internal)
    return SyntacticNode(
        category=entry.category,
        spec=entry.spec_required,
        comp=n_internal > 0,
        head_word=entry.word,
        head_index=position,
        selected_grid=grid,
        remaining_internal=n_internal,
        external_pending=grid.external is not None,
        span=(position, position + 1),
        head_entry=entry,
    )


def project(node: SyntacticNode, new_spec: bool, new_comp: bool,
            new_span: Span) -> SyntacticNode:
    if not (new_span[0] <= node.span[0] and node.span[1] <= new_span[1]):
        raise SpanError("span %r does not contain %r" % (new_span, node.span))
    return replace(node, spec=new_spec, comp=new_comp, span=new_span,
                   assigned_role=None, case=None)


@dataclass(frozen=True)
class ThetaEvent:
    licenser_word: str
    licenser_index: int
    role: ThetaRole
    receiver: Span

    def __str__(self):
        return "theta %s@%d %s -> %d-%d" % (
            self.licenser_word, self.licenser_index, self.role, *self.receiver)


@dataclass(frozen=True)
class CaseEvent:
    assigner_word: str
    assigner_index: int
    assigner_category: Category
    value: Case
    receiver: Span

    def __str__(self):
        return "case %s@%d %s -> %d-%d" % (
            self.assigner_word, self.assigner_index, self.value, *self.receiver)


#: Schemata whose non-head daughter sits to the left of the head.
LEFT_NONHEAD = frozenset({1, 5})
#: Schemata attaching a complement (theta-marked, shown with ``+``).
COMPLEMENT_SCHEMATA = frozenset({2, 3})


@dataclass(frozen=True)
class ProperBranch:
    mother: SyntacticNode
    left: SyntacticNode
    right: SyntacticNode
    schema: int
    theta_event: Optional[ThetaEvent] = None
    case_event: Optional[CaseEvent] = None

    def __post_init__(self):
        if not 1 <= self.schema <= 5:
            raise ValueError("schema id out of range")
        if self.left.span[1] != self.right.span[0] or \
                self.mother.span != (self.left.span[0], self.right.span[1]):
            raise SpanError("daughter spans must concatenate to the mother span")

    @property
    def head(self) -> SyntacticNode:
        return self.right if self.schema in LEFT_NONHEAD else self.left

    @property
    def nonhead(self) -> SyntacticNode:
        return self.left if self.schema in LEFT_NONHEAD else self.right


@dataclass(frozen=True)
class PhraseMarker:
    """A complete binary tree of proper branches over a sentence.

    ``branches`` are kept in post-order, so two markers are equal exactly
    when they are the same structure with the same licensing records.
    """

    leaves: Tuple[SyntacticNode, ...]
    branches: Tuple[ProperBranch, ...] = ()

    @property
    def root(self) -> SyntacticNode:
        return self.branches[-1].mother if self.branches else self.leaves[0]

    @property
    def tokens(self) -> Tuple[str, ...]:
        return tuple(leaf.head_word for leaf in self.leaves)

    def branch_at(self, span: Span) -> Optional[ProperBranch]:
        for branch in self.branches:
            if branch.mother.span == span:
                return branch
        return None

    def theta_events(self):
        return [b.theta_event for b in self.branches if b.theta_event]

    def case_events(self):
        return [b.case_event for b in self.branches if b.case_event]

    def schema_ids(self):
        return [b.schema for b in self.branches]

    def well_formed(self) -> bool:
        """Binary tree over the full sentence, every daughter built below."""
        n = len(self.leaves)
        if n == 0 or len(self.branches) != n - 1:
            return False
        if any(leaf.span != (i, i + 1) for i, leaf in enumerate(self.leaves)):
            return False
        by_span = {b.mother.span: b for b in self.branches}
        if len(by_span) != len(self.branches) or self.root.span != (0, n):
            return False
        for branch in self.branches:
            for daughter in (branch.left, branch.right):
                start, end = daughter.span
                if end - start == 1:
                    below = self.leaves[start]
                else:
                    below = by_span.get(daughter.span)
                    below = below.mother if below else None
                if below != daughter.bare():
                    return False
        return True

    def bracketed(self) -> str:
        """Corpus-format serialization of the tree and its features."""
        by_span = {b.mother.span: b for b in self.branches}

        def render(span):
            if span[1] - span[0] == 1:
                leaf = self.leaves[span[0]]
                return "(%s =%s)" % (leaf.features, leaf.head_word)
            branch = by_span[span]
            parts = []
            for daughter in (branch.left, branch.right):
                if daughter is branch.head:
                    prefix = "^"
                elif branch.schema in COMPLEMENT_SCHEMATA:
                    prefix = "+"
                else:
                    prefix = ""
                parts.append(prefix + render(daughter.span))
            return "(%s %s)" % (branch.mother.features, " ".join(parts))

        return render(self.root.span)

    def grid_signature(self) -> str:
        return " ".join("%s{%s}" % (leaf.head_word, leaf.selected_grid)
                        for leaf in self.leaves)

    def key(self) -> str:
        """Canonical serialization used for ordering and tie-breaking."""
        return self.bracketed() + " | " + self.grid_signature()

    def trace_lines(self):
        lines = []
        for branch in self.branches:
            line = "schema %d %s <- %s %s" % (
                branch.schema, branch.mother, branch.left.bare(), branch.right.bare())
            lines.append(line)
            for event in (branch.theta_event, branch.case_event):
                if event is not None:
                    lines.append("    " + str(event))
        return lines
