"""Bracketed training corpus, lexicon file and probability-table file.

Corpus trees, one per top-level s-expression::

    (I:-:- (N:-:- (Det:-:- =the) ^(N:+:- =dog)) ^(I:+:- =barked))

An internal node is ``(CAT:SPEC:COMP left right)``; the head daughter is
prefixed ``^``, a complement ``+``, specifiers and adjuncts are bare.  A
leaf is ``(CAT:SPEC:COMP =word)``.  ``;`` starts a comment.

Lexicon lines are tab-separated ``word  category  spec  grid  [count]``
where ``grid`` is ``label/position:category`` terms joined by ``;`` (``-``
for the empty grid).  One line per grid; lines sharing word and category
form one entry.

Table files start with a version header, then ``mode``/``default`` lines,
``schema <id> <count> <p>`` and ``theta <word> <identity> <count> <p>``
lines, probabilities written with 12 significant digits.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import EmptyCorpusError, LoadError, UnclassifiableBranchError
from .model import (VERBAL, Category, LexicalEntry, Lexicon, ThetaGrid,
                    format_identity, mark, parse_identity, parse_mark)
from .theta import ThetaTable, estimate_theta_table
from .xbar import (FLAT, MOTHER, MOTHER_CLASSES, SCHEMA_IDS, SchemaTable,
                   classify, estimate_flat, estimate_mother_conditioned)

TABLES_HEADER = "pbparse-tables 1"
HEAD, COMPLEMENT = "^", "+"
NORMALIZATION_TOLERANCE = 1e-6


@dataclass
class CorpusTree:
    category: Category
    spec: bool
    comp: bool
    word: Optional[str] = None
    children: Tuple["CorpusTree", ...] = ()
    role: Optional[str] = None  # "^", "+" or None, relative to the parent
    line: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.word is not None

    @property
    def features(self) -> Tuple[bool, bool]:
        return (self.spec, self.comp)

    def head_child(self) -> "CorpusTree":
        return next(c for c in self.children if c.role == HEAD)

    def leaves(self) -> List["CorpusTree"]:
        if self.is_leaf:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves()]

    def internal_nodes(self):
        if self.is_leaf:
            return
        for child in self.children:
            yield from child.internal_nodes()
        yield self

    def __str__(self):
        return format_tree(self)


def format_tree(tree: CorpusTree) -> str:
    label = "%s:%s:%s" % (tree.category, mark(tree.spec), mark(tree.comp))
    if tree.is_leaf:
        return "(%s =%s)" % (label, tree.word)
    parts = [(child.role or "") + format_tree(child) for child in tree.children]
    return "(%s %s)" % (label, " ".join(parts))


_TOKEN = re.compile(r"""
    (?P<ws>\s+) | (?P<comment>;[^\n]*)
  | (?P<open>[\^+]?\() | (?P<close>\))
  | (?P<word>=[^\s()]+) | (?P<atom>[^\s()]+)
""", re.VERBOSE)


def _tokenize(text: str, source):
    tokens = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append((kind, m.group(), line))
        line += m.group().count("\n")
        pos = m.end()
    return tokens


def _parse_label(atom: str, line: int, source) -> Tuple[Category, bool, bool]:
    parts = atom.split(":")
    if len(parts) != 3:
        raise LoadError("node label %r is not CAT:SPEC:COMP" % atom, line, source)
    try:
        return Category.parse(parts[0]), parse_mark(parts[1]), parse_mark(parts[2])
    except ValueError as exc:
        raise LoadError(str(exc), line, source) from None


def read_corpus(text: str, source: Optional[str] = None) -> List[CorpusTree]:
    """Parse and validate every tree in a corpus document."""
    tokens = _tokenize(text, source)
    if not tokens:
        raise LoadError("empty corpus", None, source)
    pos = 0

    def node(role):
        nonlocal pos
        kind, value, line = tokens[pos]
        if kind != "open":
            raise LoadError("expected '(' but found %r" % value, line, source)
        pos += 1
        if pos >= len(tokens) or tokens[pos][0] != "atom":
            raise LoadError("missing node label", line, source)
        category, spec, comp = _parse_label(tokens[pos][1], tokens[pos][2], source)
        pos += 1
        if pos < len(tokens) and tokens[pos][0] == "word":
            word = tokens[pos][1][1:]
            pos += 1
            _expect_close(line)
            return CorpusTree(category, spec, comp, word, (), role, line)
        children = []
        while pos < len(tokens) and tokens[pos][0] == "open":
            prefix = tokens[pos][1][:-1] or None
            children.append(node(prefix))
        _expect_close(line)
        tree = CorpusTree(category, spec, comp, None, tuple(children), role, line)
        _validate(tree, source)
        return tree

    def _expect_close(line):
        nonlocal pos
        if pos >= len(tokens):
            raise LoadError("unbalanced parentheses", line, source)
        kind, value, at = tokens[pos]
        if kind != "close":
            raise LoadError("unexpected %r" % value, at, source)
        pos += 1

    trees = []
    while pos < len(tokens):
        kind, value, line = tokens[pos]
        if kind != "open" or value != "(":
            raise LoadError("a tree must start with a bare '('", line, source)
        trees.append(node(None))
    return trees


def _validate(tree: CorpusTree, source):
    if len(tree.children) != 2:
        raise LoadError("internal node must have exactly two daughters, has %d"
                        % len(tree.children), tree.line, source)
    heads = [c for c in tree.children if c.role == HEAD]
    if not heads:
        raise LoadError("missing head marker", tree.line, source)
    if len(heads) > 1:
        raise LoadError("multiple head markers", tree.line, source)
    if heads[0].category != tree.category:
        raise LoadError("head daughter category %s differs from mother %s"
                        % (heads[0].category, tree.category), tree.line, source)


@dataclass
class CountBundle:
    schema_counts: Dict[int, int]
    theta_observations: List[Tuple[str, Tuple[Category, ...]]] = field(default_factory=list)
    tree_count: int = 0


def classify_node(tree: CorpusTree) -> int:
    head = tree.head_child()
    other = next(c for c in tree.children if c is not head)
    matches = []
    if other.category != tree.category:
        matches = classify(tree.features, head.features, other.features,
                           head_left=tree.children[0] is head,
                           complement=other.role == COMPLEMENT)
    if len(matches) != 1:
        raise UnclassifiableBranchError(
            "%s fits no X-bar schema" % format_tree(tree), tree.line)
    return matches[0]


def extract_counts(trees: Sequence[CorpusTree]) -> CountBundle:
    """Schema applications per node, and verb grids from complement sisters."""
    if not trees:
        raise EmptyCorpusError("no trees to count")
    counts = Counter({sid: 0 for sid in SCHEMA_IDS})
    observations = []
    for tree in trees:
        complements: Dict[int, List[Category]] = {}

        def walk(node):
            # returns the head leaf of ``node``
            if node.is_leaf:
                complements[id(node)] = []
                return node
            counts[classify_node(node)] += 1
            head_leaves = [walk(child) for child in node.children]
            head = node.children.index(node.head_child())
            for i, child in enumerate(node.children):
                if child.role == COMPLEMENT:
                    complements[id(head_leaves[head])].append(child.category)
            return head_leaves[head]

        walk(tree)
        for leaf in tree.leaves():
            if leaf.category in VERBAL:
                observations.append((leaf.word, tuple(complements[id(leaf)])))
    return CountBundle(dict(counts), observations, len(trees))


# -- lexicon -----------------------------------------------------------------

def read_lexicon(text: str, source: Optional[str] = None) -> Lexicon:
    order: List[Tuple[str, Category]] = []
    specs: Dict[Tuple[str, Category], bool] = {}
    grids: Dict[Tuple[str, Category], List[ThetaGrid]] = {}
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (4, 5):
            raise LoadError("expected 4 or 5 tab-separated fields, got %d" % len(fields),
                            lineno, source)
        word = fields[0]
        try:
            category = Category.parse(fields[1])
            spec = parse_mark(fields[2])
            count = int(fields[4]) if len(fields) == 5 else 0
            grid = ThetaGrid.parse(fields[3], count)
        except ValueError as exc:
            raise LoadError(str(exc), lineno, source) from None
        if not word or any(c.isspace() for c in word):
            raise LoadError("bad word form %r" % word, lineno, source)
        key = (word, category)
        if key not in specs:
            order.append(key)
            specs[key] = spec
            grids[key] = []
        elif specs[key] != spec:
            raise LoadError("conflicting spec mark for %s/%s" % key, lineno, source)
        if grid in grids[key]:
            raise LoadError("duplicate record for %s %s %s" % (word, category, grid),
                            lineno, source)
        grids[key].append(grid)
    if not order:
        raise LoadError("empty lexicon", None, source)
    return Lexicon([LexicalEntry(w, c, specs[(w, c)], tuple(grids[(w, c)]))
                    for w, c in order])


def write_lexicon(lexicon: Lexicon) -> str:
    lines = []
    for entry in lexicon:
        for grid in entry.grids:
            fields = [entry.word, str(entry.category), mark(entry.spec_required), str(grid)]
            if grid.count:
                fields.append(str(grid.count))
            lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def lexicon_observations(lexicon: Lexicon) -> Counter:
    """Grid counts carried by the lexicon, keyed like corpus observations."""
    counts = Counter()
    for entry in lexicon:
        for grid in entry.grids:
            if grid.count:
                counts[(entry.word, grid.identity)] += grid.count
    return counts


# -- tables ------------------------------------------------------------------

def _fmt(p: float) -> str:
    return "%.12g" % p


def write_tables(schema_table: SchemaTable, theta_table: ThetaTable) -> str:
    lines = [TABLES_HEADER,
             "mode %s" % schema_table.mode,
             "default %s" % _fmt(theta_table.default_probability)]
    for sid in SCHEMA_IDS:
        lines.append("schema %d %d %s" % (sid, schema_table.per_schema_count.get(sid, 0),
                                          _fmt(schema_table.entries.get(sid, 0.0))))
    for (word, identity) in sorted(theta_table.entries,
                                   key=lambda k: (k[0], format_identity(k[1]))):
        lines.append("theta %s %s %d %s" % (
            word, format_identity(identity), theta_table.counts.get((word, identity), 0),
            _fmt(theta_table.entries[(word, identity)])))
    return "\n".join(lines) + "\n"


def read_tables(text: str, source: Optional[str] = None):
    """Inverse of :func:`write_tables`.

    Written probabilities are checked for normalization and against the
    counts; the returned tables carry the exact count ratios.
    """
    lines = text.split("\n")
    if not lines or lines[0].strip() != TABLES_HEADER:
        raise LoadError("unsupported table version (expected %r)" % TABLES_HEADER, 1, source)
    mode, default = None, 1.0
    schema_counts, schema_probs, schema_lines = {}, {}, {}
    theta_counts, theta_probs, theta_lines = {}, {}, {}
    for lineno, raw in enumerate(lines[1:], 2):
        fields = raw.split()
        if not fields or fields[0].startswith("#"):
            continue
        try:
            if fields[0] == "mode" and len(fields) == 2:
                if fields[1] not in (FLAT, MOTHER):
                    raise ValueError("unknown mode %r" % fields[1])
                mode = fields[1]
            elif fields[0] == "default" and len(fields) == 2:
                default = float(fields[1])
            elif fields[0] == "schema" and len(fields) == 4:
                sid = int(fields[1])
                if sid not in SCHEMA_IDS or sid in schema_counts:
                    raise ValueError("bad or repeated schema id %d" % sid)
                schema_counts[sid] = int(fields[2])
                schema_probs[sid] = float(fields[3])
                schema_lines[sid] = lineno
            elif fields[0] == "theta" and len(fields) == 5:
                key = (fields[1], parse_identity(fields[2]))
                if key in theta_counts:
                    raise ValueError("repeated theta record")
                theta_counts[key] = int(fields[3])
                theta_probs[key] = float(fields[4])
                theta_lines[key] = lineno
            else:
                raise ValueError("unrecognised line %r" % raw)
        except ValueError as exc:
            raise LoadError(str(exc), lineno, source) from None
    if mode is None:
        raise LoadError("missing mode line", None, source)

    groups = [SCHEMA_IDS] if mode == FLAT else MOTHER_CLASSES
    for group in groups:
        if sum(schema_counts.get(s, 0) for s in group) == 0:
            continue
        total = math.fsum(schema_probs.get(s, 0.0) for s in group)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise LoadError("schema probabilities %s sum to %.9g" % (list(group), total),
                            None, source)
    per_head: Dict[str, List[float]] = {}
    for (word, _), p in theta_probs.items():
        per_head.setdefault(word, []).append(p)
    for word, probs in per_head.items():
        if abs(math.fsum(probs) - 1.0) > NORMALIZATION_TOLERANCE:
            raise LoadError("theta probabilities for %r sum to %.9g"
                            % (word, math.fsum(probs)), None, source)

    try:
        estimate = estimate_flat if mode == FLAT else estimate_mother_conditioned
        schema_table = estimate(schema_counts)
        theta_table = (estimate_theta_table(theta_counts, default) if theta_counts
                       else ThetaTable({}, {}, default))
    except (EmptyCorpusError, ValueError) as exc:
        raise LoadError(str(exc), None, source) from None
    for sid, p in schema_probs.items():
        if abs(schema_table.entries[sid] - p) > NORMALIZATION_TOLERANCE:
            raise LoadError("schema %d probability disagrees with its count" % sid,
                            schema_lines[sid], source)
    for key, p in theta_probs.items():
        if abs(theta_table.entries.get(key, 0.0) - p) > NORMALIZATION_TOLERANCE:
            raise LoadError("theta probability disagrees with its count",
                            theta_lines[key], source)
    return schema_table, theta_table


def train(trees: Sequence[CorpusTree], lexicon: Optional[Lexicon] = None,
          conditioning: str = FLAT, default_probability: float = 1.0):
    """Corpus (plus optional lexicon grid counts) to a pair of tables."""
    bundle = extract_counts(trees)
    estimate = estimate_flat if conditioning == FLAT else estimate_mother_conditioned
    schema_table = estimate(bundle.schema_counts)
    observations = Counter(bundle.theta_observations)
    if lexicon is not None:
        observations.update(lexicon_observations(lexicon))
    if observations:
        theta_table = estimate_theta_table(observations, default_probability)
    else:
        theta_table = ThetaTable({}, {}, default_probability)
    return schema_table, theta_table, bundle


def bundled_path(name: str) -> str:
    """Filesystem path of a fixture shipped in ``pbparse/data``."""
    from importlib import resources
    return str(resources.files("pbparse") / "data" / name)
