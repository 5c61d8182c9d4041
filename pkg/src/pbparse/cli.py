"""Command-line front end: ``pbparse train | parse | eval``.

Exit codes: 0 success, 1 bad input data, 2 usage or unreadable file.
"""
from __future__ import annotations

import argparse
import logging
import statistics
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from .corpus import (format_tree, read_corpus, read_lexicon, read_tables,
                     train, write_tables)
from .engine import DEFAULT_MAX_PARSES, enumerate_markers, parse
from .errors import (GrammarError, LoadError, OutOfVocabularyError,
                     UnclassifiableBranchError)
from .ranking import RankedParse, rank
from .xbar import FLAT, MOTHER

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


class FileProblem(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise FileProblem("cannot read %s: %s" % (path, getattr(exc, "strerror", None) or exc))


def _write(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise FileProblem("cannot write %s: %s" % (path, exc.strerror or exc))


def fmt_prob(p: float) -> str:
    return "%.12g" % p


def format_ranked(parse: RankedParse, trace: bool = False) -> List[str]:
    lines = ["rank %d  global=%s  xbar=%s  theta=%s" % (
        parse.rank, fmt_prob(parse.global_prob), fmt_prob(parse.xbar_prob),
        fmt_prob(parse.theta_prob)),
        "  " + parse.marker.bracketed()]
    if trace:
        lines.append("  grids: " + parse.marker.grid_signature())
        lines.extend("  " + line for line in parse.marker.trace_lines())
    return lines


def rank_sentence(tokens, lexicon, tables, case_filter=True, max_parses=DEFAULT_MAX_PARSES):
    forest = parse(tokens, lexicon, case_filter=case_filter, max_parses=max_parses)
    return rank(enumerate_markers(forest), *tables)


# -- eval --------------------------------------------------------------------

@dataclass
class EvalRow:
    index: int
    sentence: str
    gold: Optional[str] = None
    status: str = "ok"
    message: str = ""
    ranked: List[RankedParse] = field(default_factory=list)

    @property
    def analyses(self) -> int:
        return len(self.ranked)

    @property
    def top(self) -> Optional[str]:
        return self.ranked[0].marker.bracketed() if self.ranked else None

    @property
    def match(self) -> Optional[bool]:
        if self.gold is None or self.status != "ok":
            return None
        return self.top == self.gold


@dataclass
class EvalReport:
    rows: List[EvalRow]

    @property
    def sentence_count(self) -> int:
        return len(self.rows)

    @property
    def counts(self) -> List[int]:
        return [r.analyses for r in self.rows if r.status == "ok"]

    @property
    def mean(self) -> float:
        return statistics.mean(self.counts) if self.counts else float("nan")

    @property
    def median(self) -> float:
        return statistics.median(self.counts) if self.counts else float("nan")

    @property
    def gold_rows(self):
        return [r for r in self.rows if r.gold is not None and r.status == "ok"]

    @property
    def matches(self) -> int:
        return sum(1 for r in self.gold_rows if r.match)

    def text(self, top: Optional[int] = None) -> str:
        out = []
        for row in self.rows:
            out.append("[%d] %s" % (row.index, row.sentence))
            if row.status != "ok":
                out.append("  FAILED: %s" % row.message)
                continue
            out.append("  analyses: %d" % row.analyses)
            if row.gold is not None:
                out.append("  gold: %s" % row.gold)
                out.append("  top-parse match: %s" % ("yes" if row.match else "no"))
            for parse in row.ranked[:top]:
                out.extend("  " + line for line in format_ranked(parse))
        out.append("sentences: %d" % self.sentence_count)
        out.append("failed: %d" % sum(r.status != "ok" for r in self.rows))
        out.append("analysis counts: %s" % " ".join(map(str, self.counts)))
        out.append("mean analyses: %s" % fmt_prob(self.mean))
        out.append("median analyses: %s" % fmt_prob(self.median))
        out.append("top-parse matches: %d/%d" % (self.matches, len(self.gold_rows)))
        return "\n".join(out) + "\n"

    def key_values(self) -> str:
        out = ["sentences=%d" % self.sentence_count,
               "failed=%d" % sum(r.status != "ok" for r in self.rows),
               "mean_analyses=%s" % fmt_prob(self.mean),
               "median_analyses=%s" % fmt_prob(self.median),
               "gold_sentences=%d" % len(self.gold_rows),
               "top_matches=%d" % self.matches]
        for row in self.rows:
            prefix = "sentence.%d." % row.index
            out.append(prefix + "text=" + row.sentence)
            out.append(prefix + "status=" + row.status)
            if row.status != "ok":
                out.append(prefix + "error=" + row.message)
                continue
            out.append(prefix + "analyses=%d" % row.analyses)
            if row.ranked:
                best = row.ranked[0]
                out.append(prefix + "top=" + best.marker.bracketed())
                out.append(prefix + "top_global=" + fmt_prob(best.global_prob))
            if row.match is not None:
                out.append(prefix + "match=%d" % row.match)
        return "\n".join(out) + "\n"


def read_suite(text: str, source: Optional[str] = None):
    """(sentence, gold or None) pairs; gold is normalized through the corpus reader."""
    items = []
    for lineno, raw in enumerate(text.split("\n"), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        sentence, _, gold = raw.partition("\t")
        items.append((lineno, " ".join(sentence.split()), gold.strip() or None))
    return items


def evaluate(suite, lexicon, tables, case_filter=True, source=None) -> EvalReport:
    rows = []
    for index, (lineno, sentence, gold) in enumerate(suite, 1):
        row = EvalRow(index, sentence)
        try:
            if gold is not None:
                trees = read_corpus(gold, source)
                if len(trees) != 1:
                    raise GrammarError("line %d: gold must be one tree" % lineno)
                row.gold = format_tree(trees[0])
            row.ranked = rank_sentence(sentence.split(), lexicon, tables, case_filter)
        except GrammarError as exc:
            row.status, row.message = "failed", str(exc)
        rows.append(row)
    return EvalReport(rows)


# -- commands ----------------------------------------------------------------

def cmd_train(args) -> int:
    trees = read_corpus(_read(args.corpus), args.corpus)
    lexicon = read_lexicon(_read(args.lexicon), args.lexicon) if args.lexicon else None
    conditioning = FLAT if args.conditioning == "flat" else MOTHER
    try:
        schema_table, theta_table, bundle = train(trees, lexicon, conditioning,
                                                  args.default_probability)
    except UnclassifiableBranchError as exc:
        raise LoadError(str(exc), exc.line, args.corpus) from None
    _write(args.out, write_tables(schema_table, theta_table))
    print("trees: %d" % bundle.tree_count)
    print("branches: %d" % schema_table.total_count)
    for sid in sorted(bundle.schema_counts):
        print("schema %d: %d  p=%s" % (sid, bundle.schema_counts[sid],
                                       fmt_prob(schema_table.entries[sid])))
    print("theta heads: %d" % len(theta_table.heads))
    print("wrote %s" % args.out)
    return EXIT_OK


def _load_model(args):
    lexicon = read_lexicon(_read(args.lexicon), args.lexicon)
    tables = read_tables(_read(args.tables), args.tables)
    return lexicon, tables


def cmd_parse(args) -> int:
    lexicon, tables = _load_model(args)
    tokens = " ".join(args.sentence).split()
    ranked = rank_sentence(tokens, lexicon, tables, not args.no_case_filter,
                           args.max_parses)
    print("sentence: %s" % " ".join(tokens))
    print("analyses: %d" % len(ranked))
    for parse in ranked[:args.top]:
        print("\n".join(format_ranked(parse, args.trace)))
    return EXIT_OK


def cmd_eval(args) -> int:
    lexicon, tables = _load_model(args)
    suite = read_suite(_read(args.suite), args.suite)
    report = evaluate(suite, lexicon, tables, not args.no_case_filter, args.suite)
    sys.stdout.write(report.text(args.top))
    if args.report:
        _write(args.report, report.key_values())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbparse", description="Probabilistic principle-based parser.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="estimate schema and theta tables")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", help="lexicon whose grid counts are added")
    p.add_argument("--out", required=True)
    p.add_argument("--conditioning", choices=("flat", "mother"), default="flat")
    p.add_argument("--default-probability", type=float, default=1.0,
                   help="grid probability for heads absent from the table")
    p.set_defaults(func=cmd_train)

    def model_args(p):
        p.add_argument("--lexicon", required=True)
        p.add_argument("--tables", required=True)
        p.add_argument("--top", type=int, default=None, help="print only the best K parses")
        p.add_argument("--no-case-filter", action="store_true")
        p.add_argument("--max-parses", type=int, default=DEFAULT_MAX_PARSES)

    p = sub.add_parser("parse", help="rank all parses of one sentence")
    model_args(p)
    p.add_argument("--trace", action="store_true",
                   help="show schema ids and theta/case events per branch")
    p.add_argument("sentence", nargs="+")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="parse a test suite and report")
    model_args(p)
    p.add_argument("--suite", required=True)
    p.add_argument("--report", help="also write a key=value report here")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FileProblem as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except OutOfVocabularyError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DATA
    except GrammarError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
