import sys
from pathlib import Path

import pytest

from pbparse.corpus import bundled_path, read_corpus, read_lexicon, train

sys.path.insert(0, str(Path(__file__).parent))

DESK_LEXICON = """\
the	Det	-	-
dog	N	+	-
man	N	+	-
telescope	N	+	-
dogs	N	-	-
john	N	-	-
barked	I	+	agent/ext:N
bark	I	+	agent/ext:N
bark	V	+	agent/ext:N
saw	I	+	agent/ext:N;theme/int:N	6
saw	I	+	agent/ext:N;theme/int:N;instrument/int:P	4
gave	V	+	agent/ext:N;theme/int:N;goal/int:P
with	P	-	theme/int:N
big	A	-	-
picture	N	+	theme/int:N
"""


def read_text(name):
    with open(bundled_path(name), encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def desk_lexicon():
    return read_lexicon(DESK_LEXICON, "desk")


@pytest.fixture(scope="session")
def lexicon():
    return read_lexicon(read_text("lexicon.tsv"), "lexicon.tsv")


@pytest.fixture(scope="session")
def corpus_trees():
    return read_corpus(read_text("corpus.txt"), "corpus.txt")


@pytest.fixture(scope="session")
def tables(corpus_trees, lexicon):
    schema_table, theta_table, _ = train(corpus_trees, lexicon)
    return schema_table, theta_table


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion a test belongs to")


_CRITERIA = {}


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _CRITERIA.setdefault(marks, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, results in _CRITERIA.items():
        terminalreporter.write_line("%s  %s" % ("PASS" if all(results) else "FAIL", name))
