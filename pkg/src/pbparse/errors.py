"""Exception hierarchy shared by every module."""


class GrammarError(Exception):
    """Base class for all errors raised by pbparse."""


class InvalidGridError(GrammarError):
    pass


class SpanError(GrammarError):
    pass


class ThetaError(GrammarError):
    """A theta-criterion failure of some kind."""


class CriterionViolation(ThetaError):
    pass


class SelectionError(ThetaError):
    pass


class DoubleRoleError(ThetaError):
    pass


class UnseenSchemaError(GrammarError):
    pass


class UnseenGridError(GrammarError):
    pass


class EmptyCorpusError(GrammarError):
    pass


class UnclassifiableBranchError(GrammarError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message)


class LoadError(GrammarError):
    """Malformed input file.  ``line`` is 1-based, or None for whole-file errors."""

    def __init__(self, message, line=None, source=None):
        self.message = message
        self.line = line
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = self.source or "<input>"
        if self.line is not None:
            where = "%s:%d" % (where, self.line)
        return "%s: %s" % (where, self.message)


class OutOfVocabularyError(GrammarError):
    def __init__(self, token):
        self.token = token
        super().__init__("out of vocabulary: %s" % token)


class EmptyInputError(GrammarError):
    pass


class ParseLimitError(GrammarError):
    pass
