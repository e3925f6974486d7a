"""Exception hierarchy. Every error carries a short machine-readable ``code``."""

from __future__ import annotations


class ShapeRecError(Exception):
    code = "error"


class ParseError(ShapeRecError):
    code = "parse"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class UnsupportedFeature(ParseError):
    code = "unsupported"

    def __init__(self, feature: str, line: int | None = None, column: int | None = None):
        self.feature = feature
        super().__init__(f"unsupported Turtle feature: {feature}", line, column)


class ShapesError(ShapeRecError):
    """The shapes graph cannot be read into a document."""

    code = "shapes"


class UnsupportedVocabulary(ShapesError):
    code = "vocabulary"


class DocumentError(ShapeRecError):
    code = "document"


class RecursionNotAllowed(ShapeRecError):
    """Standard validation was requested for a recursive document."""

    code = "recursion"


class SearchBudgetExceeded(ShapeRecError):
    code = "budget"

    def __init__(self, pairs: int, limit: int):
        self.pairs = pairs
        self.limit = limit
        super().__init__(f"{pairs} guessable pairs exceed the search limit of {limit}")


class OracleBudgetExceeded(SearchBudgetExceeded):
    def __init__(self, pairs: int, limit: int):
        super().__init__(pairs, limit)
        self.args = (f"{pairs} (node, shape) pairs exceed the oracle limit of {limit}",)
