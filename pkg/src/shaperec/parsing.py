"""N-Triples and a Turtle subset.

The Turtle subset covers ``@prefix``/``PREFIX`` declarations, IRIs,
prefixed names, the ``a`` keyword, ``;`` and ``,`` lists, single-line string
literals (optionally ``^^``-typed), integers, decimals, booleans, labelled
blank nodes, anonymous ``[ ... ]`` nodes and ``( ... )`` collections.
Language tags, long strings, exponent numerals and base IRIs are rejected
with :class:`UnsupportedFeature`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, UnsupportedFeature
from .rdf import (
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Term,
    Triple,
)

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


def _check_iri(value: str, line: int, col: int | None = None) -> Iri:
    if not value:
        raise ParseError("empty IRI", line, col)
    if any(c in value for c in ' <>"{}|^`\\') or any(ord(c) <= 0x20 for c in value):
        raise ParseError(f"malformed IRI <{value}>", line, col)
    if not _SCHEME.match(value):
        raise UnsupportedFeature(f"relative IRI <{value}> (base IRIs)", line, col)
    return Iri(value)


def _unescape(body: str, line: int, col: int) -> str:
    out: list[str] = []
    i = 0
    while i < len(body):
        c = body[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        if i + 1 >= len(body):
            raise ParseError("dangling escape in string", line, col)
        e = body[i + 1]
        if e in _ESCAPES:
            out.append(_ESCAPES[e])
            i += 2
        elif e in "uU":
            width = 4 if e == "u" else 8
            digits = body[i + 2 : i + 2 + width]
            if len(digits) != width or not all(d in "0123456789abcdefABCDEF" for d in digits):
                raise ParseError("bad unicode escape in string", line, col)
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise ParseError(f"unknown escape \\{e}", line, col)
    return "".join(out)


def _scan_string(text: str, start: int, quote: str, line: int, col: int) -> tuple[str, int]:
    """Scan a quoted string beginning at ``start`` (the opening quote).

    Returns the unescaped body and the index just past the closing quote.
    """
    i = start + 1
    while i < len(text):
        c = text[i]
        if c == "\\":
            i += 2
            continue
        if c == quote:
            return _unescape(text[start + 1 : i], line, col), i + 1
        if c in "\r\n":
            break
        i += 1
    raise ParseError("unterminated string literal", line, col)


# ---------------------------------------------------------------------------
# N-Triples


def parse_ntriples(text: str) -> Graph:
    """Parse line-oriented N-Triples. Duplicate triples collapse."""
    triples: list[Triple] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        terms: list[Term] = []
        i = 0
        n = len(raw)
        done = False
        while i < n:
            c = raw[i]
            col = i + 1
            if c in " \t":
                i += 1
            elif c == "#":
                break
            elif done:
                raise ParseError(f"unexpected {c!r} after '.'", lineno, col)
            elif c == ".":
                done = True
                i += 1
            elif c == "<":
                end = raw.find(">", i + 1)
                if end < 0:
                    raise ParseError("unterminated IRI (missing '>')", lineno, col)
                terms.append(_check_iri(raw[i + 1 : end], lineno, col))
                i = end + 1
            elif raw.startswith("_:", i):
                m = re.compile(r"_:([A-Za-z0-9_][A-Za-z0-9_.\-]*)").match(raw, i)
                if not m or m.group(1).endswith("."):
                    raise ParseError("malformed blank node label", lineno, col)
                terms.append(BlankNode(m.group(1)))
                i = m.end()
            elif c == '"':
                body, i = _scan_string(raw, i, '"', lineno, col)
                datatype = XSD_STRING
                if raw.startswith("^^", i):
                    if not raw.startswith("^^<", i):
                        raise ParseError("datatype must be an IRI in angle brackets", lineno, i + 1)
                    end = raw.find(">", i + 3)
                    if end < 0:
                        raise ParseError("unterminated datatype IRI", lineno, i + 1)
                    datatype = _check_iri(raw[i + 3 : end], lineno, i + 1).value
                    i = end + 1
                elif raw.startswith("@", i):
                    raise UnsupportedFeature("language-tagged literal", lineno, i + 1)
                terms.append(Literal(body, datatype))
            else:
                raise ParseError(f"unexpected character {c!r}", lineno, col)
        if not terms and not done:
            continue
        if not done:
            raise ParseError("statement not terminated by '.'", lineno)
        if len(terms) != 3:
            raise ParseError(f"expected 3 terms, found {len(terms)}", lineno)
        triples.append(Triple(*terms))
    return Graph(triples)


# ---------------------------------------------------------------------------
# Turtle subset


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str
    value: object
    line: int
    col: int


_PNAME = re.compile(
    r"([A-Za-z][A-Za-z0-9_\-]*(?:\.[A-Za-z0-9_\-]+)*)?:"
    r"([A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?)?"
)
_BNODE = re.compile(r"_:([A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?)")
_NUMBER = re.compile(r"[+-]?(?:\d+\.\d+|\.\d+|\d+)([eE][+-]?\d+)?")
_WORD = re.compile(r"[A-Za-z][A-Za-z0-9_\-]*")
_PUNCT = set(".;,[]()")


def _describe(tok: _Tok) -> str:
    if tok.kind == "PNAME":
        prefix, local = tok.value
        return f"{prefix or ''}:{local or ''}"
    if tok.value is None or tok.kind == tok.value:
        return repr(tok.kind)
    return f"{tok.kind.lower()} {tok.value}"


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    line = 1
    line_start = 0
    n = len(text)
    while i < n:
        c = text[i]
        col = i - line_start + 1
        if c == "\n":
            line += 1
            line_start = i + 1
            i += 1
        elif c in " \t\r":
            i += 1
        elif c == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif c == "<":
            end = i + 1
            while end < n and text[end] not in ">\n":
                end += 1
            if end >= n or text[end] != ">":
                raise ParseError("unterminated IRI (missing '>')", line, col)
            toks.append(_Tok("IRI", _check_iri(text[i + 1 : end], line, col), line, col))
            i = end + 1
        elif c in "\"'":
            if text.startswith(c * 3, i):
                raise UnsupportedFeature("multiline string literal", line, col)
            body, i = _scan_string(text, i, c, line, col)
            toks.append(_Tok("STRING", body, line, col))
            if text.startswith("@", i):
                raise UnsupportedFeature("language-tagged literal", line, i - line_start + 1)
        elif text.startswith("^^", i):
            toks.append(_Tok("DTYPE", None, line, col))
            i += 2
        elif c == "@":
            m = _WORD.match(text, i + 1)
            word = m.group(0) if m else ""
            if word == "prefix":
                toks.append(_Tok("PREFIX", "@", line, col))
                i = m.end()
            elif word == "base":
                raise UnsupportedFeature("@base", line, col)
            else:
                raise ParseError(f"unknown directive @{word}", line, col)
        elif text.startswith("_:", i):
            m = _BNODE.match(text, i)
            if not m:
                raise ParseError("malformed blank node label", line, col)
            toks.append(_Tok("BNODE", m.group(1), line, col))
            i = m.end()
        elif c in _PUNCT and not (c == "." and _NUMBER.match(text, i) and text[i + 1 : i + 2].isdigit()):
            toks.append(_Tok(c, c, line, col))
            i += 1
        elif c.isdigit() or (c in "+-." and _NUMBER.match(text, i)):
            m = _NUMBER.match(text, i)
            if m is None:
                raise ParseError(f"unexpected character {c!r}", line, col)
            if m.group(1):
                raise UnsupportedFeature("exponent (double) numeral", line, col)
            lex = m.group(0)
            dt = XSD_DECIMAL if "." in lex else XSD_INTEGER
            toks.append(_Tok("NUMBER", Literal(lex, dt), line, col))
            i = m.end()
        else:
            m = _PNAME.match(text, i)
            if m:
                toks.append(_Tok("PNAME", (m.group(1) or "", m.group(2) or ""), line, col))
                i = m.end()
                continue
            m = _WORD.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {c!r}", line, col)
            word = m.group(0)
            if word == "a":
                toks.append(_Tok("A", None, line, col))
            elif word in ("true", "false"):
                toks.append(_Tok("BOOL", Literal(word, XSD_BOOLEAN), line, col))
            elif word.upper() == "PREFIX":
                toks.append(_Tok("PREFIX", "sparql", line, col))
            elif word.upper() == "BASE":
                raise UnsupportedFeature("BASE", line, col)
            else:
                raise ParseError(f"unexpected bare word {word!r}", line, col)
            i = m.end()
    return toks


class _TurtleParser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self._explicit = {t.value for t in self.toks if t.kind == "BNODE"}
        self._fresh = 0

    def fresh(self) -> BlankNode:
        while True:
            label = f"b{self._fresh}"
            self._fresh += 1
            if label not in self._explicit:
                return BlankNode(label)

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, what: str) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else None
            raise ParseError(
                f"unexpected end of input, expected {what}",
                last.line if last else 1,
                last.col if last else 1,
            )
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Tok:
        tok = self.next(repr(kind))
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {_describe(tok)}", tok.line, tok.col)
        return tok

    def emit(self, s: Term, p: Term, o: Term) -> None:
        self.triples.append(Triple(s, p, o))

    def parse(self) -> Graph:
        while self.peek() is not None:
            tok = self.peek()
            if tok.kind == "PREFIX":
                self.directive()
            else:
                self.statement()
        return Graph(self.triples)

    def directive(self) -> None:
        tok = self.next("directive")
        name = self.next("prefix name")
        if name.kind != "PNAME" or name.value[1]:
            raise ParseError("expected a prefix declaration like 'ex:'", name.line, name.col)
        target = self.expect("IRI")
        self.prefixes[name.value[0]] = target.value.value
        if tok.value == "@":
            self.expect(".")

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind == "[":
            subject = self.blank_property_list()
            if self.peek() is not None and self.peek().kind != ".":
                self.predicate_object_list(subject)
        else:
            subject = self.subject()
            self.predicate_object_list(subject)
        self.expect(".")

    def resolve(self, tok: _Tok) -> Iri:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise ParseError(f"undeclared prefix '{prefix}:'", tok.line, tok.col)
        return _check_iri(self.prefixes[prefix] + local, tok.line, tok.col)

    def subject(self) -> Term:
        tok = self.next("subject")
        if tok.kind == "IRI":
            return tok.value
        if tok.kind == "PNAME":
            return self.resolve(tok)
        if tok.kind == "BNODE":
            return BlankNode(tok.value)
        if tok.kind == "(":
            return self.collection()
        raise ParseError(f"invalid subject {tok.kind}", tok.line, tok.col)

    def verb(self) -> Term:
        tok = self.next("predicate")
        if tok.kind == "A":
            return RDF_TYPE
        if tok.kind == "IRI":
            return tok.value
        if tok.kind == "PNAME":
            return self.resolve(tok)
        raise ParseError(f"invalid predicate {tok.kind}", tok.line, tok.col)

    def predicate_object_list(self, subject: Term) -> None:
        while True:
            p = self.verb()
            self.emit(subject, p, self.object())
            while self.peek() is not None and self.peek().kind == ",":
                self.pos += 1
                self.emit(subject, p, self.object())
            if self.peek() is None or self.peek().kind != ";":
                return
            while self.peek() is not None and self.peek().kind == ";":
                self.pos += 1
            if self.peek() is None or self.peek().kind in (".", "]"):
                return

    def object(self) -> Term:
        tok = self.next("object")
        kind = tok.kind
        if kind == "IRI":
            return tok.value
        if kind == "PNAME":
            return self.resolve(tok)
        if kind == "BNODE":
            return BlankNode(tok.value)
        if kind in ("NUMBER", "BOOL"):
            return tok.value
        if kind == "STRING":
            if self.peek() is not None and self.peek().kind == "DTYPE":
                self.pos += 1
                dt = self.next("datatype IRI")
                if dt.kind == "IRI":
                    return Literal(tok.value, dt.value.value)
                if dt.kind == "PNAME":
                    return Literal(tok.value, self.resolve(dt).value)
                raise ParseError("datatype must be an IRI", dt.line, dt.col)
            return Literal(tok.value, XSD_STRING)
        if kind == "[":
            self.pos -= 1
            return self.blank_property_list()
        if kind == "(":
            return self.collection()
        raise ParseError(f"invalid object {kind} {tok.value!r}", tok.line, tok.col)

    def blank_property_list(self) -> BlankNode:
        self.expect("[")
        node = self.fresh()
        if self.peek() is not None and self.peek().kind == "]":
            self.pos += 1
            return node
        self.predicate_object_list(node)
        self.expect("]")
        return node

    def collection(self) -> Term:
        # opening '(' already consumed
        cells: list[BlankNode] = []
        items: list[Term] = []
        while True:
            tok = self.peek()
            if tok is None:
                raise ParseError("unterminated collection", self.toks[-1].line, self.toks[-1].col)
            if tok.kind == ")":
                self.pos += 1
                break
            cells.append(self.fresh())
            items.append(self.object())
        if not cells:
            return RDF_NIL
        for idx, (cell, item) in enumerate(zip(cells, items)):
            self.emit(cell, RDF_FIRST, item)
            self.emit(cell, RDF_REST, cells[idx + 1] if idx + 1 < len(cells) else RDF_NIL)
        return cells[0]


def parse_turtle_document(text: str) -> tuple[Graph, dict[str, str]]:
    """Parse Turtle-subset text, returning the graph and the declared prefixes."""
    parser = _TurtleParser(text)
    graph = parser.parse()
    return graph, dict(parser.prefixes)


def parse_turtle_subset(text: str) -> Graph:
    return parse_turtle_document(text)[0]


def load_graph(path: str | Path) -> tuple[Graph, dict[str, str]]:
    """Load a ``.nt`` or Turtle file (anything else is read as Turtle)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".nt":
        return parse_ntriples(text), {}
    return parse_turtle_document(text)


def serialize_ntriples(g: Graph) -> str:
    return "".join(f"{t}\n" for t in g.sorted_triples())
