"""Generalized RDF terms, triples and an indexed, immutable triple set."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
SH = "http://www.w3.org/ns/shacl#"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_BOOLEAN = XSD + "boolean"


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("IRI must be non-empty")

    def __str__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("blank node label must be non-empty")

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING

    def __post_init__(self) -> None:
        if not self.datatype:
            raise ValueError("literal datatype must be non-empty")

    def __str__(self) -> str:
        text = (
            self.lexical.replace("\\", "\\\\")
            .replace('"', '\\"')
            .replace("\n", "\\n")
            .replace("\r", "\\r")
        )
        if self.datatype == XSD_STRING:
            return f'"{text}"'
        return f'"{text}"^^<{self.datatype}>'


Term = Union[Iri, BlankNode, Literal]


def term_key(t: Term) -> tuple:
    """Total order over terms: IRIs, then blank nodes, then literals."""
    if isinstance(t, Literal):
        return (2, t.lexical, t.datatype)
    if isinstance(t, Iri):
        return (0, t.value, "")
    return (1, t.label, "")


def sorted_terms(terms: Iterable[Term]) -> list[Term]:
    return sorted(terms, key=term_key)


def iri(value: str) -> Iri:
    return Iri(value)


def sh(local: str) -> Iri:
    return Iri(SH + local)


def rdf(local: str) -> Iri:
    return Iri(RDF + local)


RDF_TYPE = rdf("type")
RDF_FIRST = rdf("first")
RDF_REST = rdf("rest")
RDF_NIL = rdf("nil")


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __iter__(self) -> Iterator[Term]:
        yield self.subject
        yield self.predicate
        yield self.object

    def __str__(self) -> str:
        return f"{self.subject} {self.predicate} {self.object} ."


_EMPTY: frozenset = frozenset()


class Graph:
    """A finite set of triples with hash indexes for forward and backward lookup.

    Graphs are immutable after construction. ``union`` and ``add`` return
    new graphs.
    """

    __slots__ = ("_triples", "_sp", "_po", "_p", "_s", "_hash")

    def __init__(self, triples: Iterable[Triple | tuple] = ()) -> None:
        ts = frozenset(t if isinstance(t, Triple) else Triple(*t) for t in triples)
        sp: dict = defaultdict(set)
        po: dict = defaultdict(set)
        by_p: dict = defaultdict(set)
        by_s: dict = defaultdict(set)
        for t in ts:
            sp[(t.subject, t.predicate)].add(t.object)
            po[(t.predicate, t.object)].add(t.subject)
            by_p[t.predicate].add(t)
            by_s[t.subject].add(t)
        self._triples = ts
        self._sp = {k: frozenset(v) for k, v in sp.items()}
        self._po = {k: frozenset(v) for k, v in po.items()}
        self._p = {k: frozenset(v) for k, v in by_p.items()}
        self._s = {k: frozenset(v) for k, v in by_s.items()}
        self._hash: int | None = None

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: object) -> bool:
        return t in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._triples)
        return self._hash

    def __repr__(self) -> str:
        return f"Graph({len(self)} triples)"

    def objects(self, s: Term, p: Term) -> frozenset[Term]:
        return self._sp.get((s, p), _EMPTY)

    def subjects(self, p: Term, o: Term) -> frozenset[Term]:
        return self._po.get((p, o), _EMPTY)

    def with_predicate(self, p: Term) -> frozenset[Triple]:
        return self._p.get(p, _EMPTY)

    def with_subject(self, s: Term) -> frozenset[Triple]:
        return self._s.get(s, _EMPTY)

    def predicates(self) -> frozenset[Term]:
        return frozenset(self._p)

    def nodes(self) -> frozenset[Term]:
        """Terms occurring in subject or object position."""
        out = set(self._s)
        for t in self._triples:
            out.add(t.object)
        return frozenset(out)

    def add(self, t: Triple) -> Graph:
        return Graph(self._triples | {t})

    def union(self, other: Iterable[Triple]) -> Graph:
        return Graph(self._triples.union(other))

    def sorted_triples(self) -> list[Triple]:
        return sorted(
            self._triples,
            key=lambda t: (term_key(t.subject), term_key(t.predicate), term_key(t.object)),
        )


def objects(g: Graph, s: Term, p: Term) -> frozenset[Term]:
    """``{o | (s, p, o) in g}``."""
    return g.objects(s, p)


def subjects(g: Graph, p: Term, o: Term) -> frozenset[Term]:
    """``{s | (s, p, o) in g}``."""
    return g.subjects(p, o)


def read_list(g: Graph, head: Term) -> list[Term] | None:
    """Members of the RDF collection starting at ``head``.

    Returns None when ``head`` is not a well-formed collection (missing or
    repeated rdf:first/rdf:rest, or a cycle).
    """
    items: list[Term] = []
    seen: set[Term] = set()
    node = head
    while node != RDF_NIL:
        if node in seen:
            return None
        seen.add(node)
        firsts = g.objects(node, RDF_FIRST)
        rests = g.objects(node, RDF_REST)
        if len(firsts) != 1 or len(rests) != 1:
            return None
        items.append(next(iter(firsts)))
        node = next(iter(rests))
    return items
