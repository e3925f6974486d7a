"""Three-valued constraint evaluation under shape assignments."""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .rdf import RDF_TYPE, XSD, XSD_STRING, BlankNode, Graph, Iri, Literal, Term
from .shapes import (
    Alt,
    And,
    ClassTarget,
    Closed,
    Constraint,
    Datatype,
    Disjoint,
    Document,
    Equals,
    Filter,
    FilterKind,
    GEq,
    HasValue,
    InSet,
    Inverse,
    LessThan,
    MaxLength,
    MinLength,
    NodeKindBlank,
    NodeKindIri,
    NodeKindLiteral,
    NodeTarget,
    Not,
    ObjectsOfTarget,
    OneOrMore,
    Path,
    Pattern,
    Pred,
    Ref,
    Seq,
    ShapeName,
    SubjectsOfTarget,
    TargetDecl,
    TrueC,
    ZeroOrMore,
    ZeroOrOne,
)


class TruthValue(IntEnum):
    """Kleene truth values ordered ``FALSE < UNDEFINED < TRUE``."""

    FALSE = 0
    UNDEFINED = 1
    TRUE = 2

    def __invert__(self) -> TruthValue:
        return _NEG[self]

    def __and__(self, other: TruthValue) -> TruthValue:
        return TruthValue(min(self, other))

    def __or__(self, other: TruthValue) -> TruthValue:
        return TruthValue(max(self, other))

    @classmethod
    def of(cls, flag: bool) -> TruthValue:
        return cls.TRUE if flag else cls.FALSE


T, F, U = TruthValue.TRUE, TruthValue.FALSE, TruthValue.UNDEFINED
_NEG = {T: F, F: T, U: U}


class Assignment:
    """Per-(node, shape) conformance. Absent pairs are Undefined.

    Only ``TRUE`` (s in sigma(n)) and ``FALSE`` (not-s in sigma(n)) are stored,
    so a pair can never carry both signs.
    """

    __slots__ = ("_signs",)

    def __init__(self, signs: Mapping[tuple[Term, ShapeName], TruthValue | bool] | None = None):
        out: dict[tuple[Term, ShapeName], TruthValue] = {}
        for pair, v in (signs or {}).items():
            if isinstance(v, bool):
                v = TruthValue.of(v)
            v = TruthValue(v)
            if v is not U:
                out[pair] = v
        self._signs = out

    @classmethod
    def _trusted(cls, signs: dict[tuple[Term, ShapeName], TruthValue]) -> Assignment:
        a = cls.__new__(cls)
        a._signs = signs
        return a

    @classmethod
    def nested(cls, mapping: Mapping[Term, Mapping[ShapeName, TruthValue | bool]]) -> Assignment:
        return cls({(n, s): v for n, row in mapping.items() for s, v in row.items()})

    def value(self, node: Term, shape: ShapeName) -> TruthValue:
        return self._signs.get((node, shape), U)

    def items(self) -> Iterator[tuple[tuple[Term, ShapeName], TruthValue]]:
        return iter(self._signs.items())

    def positive(self, node: Term, shape: ShapeName) -> bool:
        return self._signs.get((node, shape)) is T

    def as_nested(self) -> dict[Term, dict[ShapeName, TruthValue]]:
        out: dict[Term, dict[ShapeName, TruthValue]] = {}
        for (n, s), v in self._signs.items():
            out.setdefault(n, {})[s] = v
        return out

    def __len__(self) -> int:
        return len(self._signs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        return self._signs == other._signs

    def __hash__(self) -> int:
        return hash(frozenset(self._signs.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{n} {s}: {v.name}" for (n, s), v in self._signs.items())
        return f"Assignment({{{body}}})"


EMPTY_ASSIGNMENT = Assignment()

# ---------------------------------------------------------------------------
# Paths


def _step(g: Graph, q: Path, frontier: Iterable[Term], inverse: bool) -> set[Term]:
    out: set[Term] = set()
    if isinstance(q, Pred):
        for n in frontier:
            out |= g.subjects(q.predicate, n) if inverse else g.objects(n, q.predicate)
    elif isinstance(q, Inverse):
        out = _step(g, q.path, frontier, not inverse)
    elif isinstance(q, Seq):
        first, second = (q.second, q.first) if inverse else (q.first, q.second)
        out = _step(g, second, _step(g, first, frontier, inverse), inverse)
    elif isinstance(q, Alt):
        frontier = list(frontier)
        out = _step(g, q.left, frontier, inverse) | _step(g, q.right, frontier, inverse)
    elif isinstance(q, ZeroOrOne):
        frontier = set(frontier)
        out = frontier | _step(g, q.path, frontier, inverse)
    elif isinstance(q, (ZeroOrMore, OneOrMore)):
        frontier = set(frontier)
        reached: set[Term] = set()
        todo = _step(g, q.path, frontier, inverse)
        while todo:
            reached |= todo
            todo = _step(g, q.path, todo, inverse) - reached
        out = reached | frontier if isinstance(q, ZeroOrMore) else reached
    else:
        raise TypeError(f"not a path: {q!r}")
    return out


@lru_cache(maxsize=1 << 16)
def path_eval(g: Graph, q: Path, start: Term) -> frozenset[Term]:
    """Nodes reachable from ``start`` along ``q``."""
    return frozenset(_step(g, q, (start,), False))


# ---------------------------------------------------------------------------
# Targets and node universe


def target_nodes(g: Graph, t: TargetDecl) -> frozenset[Term]:
    if isinstance(t, NodeTarget):
        return frozenset((t.node,))
    if isinstance(t, ClassTarget):
        return g.subjects(RDF_TYPE, t.cls)
    if isinstance(t, SubjectsOfTarget):
        return frozenset(tr.subject for tr in g.with_predicate(t.predicate))
    if isinstance(t, ObjectsOfTarget):
        return frozenset(tr.object for tr in g.with_predicate(t.predicate))
    raise TypeError(f"not a target declaration: {t!r}")


def shape_targets(g: Graph, targets: Iterable[TargetDecl]) -> frozenset[Term]:
    out: set[Term] = set()
    for t in targets:
        out |= target_nodes(g, t)
    return frozenset(out)


def node_universe(g: Graph, d: Document) -> frozenset[Term]:
    """Graph nodes plus every node-target constant of the document."""
    extra = {t.node for s in d for t in s.targets if isinstance(t, NodeTarget)}
    return g.nodes() | extra


# ---------------------------------------------------------------------------
# Filters and literal order

NUMERIC_DATATYPES = frozenset(
    XSD + name
    for name in (
        "integer", "decimal", "int", "long", "short", "byte",
        "nonNegativeInteger", "positiveInteger", "nonPositiveInteger", "negativeInteger",
        "unsignedLong", "unsignedInt", "unsignedShort", "unsignedByte",
    )
)


def _string_form(t: Term) -> str | None:
    if isinstance(t, Literal):
        return t.lexical
    if isinstance(t, Iri):
        return t.value
    return None


def filter_holds(kind: FilterKind, n: Term) -> bool:
    if isinstance(kind, NodeKindIri):
        return isinstance(n, Iri)
    if isinstance(kind, NodeKindBlank):
        return isinstance(n, BlankNode)
    if isinstance(kind, NodeKindLiteral):
        return isinstance(n, Literal)
    if isinstance(kind, Datatype):
        return isinstance(n, Literal) and isinstance(kind.datatype, Iri) and n.datatype == kind.datatype.value
    if isinstance(kind, InSet):
        return n in kind.terms
    text = _string_form(n)
    if text is None:
        return False
    if isinstance(kind, MinLength):
        return len(text) >= kind.length
    if isinstance(kind, MaxLength):
        return len(text) <= kind.length
    if isinstance(kind, Pattern):
        return kind.compiled.search(text) is not None
    raise TypeError(f"not a filter: {kind!r}")


def _numeric(t: Literal) -> Decimal | None:
    try:
        return Decimal(t.lexical.strip())
    except InvalidOperation:
        return None


def compare_literals(a: Term, b: Term) -> int | None:
    """-1/0/1, or None when the pair has no defined order."""
    if not (isinstance(a, Literal) and isinstance(b, Literal)):
        return None
    if a.datatype in NUMERIC_DATATYPES and b.datatype in NUMERIC_DATATYPES:
        x, y = _numeric(a), _numeric(b)
        if x is None or y is None or not (x.is_finite() and y.is_finite()):
            return None
    elif a.datatype == XSD_STRING and b.datatype == XSD_STRING:
        x, y = a.lexical, b.lexical
    else:
        return None
    return (x > y) - (x < y)


def _ordered(a: Term, b: Term, or_equals: bool, inverted: bool) -> bool:
    cmp = compare_literals(a, b)
    if cmp is None:
        return False
    if inverted:
        cmp = -cmp
    return cmp < 0 or (or_equals and cmp == 0)


# ---------------------------------------------------------------------------
# Constraint evaluation


def eval_constraint(g: Graph, sigma: Assignment, c: Constraint, n: Term) -> TruthValue:
    """Evaluate ``c`` on node ``n``; shape references are read from ``sigma``."""
    if isinstance(c, TrueC):
        return T
    if isinstance(c, Ref):
        return sigma._signs.get((n, c.shape), U)
    if isinstance(c, Not):
        return _NEG[eval_constraint(g, sigma, c.inner, n)]
    if isinstance(c, And):
        left = eval_constraint(g, sigma, c.left, n)
        if left is F:
            return F
        right = eval_constraint(g, sigma, c.right, n)
        return left if left < right else right
    if isinstance(c, GEq):
        sure = possible = 0
        for v in path_eval(g, c.path, n):
            r = eval_constraint(g, sigma, c.inner, v)
            if r is T:
                sure += 1
                if sure >= c.count:
                    return T
            if r is not F:
                possible += 1
        return F if possible < c.count else U
    if isinstance(c, HasValue):
        return T if n == c.value else F
    if isinstance(c, Filter):
        return T if filter_holds(c.kind, n) else F
    if isinstance(c, Equals):
        return T if path_eval(g, c.path, n) == g.objects(n, c.predicate) else F
    if isinstance(c, Disjoint):
        return F if path_eval(g, c.path, n) & g.objects(n, c.predicate) else T
    if isinstance(c, LessThan):
        others = g.objects(n, c.predicate)
        for a in path_eval(g, c.path, n):
            for b in others:
                if not _ordered(a, b, c.or_equals, c.inverted):
                    return F
        return T
    if isinstance(c, Closed):
        for t in g.with_subject(n):
            if t.predicate not in c.allowed:
                return F
        return T
    raise TypeError(f"not a constraint: {c!r}")


# ---------------------------------------------------------------------------
# Faithfulness


def condition1_failures(g: Graph, sigma: Assignment, d: Document) -> Iterator[tuple[Term, ShapeName]]:
    for n in node_universe(g, d):
        for s in d:
            if eval_constraint(g, sigma, s.constraint, n) is not sigma.value(n, s.name):
                yield n, s.name


def check_condition1(g: Graph, sigma: Assignment, d: Document) -> bool:
    """Every pair is signed exactly as its constraint evaluates."""
    return next(condition1_failures(g, sigma, d), None) is None


def target_failures(g: Graph, sigma: Assignment, d: Document) -> Iterator[tuple[Term, ShapeName]]:
    for s in d:
        for n in shape_targets(g, s.targets):
            if not sigma.positive(n, s.name):
                yield n, s.name


def check_targets(g: Graph, sigma: Assignment, d: Document) -> bool:
    """Every target node of every shape conforms to it in ``sigma``."""
    return next(target_failures(g, sigma, d), None) is None


def is_faithful(g: Graph, sigma: Assignment, d: Document) -> bool:
    return check_condition1(g, sigma, d) and check_targets(g, sigma, d)


def is_total(sigma: Assignment, g: Graph, d: Document) -> bool:
    return all(sigma.value(n, s.name) is not U for n in node_universe(g, d) for s in d)
