"""Core abstract syntax for shapes documents.

Surface SHACL is desugared by :mod:`shaperec.reader` into this minimal core:
``Or``, ``maxCount``, universal quantification over a path and the like are
all encoded with ``Not``, ``And`` and ``GEq``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import DocumentError
from .rdf import Term, sorted_terms, term_key

ShapeName = Term

# ---------------------------------------------------------------------------
# Targets


@dataclass(frozen=True, slots=True)
class NodeTarget:
    node: Term


@dataclass(frozen=True, slots=True)
class ClassTarget:
    cls: Term


@dataclass(frozen=True, slots=True)
class SubjectsOfTarget:
    predicate: Term


@dataclass(frozen=True, slots=True)
class ObjectsOfTarget:
    predicate: Term


TargetDecl = Union[NodeTarget, ClassTarget, SubjectsOfTarget, ObjectsOfTarget]


def target_key(t: TargetDecl) -> tuple:
    order = (NodeTarget, ClassTarget, SubjectsOfTarget, ObjectsOfTarget).index(type(t))
    return (order, term_key(target_param(t)))


def target_param(t: TargetDecl) -> Term:
    return getattr(t, t.__slots__[0])


# ---------------------------------------------------------------------------
# Paths


@dataclass(frozen=True, slots=True)
class Pred:
    predicate: Term


@dataclass(frozen=True, slots=True)
class Inverse:
    path: Path


@dataclass(frozen=True, slots=True)
class Seq:
    first: Path
    second: Path


@dataclass(frozen=True, slots=True)
class Alt:
    left: Path
    right: Path


@dataclass(frozen=True, slots=True)
class ZeroOrOne:
    path: Path


@dataclass(frozen=True, slots=True)
class ZeroOrMore:
    path: Path


@dataclass(frozen=True, slots=True)
class OneOrMore:
    path: Path


Path = Union[Pred, Inverse, Seq, Alt, ZeroOrOne, ZeroOrMore, OneOrMore]


def iter_path(p: Path) -> Iterator[Path]:
    yield p
    if isinstance(p, Seq):
        yield from iter_path(p.first)
        yield from iter_path(p.second)
    elif isinstance(p, Alt):
        yield from iter_path(p.left)
        yield from iter_path(p.right)
    elif not isinstance(p, Pred):
        yield from iter_path(p.path)


# ---------------------------------------------------------------------------
# Filters


@dataclass(frozen=True, slots=True)
class NodeKindIri:
    pass


@dataclass(frozen=True, slots=True)
class NodeKindBlank:
    pass


@dataclass(frozen=True, slots=True)
class NodeKindLiteral:
    pass


@dataclass(frozen=True, slots=True)
class Datatype:
    datatype: Term


@dataclass(frozen=True, slots=True)
class MinLength:
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("minLength must be non-negative")


@dataclass(frozen=True, slots=True)
class MaxLength:
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("maxLength must be non-negative")


@dataclass(frozen=True, slots=True)
class Pattern:
    regex: str
    flags: str = ""
    compiled: re.Pattern = field(init=False, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        bad = set(self.flags) - set("imsx")
        if bad:
            raise ValueError(f"unsupported regex flags {''.join(sorted(bad))!r}")
        try:
            compiled = re.compile(self.regex, _re_flags(self.flags))
        except re.error as exc:
            raise ValueError(f"invalid pattern {self.regex!r}: {exc}") from None
        object.__setattr__(self, "compiled", compiled)


def _re_flags(flags: str) -> int:
    out = 0
    for f in flags:
        out |= {"i": re.I, "m": re.M, "s": re.S, "x": re.X}[f]
    return out


@dataclass(frozen=True, slots=True)
class InSet:
    terms: frozenset


FilterKind = Union[
    NodeKindIri, NodeKindBlank, NodeKindLiteral, Datatype, MinLength, MaxLength, Pattern, InSet
]

# ---------------------------------------------------------------------------
# Constraints


@dataclass(frozen=True, slots=True)
class TrueC:
    pass


@dataclass(frozen=True, slots=True)
class Not:
    inner: Constraint


@dataclass(frozen=True, slots=True)
class And:
    left: Constraint
    right: Constraint


@dataclass(frozen=True, slots=True)
class HasValue:
    value: Term


@dataclass(frozen=True, slots=True)
class Filter:
    kind: FilterKind


@dataclass(frozen=True, slots=True)
class Ref:
    shape: ShapeName


@dataclass(frozen=True, slots=True)
class GEq:
    """At least ``count`` values reachable by ``path`` satisfy ``inner``."""

    count: int
    path: Path
    inner: Constraint

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("GEq requires a count of at least 1")


@dataclass(frozen=True, slots=True)
class Equals:
    path: Path
    predicate: Term


@dataclass(frozen=True, slots=True)
class Disjoint:
    path: Path
    predicate: Term


@dataclass(frozen=True, slots=True)
class LessThan:
    """Every path value is below every ``predicate`` value.

    ``inverted`` flips the comparison (greater-than); SHACL itself never
    produces it.
    """

    path: Path
    predicate: Term
    or_equals: bool = False
    inverted: bool = False


@dataclass(frozen=True, slots=True)
class Closed:
    allowed: frozenset


Constraint = Union[TrueC, Not, And, HasValue, Filter, Ref, GEq, Equals, Disjoint, LessThan, Closed]

TRUE = TrueC()
FALSE = Not(TRUE)


def conj(parts: Iterable[Constraint]) -> Constraint:
    """Right fold into binary ``And``; the empty conjunction is ``TrueC``."""
    items = list(parts)
    if not items:
        return TRUE
    out = items[-1]
    for c in reversed(items[:-1]):
        out = And(c, out)
    return out


def disj(parts: Iterable[Constraint]) -> Constraint:
    """``c1 or c2`` as ``Not(And(Not c1, Not c2))``; empty disjunction is false."""
    items = list(parts)
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Not(conj(Not(c) for c in items))


def for_all(path: Path, c: Constraint) -> Constraint:
    """Every value reachable by ``path`` satisfies ``c``."""
    return Not(GEq(1, path, Not(c)))


def iter_constraint(c: Constraint) -> Iterator[Constraint]:
    yield c
    if isinstance(c, Not):
        yield from iter_constraint(c.inner)
    elif isinstance(c, And):
        yield from iter_constraint(c.left)
        yield from iter_constraint(c.right)
    elif isinstance(c, GEq):
        yield from iter_constraint(c.inner)


def constraint_paths(c: Constraint) -> Iterator[Path]:
    for node in iter_constraint(c):
        if isinstance(node, (GEq, Equals, Disjoint, LessThan)):
            yield node.path


# ---------------------------------------------------------------------------
# Shapes and documents


@dataclass(frozen=True, slots=True)
class Shape:
    name: ShapeName
    targets: frozenset = frozenset()
    constraint: Constraint = TRUE

    def sorted_targets(self) -> list[TargetDecl]:
        return sorted(self.targets, key=target_key)


class Document:
    """A set of shapes with pairwise distinct names and a closed reference space."""

    __slots__ = ("_shapes",)

    def __init__(self, shapes: Iterable[Shape] = ()) -> None:
        by_name: dict[ShapeName, Shape] = {}
        for s in shapes:
            if s.name in by_name:
                raise DocumentError(f"duplicate shape name {s.name}")
            by_name[s.name] = s
        for s in by_name.values():
            for ref in direct_refs(s.constraint):
                if ref not in by_name:
                    raise DocumentError(f"shape {s.name} references undefined shape {ref}")
        self._shapes = {k: by_name[k] for k in sorted_terms(by_name)}

    @property
    def shapes(self) -> list[Shape]:
        return list(self._shapes.values())

    @property
    def names(self) -> list[ShapeName]:
        return list(self._shapes)

    def __getitem__(self, name: ShapeName) -> Shape:
        try:
            return self._shapes[name]
        except KeyError:
            raise DocumentError(f"unknown shape {name}") from None

    def __contains__(self, name: object) -> bool:
        return name in self._shapes

    def __len__(self) -> int:
        return len(self._shapes)

    def __iter__(self) -> Iterator[Shape]:
        return iter(self._shapes.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Document):
            return NotImplemented
        return self._shapes == other._shapes

    def __hash__(self) -> int:
        return hash(tuple(self._shapes.values()))

    def __repr__(self) -> str:
        return f"Document({self.shapes!r})"

    def without_targets(self) -> Document:
        return Document(Shape(s.name, frozenset(), s.constraint) for s in self)

    def terms(self) -> set[Term]:
        """Every term mentioned anywhere in the document."""
        out: set[Term] = set()
        for s in self:
            out.add(s.name)
            out.update(target_param(t) for t in s.targets)
            for node in iter_constraint(s.constraint):
                if isinstance(node, HasValue):
                    out.add(node.value)
                elif isinstance(node, Ref):
                    out.add(node.shape)
                elif isinstance(node, (Equals, Disjoint, LessThan)):
                    out.add(node.predicate)
                elif isinstance(node, Closed):
                    out.update(node.allowed)
                elif isinstance(node, Filter):
                    if isinstance(node.kind, Datatype):
                        out.add(node.kind.datatype)
                    elif isinstance(node.kind, InSet):
                        out.update(node.kind.terms)
            for path in constraint_paths(s.constraint):
                out.update(p.predicate for p in iter_path(path) if isinstance(p, Pred))
        return out


# ---------------------------------------------------------------------------
# Recursion analysis


def direct_refs(c: Constraint) -> set[ShapeName]:
    return {node.shape for node in iter_constraint(c) if isinstance(node, Ref)}


def dependency_graph(d: Document) -> dict[ShapeName, list[ShapeName]]:
    """Edge ``s -> s'`` iff ``s'`` is directly referenced by the constraint of ``s``."""
    return {s.name: sorted_terms(direct_refs(s.constraint)) for s in d}


def referenced_closure(d: Document, name: ShapeName) -> set[ShapeName]:
    """Least fixpoint of direct-reference expansion from ``name``'s constraint."""
    current = direct_refs(d[name].constraint)
    while True:
        nxt = set(current)
        for s in current:
            nxt |= direct_refs(d[s].constraint)
        if nxt == current:
            return current
        current = nxt


def recursive_shapes(d: Document) -> dict[ShapeName, bool]:
    return {s.name: s.name in referenced_closure(d, s.name) for s in d}


def is_recursive(d: Document) -> bool:
    return any(recursive_shapes(d).values())


def strongly_connected_components(
    vertices: Iterable[ShapeName], edges: dict[ShapeName, list[ShapeName]]
) -> list[list[ShapeName]]:
    """Tarjan's algorithm. Components come out dependencies-first."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list[ShapeName]] = []
    counter = 0

    def visit(v):
        nonlocal counter
        work = [(v, iter(edges.get(v, ())))]
        index[v] = low[v] = counter
        counter += 1
        stack.append(v)
        on_stack.add(v)
        while work:
            node, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(edges.get(w, ()))))
                    break
                if w in on_stack:
                    low[node] = min(low[node], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
                if low[node] == index[node]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == node:
                            break
                    out.append(sorted_terms(comp))

    for v in vertices:
        if v not in index:
            visit(v)
    return out


def cyclic_shapes(d: Document) -> set[ShapeName]:
    """Shapes lying on a cycle of the dependency graph (self-loops included)."""
    edges = dependency_graph(d)
    out: set[ShapeName] = set()
    for comp in strongly_connected_components(d.names, edges):
        if len(comp) > 1 or comp[0] in edges[comp[0]]:
            out.update(comp)
    return out


# ---------------------------------------------------------------------------
# Fragment classification

FRAGMENT_ORDER = "SZATDEOC"


def fragment_letters(d: Document) -> set[str]:
    letters: set[str] = set()
    for s in d:
        for node in iter_constraint(s.constraint):
            if isinstance(node, Disjoint):
                letters.add("D")
            elif isinstance(node, Equals):
                letters.add("E")
            elif isinstance(node, LessThan):
                letters.add("O")
            elif isinstance(node, GEq) and node.count != 1:
                letters.add("C")
        for path in constraint_paths(s.constraint):
            for p in iter_path(path):
                if isinstance(p, Seq):
                    letters.add("S")
                elif isinstance(p, ZeroOrOne):
                    letters.add("Z")
                elif isinstance(p, Alt):
                    letters.add("A")
                elif isinstance(p, (ZeroOrMore, OneOrMore)):
                    letters.add("T")
    return letters


def fragment_name(letters: Iterable[str]) -> str:
    """Concatenated letters in canonical order, or ``"∅"`` for the base language."""
    s = set(letters)
    name = "".join(ch for ch in FRAGMENT_ORDER if ch in s)
    return name or "∅"
