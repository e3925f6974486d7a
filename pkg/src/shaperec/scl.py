"""Translation of documents into first-order SCL sentences, and their rendering.

A sentence is a conjunction of target axioms and one constraint axiom per
shape. The closed-shape form has no counterpart in the base grammar; it is
rendered with a reified ``triple(x, p, y)`` atom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .rdf import Iri, Term, sorted_terms
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

# ---------------------------------------------------------------------------
# Paths


@dataclass(frozen=True, slots=True)
class Rel:
    predicate: Term
    inverted: bool = False


@dataclass(frozen=True, slots=True)
class PSeq:
    first: SclPath
    second: SclPath


@dataclass(frozen=True, slots=True)
class PAlt:
    left: SclPath
    right: SclPath


@dataclass(frozen=True, slots=True)
class PZeroOrOne:
    path: SclPath


@dataclass(frozen=True, slots=True)
class PStar:
    """Reflexive-transitive closure; ``at_least_one`` drops the reflexive part."""

    path: SclPath
    at_least_one: bool = False


SclPath = Union[Rel, PSeq, PAlt, PZeroOrOne, PStar]

# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Neg:
    inner: SclFormula


@dataclass(frozen=True, slots=True)
class Conj:
    left: SclFormula
    right: SclFormula


@dataclass(frozen=True, slots=True)
class EqConst:
    value: Term


@dataclass(frozen=True, slots=True)
class FilterAtom:
    kind: FilterKind


@dataclass(frozen=True, slots=True)
class ShapeAtom:
    shape: ShapeName


@dataclass(frozen=True, slots=True)
class ExistsPath:
    path: SclPath
    body: SclFormula


@dataclass(frozen=True, slots=True)
class CountGeq:
    count: int
    path: SclPath
    body: SclFormula


@dataclass(frozen=True, slots=True)
class DisjointAtom:
    path: SclPath
    predicate: Term


@dataclass(frozen=True, slots=True)
class EqualsAtom:
    path: SclPath
    predicate: Term


@dataclass(frozen=True, slots=True)
class OrderAll:
    path: SclPath
    predicate: Term
    op: str  # "<" or "<="
    inverted: bool = False


@dataclass(frozen=True, slots=True)
class ClosedForm:
    allowed: frozenset


SclFormula = Union[
    Top, Neg, Conj, EqConst, FilterAtom, ShapeAtom, ExistsPath, CountGeq,
    DisjointAtom, EqualsAtom, OrderAll, ClosedForm,
]

# ---------------------------------------------------------------------------
# Sentences

TARGET_FORMS = ("node", "class", "subjectsOf", "objectsOf")


@dataclass(frozen=True, slots=True)
class TargetAxiom:
    form: str
    shape: ShapeName
    param: Term

    def __post_init__(self) -> None:
        if self.form not in TARGET_FORMS:
            raise ValueError(f"unknown target form {self.form!r}")


@dataclass(frozen=True, slots=True)
class ConstraintAxiom:
    shape: ShapeName
    body: SclFormula


SclAxiom = Union[TargetAxiom, ConstraintAxiom]


@dataclass(frozen=True, slots=True)
class SclSentence:
    conjuncts: tuple = ()


# ---------------------------------------------------------------------------
# Translation


def translate_path(q: Path, inverted: bool = False) -> SclPath:
    """Inverses are pushed down to the relation symbols."""
    if isinstance(q, Pred):
        return Rel(q.predicate, inverted)
    if isinstance(q, Inverse):
        return translate_path(q.path, not inverted)
    if isinstance(q, Seq):
        a, b = translate_path(q.first, inverted), translate_path(q.second, inverted)
        return PSeq(b, a) if inverted else PSeq(a, b)
    if isinstance(q, Alt):
        return PAlt(translate_path(q.left, inverted), translate_path(q.right, inverted))
    if isinstance(q, ZeroOrOne):
        return PZeroOrOne(translate_path(q.path, inverted))
    if isinstance(q, ZeroOrMore):
        return PStar(translate_path(q.path, inverted))
    if isinstance(q, OneOrMore):
        return PStar(translate_path(q.path, inverted), at_least_one=True)
    raise TypeError(f"not a path: {q!r}")


def translate_constraint(c: Constraint) -> SclFormula:
    if isinstance(c, TrueC):
        return Top()
    if isinstance(c, Not):
        return Neg(translate_constraint(c.inner))
    if isinstance(c, And):
        return Conj(translate_constraint(c.left), translate_constraint(c.right))
    if isinstance(c, HasValue):
        return EqConst(c.value)
    if isinstance(c, Filter):
        return FilterAtom(c.kind)
    if isinstance(c, Ref):
        return ShapeAtom(c.shape)
    if isinstance(c, GEq):
        path, body = translate_path(c.path), translate_constraint(c.inner)
        return ExistsPath(path, body) if c.count == 1 else CountGeq(c.count, path, body)
    if isinstance(c, Equals):
        return EqualsAtom(translate_path(c.path), c.predicate)
    if isinstance(c, Disjoint):
        return DisjointAtom(translate_path(c.path), c.predicate)
    if isinstance(c, LessThan):
        return OrderAll(translate_path(c.path), c.predicate, "<=" if c.or_equals else "<", c.inverted)
    if isinstance(c, Closed):
        return ClosedForm(c.allowed)
    raise TypeError(f"not a constraint: {c!r}")


def target_axiom(shape: ShapeName, t: TargetDecl) -> TargetAxiom:
    if isinstance(t, NodeTarget):
        return TargetAxiom("node", shape, t.node)
    if isinstance(t, ClassTarget):
        return TargetAxiom("class", shape, t.cls)
    if isinstance(t, SubjectsOfTarget):
        return TargetAxiom("subjectsOf", shape, t.predicate)
    if isinstance(t, ObjectsOfTarget):
        return TargetAxiom("objectsOf", shape, t.predicate)
    raise TypeError(f"not a target declaration: {t!r}")


def translate(d: Document) -> SclSentence:
    conjuncts: list[SclAxiom] = []
    for s in d:
        conjuncts.extend(target_axiom(s.name, t) for t in s.sorted_targets())
        conjuncts.append(ConstraintAxiom(s.name, translate_constraint(s.constraint)))
    return SclSentence(tuple(conjuncts))


# ---------------------------------------------------------------------------
# Analysis


def iter_formula(f: SclFormula) -> Iterator[SclFormula]:
    yield f
    if isinstance(f, Neg):
        yield from iter_formula(f.inner)
    elif isinstance(f, Conj):
        yield from iter_formula(f.left)
        yield from iter_formula(f.right)
    elif isinstance(f, (ExistsPath, CountGeq)):
        yield from iter_formula(f.body)


def iter_scl_path(p: SclPath) -> Iterator[SclPath]:
    yield p
    if isinstance(p, PSeq):
        yield from iter_scl_path(p.first)
        yield from iter_scl_path(p.second)
    elif isinstance(p, PAlt):
        yield from iter_scl_path(p.left)
        yield from iter_scl_path(p.right)
    elif isinstance(p, (PZeroOrOne, PStar)):
        yield from iter_scl_path(p.path)


def well_formed(s: SclSentence) -> bool:
    """Every shape relation in the sentence is defined by exactly one constraint axiom."""
    defined: dict[ShapeName, int] = {}
    mentioned: set[ShapeName] = set()
    for ax in s.conjuncts:
        mentioned.add(ax.shape)
        if isinstance(ax, ConstraintAxiom):
            defined[ax.shape] = defined.get(ax.shape, 0) + 1
            mentioned.update(f.shape for f in iter_formula(ax.body) if isinstance(f, ShapeAtom))
    return all(defined.get(name, 0) == 1 for name in mentioned)


def fragment_of(s: SclSentence) -> set[str]:
    letters: set[str] = set()
    for ax in s.conjuncts:
        if not isinstance(ax, ConstraintAxiom):
            continue
        for f in iter_formula(ax.body):
            if isinstance(f, DisjointAtom):
                letters.add("D")
            elif isinstance(f, EqualsAtom):
                letters.add("E")
            elif isinstance(f, OrderAll):
                letters.add("O")
            elif isinstance(f, CountGeq) and f.count != 1:
                letters.add("C")
            if isinstance(f, (ExistsPath, CountGeq, DisjointAtom, EqualsAtom, OrderAll)):
                for p in iter_scl_path(f.path):
                    if isinstance(p, PSeq):
                        letters.add("S")
                    elif isinstance(p, PZeroOrOne):
                        letters.add("Z")
                    elif isinstance(p, PAlt):
                        letters.add("A")
                    elif isinstance(p, PStar):
                        letters.add("T")
    return letters


# ---------------------------------------------------------------------------
# Rendering

_LOCAL = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")
_BASE_VARS = ("x", "y", "z", "w", "v", "u")


class _Renderer:
    def __init__(self, prefixes: dict[str, str] | None):
        # longest namespace first so the most specific prefix wins
        self.prefixes = sorted((prefixes or {}).items(), key=lambda kv: (-len(kv[1]), kv[0]))
        self.counter = 0

    def fresh(self) -> str:
        i = self.counter
        self.counter += 1
        return _BASE_VARS[i] if i < len(_BASE_VARS) else f"v{i}"

    def term(self, t: Term) -> str:
        if isinstance(t, Iri):
            for prefix, ns in self.prefixes:
                local = t.value[len(ns):]
                if t.value.startswith(ns) and (local == "" or _LOCAL.match(local)):
                    return f"{prefix}:{local}"
        return str(t)

    def shape(self, name: ShapeName, var: str) -> str:
        return f"S_{self.term(name)}({var})"

    def rel(self, p: Term, a: str, b: str, inverted: bool = False) -> str:
        return f"R_{self.term(p)}{'^' if inverted else ''}({a}, {b})"

    def path(self, p: SclPath, a: str, b: str) -> str:
        if isinstance(p, Rel):
            return self.rel(p.predicate, a, b, p.inverted)
        if isinstance(p, PSeq):
            z = self.fresh()
            return f"(exists {z} . {self.path(p.first, a, z)} & {self.path(p.second, z, b)})"
        if isinstance(p, PAlt):
            return f"({self.path(p.left, a, b)} | {self.path(p.right, a, b)})"
        if isinstance(p, PZeroOrOne):
            return f"({a} = {b} | {self.path(p.path, a, b)})"
        if isinstance(p, PStar):
            inner = self.path(p.path, a, b)
            return f"({inner} ; ({inner})*)" if p.at_least_one else f"({inner})*"
        raise TypeError(f"not an SCL path: {p!r}")

    def filter(self, k: FilterKind, var: str) -> str:
        if isinstance(k, NodeKindIri):
            name = "isIRI"
        elif isinstance(k, NodeKindBlank):
            name = "isBlank"
        elif isinstance(k, NodeKindLiteral):
            name = "isLiteral"
        elif isinstance(k, Datatype):
            name = f"datatype_{self.term(k.datatype)}"
        elif isinstance(k, MinLength):
            name = f"minLength_{k.length}"
        elif isinstance(k, MaxLength):
            name = f"maxLength_{k.length}"
        elif isinstance(k, Pattern):
            text = k.regex.replace("\\", "\\\\").replace('"', '\\"')
            name = f'pattern_"{text}"' + (f"_{k.flags}" if k.flags else "")
        elif isinstance(k, InSet):
            name = "in_{" + ",".join(self.term(t) for t in sorted_terms(k.terms)) + "}"
        else:
            raise TypeError(f"not a filter: {k!r}")
        return f"F_{name}({var})"

    def operand(self, f: SclFormula, var: str) -> str:
        text = self.formula(f, var)
        if isinstance(f, (Top, Neg, EqConst, FilterAtom, ShapeAtom)):
            return text
        return f"({text})"

    def formula(self, f: SclFormula, x: str) -> str:
        if isinstance(f, Top):
            return "true"
        if isinstance(f, Neg):
            return "!" + self.operand(f.inner, x)
        if isinstance(f, Conj):
            return f"{self.operand(f.left, x)} & {self.operand(f.right, x)}"
        if isinstance(f, EqConst):
            return f"{x} = {self.term(f.value)}"
        if isinstance(f, FilterAtom):
            return self.filter(f.kind, x)
        if isinstance(f, ShapeAtom):
            return self.shape(f.shape, x)
        if isinstance(f, (ExistsPath, CountGeq)):
            y = self.fresh()
            q = "exists" if isinstance(f, ExistsPath) else f"exists>={f.count}"
            return f"{q} {y} . {self.path(f.path, x, y)} & {self.operand(f.body, y)}"
        if isinstance(f, DisjointAtom):
            y = self.fresh()
            return f"!(exists {y} . {self.path(f.path, x, y)} & {self.rel(f.predicate, x, y)})"
        if isinstance(f, EqualsAtom):
            y = self.fresh()
            return f"forall {y} . {self.path(f.path, x, y)} <-> {self.rel(f.predicate, x, y)}"
        if isinstance(f, OrderAll):
            y, z = self.fresh(), self.fresh()
            op = {"<": ">", "<=": ">="}[f.op] if f.inverted else f.op
            return f"forall {y}, {z} . {self.path(f.path, x, y)} & {self.rel(f.predicate, x, z)} -> {y} {op} {z}"
        if isinstance(f, ClosedForm):
            y, p = self.fresh(), "p"
            allowed = " | ".join(f"{p} = {self.term(t)}" for t in sorted_terms(f.allowed)) or "false"
            return f"forall {y}, {p} . triple({x}, {p}, {y}) -> ({allowed})"
        raise TypeError(f"not an SCL formula: {f!r}")

    def axiom(self, ax: SclAxiom) -> str:
        self.counter = 0
        if isinstance(ax, ConstraintAxiom):
            x = self.fresh()
            return f"forall {x} . {self.shape(ax.shape, x)} <-> {self.formula(ax.body, x)}"
        if ax.form == "node":
            return self.shape(ax.shape, self.term(ax.param))
        x = self.fresh()
        if ax.form == "class":
            return f"forall {x} . isA({x}, {self.term(ax.param)}) -> {self.shape(ax.shape, x)}"
        y = self.fresh()
        rel = self.rel(ax.param, x, y, inverted=ax.form == "objectsOf")
        return f"forall {x}, {y} . {rel} -> {self.shape(ax.shape, x)}"


def render_axiom(ax: SclAxiom, prefixes: dict[str, str] | None = None) -> str:
    return _Renderer(prefixes).axiom(ax)


def render(s: SclSentence, prefixes: dict[str, str] | None = None) -> str:
    """ASCII rendering, one axiom per line joined by ``&``; the empty sentence is ``true``."""
    r = _Renderer(prefixes)
    lines = [r.axiom(ax) for ax in s.conjuncts]
    if not lines:
        return "true"
    if len(lines) == 1:
        return lines[0]
    return " &\n".join(f"({line})" for line in lines)
