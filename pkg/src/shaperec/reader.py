"""Read a shapes graph (RDF using the ``sh:`` vocabulary) into a :class:`Document`.

All surface sugar is removed here. Property-shape constraints that talk
about value nodes are quantified universally over the shape's path, counts
become ``GEq`` and ``maxCount k`` becomes ``Not(GEq(k + 1, ...))``.

Blank-node shapes without targets that are referenced exactly once are
inlined into their referrer instead of becoming separate named shapes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ShapesError, UnsupportedVocabulary
from .rdf import (
    RDF_FIRST,
    RDF_NIL,
    RDF_TYPE,
    SH,
    XSD_BOOLEAN,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Term,
    read_list,
    sh,
    sorted_terms,
)
from .shapes import (
    Alt,
    ClassTarget,
    Closed,
    Constraint,
    Datatype,
    Disjoint,
    Document,
    Equals,
    Filter,
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
    TRUE,
    Shape,
    SubjectsOfTarget,
    ZeroOrMore,
    ZeroOrOne,
    conj,
    disj,
    for_all,
    strongly_connected_components,
)

TARGET_PREDICATES = {
    sh("targetNode"): NodeTarget,
    sh("targetClass"): ClassTarget,
    sh("targetSubjectsOf"): SubjectsOfTarget,
    sh("targetObjectsOf"): ObjectsOfTarget,
}

# predicates whose object is a shape
SHAPE_VALUED = (sh("node"), sh("not"), sh("qualifiedValueShape"), sh("property"))
# predicates whose object is a list of shapes
SHAPE_LIST_VALUED = (sh("and"), sh("or"))

CONSTRAINT_PREDICATES = frozenset(
    sh(name)
    for name in (
        "path", "minCount", "maxCount", "qualifiedValueShape", "qualifiedMinCount",
        "qualifiedMaxCount", "class", "datatype", "nodeKind", "minLength", "maxLength",
        "pattern", "flags", "in", "hasValue", "node", "property", "not", "and", "or",
        "equals", "disjoint", "lessThan", "lessThanOrEquals", "closed", "ignoredProperties",
    )
)
INFORMATIONAL_PREDICATES = frozenset(
    sh(name) for name in ("name", "description", "message", "severity", "order", "group", "defaultValue")
)
PATH_PREDICATES = {
    sh("inversePath"): Inverse,
    sh("alternativePath"): Alt,
    sh("zeroOrMorePath"): ZeroOrMore,
    sh("oneOrMorePath"): OneOrMore,
    sh("zeroOrOnePath"): ZeroOrOne,
}
SUPPORTED_PREDICATES = (
    CONSTRAINT_PREDICATES | INFORMATIONAL_PREDICATES | frozenset(TARGET_PREDICATES) | frozenset(PATH_PREDICATES)
)

NODE_SHAPE = sh("NodeShape")
PROPERTY_SHAPE = sh("PropertyShape")

NODE_KINDS = {
    sh("IRI"): (NodeKindIri(),),
    sh("BlankNode"): (NodeKindBlank(),),
    sh("Literal"): (NodeKindLiteral(),),
    sh("BlankNodeOrIRI"): (NodeKindBlank(), NodeKindIri()),
    sh("BlankNodeOrLiteral"): (NodeKindBlank(), NodeKindLiteral()),
    sh("IRIOrLiteral"): (NodeKindIri(), NodeKindLiteral()),
}


def _is_sh(t: Term) -> bool:
    return isinstance(t, Iri) and t.value.startswith(SH)


def vocabulary_report(g: Graph) -> list[tuple[Term, bool]]:
    """Every ``sh:`` predicate used in ``g``, flagged supported or not."""
    return [(p, p in SUPPORTED_PREDICATES) for p in sorted_terms(p for p in g.predicates() if _is_sh(p))]


@dataclass
class ShapesReader:
    graph: Graph
    strict: bool = True
    warnings: list[str] = field(default_factory=list)

    def read(self) -> Document:
        self._shape_nodes = self._find_shapes()
        self._inline = self._inlinable()
        shapes = []
        for node in sorted_terms(self._shape_nodes):
            self._check_vocabulary(node)
            if node in self._inline:
                continue
            shapes.append(Shape(node, self._targets(node), self._constraint(node)))
        return Document(shapes)

    # -- discovery ---------------------------------------------------------

    def _find_shapes(self) -> set[Term]:
        g = self.graph
        found: set[Term] = set()
        for kind in (NODE_SHAPE, PROPERTY_SHAPE):
            found |= g.subjects(RDF_TYPE, kind)
        for p in (*TARGET_PREDICATES, sh("path")):
            found |= {t.subject for t in g.with_predicate(p)}
        for _, target in self._references():
            found.add(target)
        for n in found:
            if isinstance(n, Literal):
                raise ShapesError(f"a literal cannot be a shape: {n}")
        return found

    def _references(self) -> list[tuple[Term, Term]]:
        g = self.graph
        refs: list[tuple[Term, Term]] = []
        for p in SHAPE_VALUED:
            refs.extend((t.subject, t.object) for t in g.with_predicate(p))
        for p in SHAPE_LIST_VALUED:
            for t in g.with_predicate(p):
                refs.extend((t.subject, m) for m in self._list(t.object, p))
        return refs

    def _inlinable(self) -> set[Term]:
        g = self.graph
        refs = self._references()
        indegree: dict[Term, int] = {}
        for _, target in refs:
            indegree[target] = indegree.get(target, 0) + 1
        candidates = {
            n
            for n in self._shape_nodes
            if isinstance(n, BlankNode)
            and indegree.get(n, 0) == 1
            and not any(g.objects(n, p) for p in TARGET_PREDICATES)
        }
        edges: dict[Term, list[Term]] = {n: [] for n in candidates}
        for src, dst in refs:
            if src in candidates and dst in candidates:
                edges[src].append(dst)
        out = set()
        for comp in strongly_connected_components(sorted_terms(candidates), edges):
            if len(comp) == 1 and comp[0] not in edges[comp[0]]:
                out.add(comp[0])
        return out

    def _check_vocabulary(self, node: Term) -> None:
        for t in sorted(self.graph.with_subject(node), key=lambda t: str(t.predicate)):
            if _is_sh(t.predicate) and t.predicate not in SUPPORTED_PREDICATES:
                msg = f"unsupported SHACL predicate {t.predicate} on shape {node}"
                if self.strict:
                    raise UnsupportedVocabulary(msg)
                if msg not in self.warnings:
                    self.warnings.append(msg)

    # -- helpers -----------------------------------------------------------

    def _list(self, head: Term, where: Term) -> list[Term]:
        items = read_list(self.graph, head)
        if items is None:
            raise ShapesError(f"malformed RDF collection as object of {where}")
        return items

    def _values(self, node: Term, p: Term) -> list[Term]:
        return sorted_terms(self.graph.objects(node, p))

    def _single(self, node: Term, p: Term) -> Term | None:
        vals = self._values(node, p)
        if len(vals) > 1:
            raise ShapesError(f"shape {node} has {len(vals)} values for {p}, expected one")
        return vals[0] if vals else None

    def _int(self, node: Term, p: Term) -> int | None:
        v = self._single(node, p)
        if v is None:
            return None
        if not isinstance(v, Literal):
            raise ShapesError(f"{p} of {node} must be an integer literal, found {v}")
        try:
            n = int(v.lexical)
        except ValueError:
            raise ShapesError(f"{p} of {node} must be an integer literal, found {v}") from None
        if n < 0:
            raise ShapesError(f"{p} of {node} must be non-negative")
        return n

    def _targets(self, node: Term) -> frozenset:
        out = set()
        for p, cls in TARGET_PREDICATES.items():
            for v in self._values(node, p):
                out.add(cls(v))
        return frozenset(out)

    def _ref(self, node: Term) -> Constraint:
        if node in self._inline:
            return self._constraint(node)
        return Ref(node)

    def _path(self, node: Term, seen: frozenset = frozenset()) -> Path:
        g = self.graph
        if isinstance(node, Literal):
            raise ShapesError(f"property path cannot be a literal: {node}")
        if isinstance(node, Iri) and node != RDF_NIL:
            return Pred(node)
        if node in seen:
            raise ShapesError(f"cyclic property path at {node}")
        seen = seen | {node}
        if node == RDF_NIL or g.objects(node, RDF_FIRST):
            parts = [self._path(m, seen) for m in self._list(node, sh("path"))]
            if len(parts) < 2:
                raise ShapesError("sequence path needs at least two members")
            return _fold(Seq, parts)
        kinds = [(p, self._single(node, p)) for p in PATH_PREDICATES if g.objects(node, p)]
        if len(kinds) != 1:
            raise ShapesError(f"malformed property path at {node}")
        p, value = kinds[0]
        if p == sh("alternativePath"):
            parts = [self._path(m, seen) for m in self._list(value, p)]
            if not parts:
                raise ShapesError("alternative path needs at least one member")
            return _fold(Alt, parts)
        return PATH_PREDICATES[p](self._path(value, seen))

    # -- constraints -------------------------------------------------------

    def _constraint(self, node: Term) -> Constraint:
        g = self.graph
        path_term = self._single(node, sh("path"))
        path = self._path(path_term) if path_term is not None else None
        if path is None and node in g.subjects(RDF_TYPE, PROPERTY_SHAPE):
            raise ShapesError(f"property shape {node} has no sh:path")

        def value_level(c: Constraint) -> Constraint:
            return for_all(path, c) if path is not None else c

        def needs_path(p: Term) -> Path:
            if path is None:
                raise ShapesError(f"{p} on {node} requires a property shape (sh:path)")
            return path

        parts: list[Constraint] = []

        min_count = self._int(node, sh("minCount"))
        if min_count is not None:
            q = needs_path(sh("minCount"))
            if min_count > 0:
                parts.append(GEq(min_count, q, TRUE))
        max_count = self._int(node, sh("maxCount"))
        if max_count is not None:
            parts.append(Not(GEq(max_count + 1, needs_path(sh("maxCount")), TRUE)))

        parts.extend(self._qualified(node, needs_path))

        for c in self._values(node, sh("class")):
            parts.append(value_level(GEq(1, Pred(RDF_TYPE), HasValue(c))))
        for d in self._values(node, sh("datatype")):
            if not isinstance(d, Iri):
                raise ShapesError(f"sh:datatype of {node} must be an IRI")
            parts.append(value_level(Filter(Datatype(d))))
        for k in self._values(node, sh("nodeKind")):
            if k not in NODE_KINDS:
                raise ShapesError(f"unknown sh:nodeKind {k}")
            parts.append(value_level(disj(Filter(f) for f in NODE_KINDS[k])))
        length = self._int(node, sh("minLength"))
        if length is not None:
            parts.append(value_level(Filter(MinLength(length))))
        length = self._int(node, sh("maxLength"))
        if length is not None:
            parts.append(value_level(Filter(MaxLength(length))))
        parts.extend(value_level(c) for c in self._patterns(node))
        for head in self._values(node, sh("in")):
            parts.append(value_level(Filter(InSet(frozenset(self._list(head, sh("in")))))))
        for v in self._values(node, sh("hasValue")):
            parts.append(GEq(1, path, HasValue(v)) if path is not None else HasValue(v))

        for v in self._values(node, sh("node")):
            parts.append(value_level(self._ref(v)))
        for v in self._values(node, sh("property")):
            parts.append(value_level(self._ref(v)))
        for v in self._values(node, sh("not")):
            parts.append(value_level(Not(self._ref(v))))
        for head in self._values(node, sh("and")):
            members = self._list(head, sh("and"))
            parts.append(value_level(conj(self._ref(m) for m in members)))
        for head in self._values(node, sh("or")):
            members = self._list(head, sh("or"))
            parts.append(value_level(disj(self._ref(m) for m in members)))

        for p in self._values(node, sh("equals")):
            parts.append(Equals(needs_path(sh("equals")), p))
        for p in self._values(node, sh("disjoint")):
            parts.append(Disjoint(needs_path(sh("disjoint")), p))
        for p in self._values(node, sh("lessThan")):
            parts.append(LessThan(needs_path(sh("lessThan")), p, False))
        for p in self._values(node, sh("lessThanOrEquals")):
            parts.append(LessThan(needs_path(sh("lessThanOrEquals")), p, True))

        closed = self._single(node, sh("closed"))
        if closed is not None:
            if closed not in (Literal("true", XSD_BOOLEAN), Literal("false", XSD_BOOLEAN)):
                raise ShapesError(f"sh:closed of {node} must be a boolean")
            if closed.lexical == "true":
                if path is not None:
                    raise ShapesError(f"sh:closed on property shape {node} is not supported")
                parts.append(Closed(self._allowed(node)))
        elif g.objects(node, sh("ignoredProperties")):
            self.warnings.append(f"sh:ignoredProperties without sh:closed true on {node}")

        return conj(parts)

    def _qualified(self, node: Term, needs_path) -> list[Constraint]:
        shape = self._single(node, sh("qualifiedValueShape"))
        qmin = self._int(node, sh("qualifiedMinCount"))
        qmax = self._int(node, sh("qualifiedMaxCount"))
        if shape is None:
            if qmin is not None or qmax is not None:
                raise ShapesError(f"qualified count on {node} without sh:qualifiedValueShape")
            return []
        if qmin is None and qmax is None:
            raise ShapesError(f"sh:qualifiedValueShape on {node} without a qualified count")
        q = needs_path(sh("qualifiedValueShape"))
        body = self._ref(shape)
        out: list[Constraint] = []
        if qmin:
            out.append(GEq(qmin, q, body))
        if qmax is not None:
            out.append(Not(GEq(qmax + 1, q, body)))
        return out

    def _patterns(self, node: Term) -> list[Constraint]:
        patterns = self._values(node, sh("pattern"))
        flags = self._single(node, sh("flags"))
        if flags is not None and not isinstance(flags, Literal):
            raise ShapesError(f"sh:flags of {node} must be a literal")
        out = []
        for p in patterns:
            if not isinstance(p, Literal):
                raise ShapesError(f"sh:pattern of {node} must be a literal")
            try:
                out.append(Filter(Pattern(p.lexical, flags.lexical if flags else "")))
            except ValueError as exc:
                raise ShapesError(str(exc)) from None
        return out

    def _allowed(self, node: Term) -> frozenset:
        allowed: set[Term] = set()
        for prop in self._values(node, sh("property")):
            p = self._single(prop, sh("path"))
            if isinstance(p, Iri):
                allowed.add(p)
        for head in self._values(node, sh("ignoredProperties")):
            allowed.update(self._list(head, sh("ignoredProperties")))
        return frozenset(allowed)



def _fold(cls, parts: list):
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = cls(p, out)
    return out


def read_document(shapes_graph: Graph, *, strict: bool = True) -> Document:
    """Interpret ``shapes_graph`` as a document. See :class:`ShapesReader`."""
    return ShapesReader(shapes_graph, strict).read()
