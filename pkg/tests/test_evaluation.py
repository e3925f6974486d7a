from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from shaperec.evaluation import (
    EMPTY_ASSIGNMENT,
    Assignment,
    TruthValue,
    check_condition1,
    check_targets,
    compare_literals,
    eval_constraint,
    filter_holds,
    is_faithful,
    is_total,
    node_universe,
    path_eval,
    target_nodes,
)
from shaperec.rdf import XSD_DECIMAL, XSD_INTEGER, BlankNode, Graph, Literal, sorted_terms
from shaperec.shapes import (
    TRUE,
    Alt,
    ClassTarget,
    Closed,
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
    OneOrMore,
    Pattern,
    Pred,
    Ref,
    Seq,
    Shape,
    SubjectsOfTarget,
    ZeroOrMore,
    ZeroOrOne,
    iter_constraint,
)
from support import ex

T, F, U = TruthValue.TRUE, TruthValue.FALSE, TruthValue.UNDEFINED
P = Pred(ex("p"))


def test_kleene_tables():
    assert [~v for v in (F, U, T)] == [T, U, F]
    assert (T & U, F & U, U & U) == (U, F, U)
    assert (T | U, F | U, U | U) == (T, U, U)


def test_assignment_never_stores_undefined():
    sigma = Assignment({(ex("a"), ex("S")): True, (ex("b"), ex("S")): U, (ex("c"), ex("S")): F})
    assert len(sigma) == 2
    assert sigma.value(ex("b"), ex("S")) is U
    assert sigma.positive(ex("a"), ex("S")) and not sigma.positive(ex("c"), ex("S"))
    assert Assignment.nested({ex("a"): {ex("S"): T}}) == Assignment({(ex("a"), ex("S")): T})
    assert sigma.as_nested()[ex("c")] == {ex("S"): F}


def test_path_eval_examples(employees, veg_data):
    assert path_eval(employees, Pred(ex("hasOfficeNumber")), ex("Bob")) == {Literal("18"), Literal("3")}
    assert path_eval(veg_data, Inverse(Pred(ex("hasIngredient"))), ex("Chicken")) == {ex("DailySpecial")}
    assert ex("Anne") in path_eval(employees, ZeroOrMore(P), ex("Anne"))


def test_path_eval_compound():
    a, b, c = ex("a"), ex("b"), ex("c")
    g = Graph([(a, ex("p"), b), (b, ex("p"), c), (c, ex("p"), a), (a, ex("q"), c)])
    q = Pred(ex("q"))
    assert path_eval(g, Seq(P, P), a) == {c}
    assert path_eval(g, Alt(P, q), a) == {b, c}
    assert path_eval(g, ZeroOrOne(q), a) == {a, c}
    assert path_eval(g, OneOrMore(P), a) == {a, b, c}
    assert path_eval(g, OneOrMore(q), a) == {c}
    assert path_eval(g, Inverse(Seq(P, q)), c) == {c}
    assert path_eval(g, Inverse(Seq(q, P)), a) == {a}


def test_target_nodes(employees):
    assert target_nodes(employees, ClassTarget(ex("Employee"))) == {ex("Anne"), ex("Bob"), ex("Carl")}
    assert target_nodes(Graph(), NodeTarget(ex("DailySpecial"))) == {ex("DailySpecial")}
    assert target_nodes(Graph(), SubjectsOfTarget(ex("worksAt"))) == frozenset()


def test_node_universe(employees, employee_doc, inconsistent_doc):
    # four subjects, two classes and three literals
    assert len(node_universe(employees, employee_doc)) == 9
    assert node_universe(Graph(), inconsistent_doc) == frozenset()
    d = Document([Shape(ex("S"), frozenset({NodeTarget(ex("x"))}))])
    assert node_universe(Graph(), d) == {ex("x")}


def test_employees_anne_fails(employees, employee_doc):
    c = employee_doc[ex("EmployeeShape")].constraint
    assert eval_constraint(employees, EMPTY_ASSIGNMENT, c, ex("Anne")) is F
    assert eval_constraint(employees, EMPTY_ASSIGNMENT, c, ex("Bob")) is T


def test_inconsistent_shape_is_undefined_when_empty(inconsistent_doc):
    s = ex("InconsistentS")
    g = Graph([(ex("a"), ex("p"), ex("b"))])
    assert eval_constraint(g, EMPTY_ASSIGNMENT, inconsistent_doc[s].constraint, ex("a")) is U
    assert check_condition1(g, EMPTY_ASSIGNMENT, inconsistent_doc)
    for v in (T, F):
        assert not check_condition1(g, Assignment({(ex("a"), s): v}), inconsistent_doc)


def test_office_numbers_bob_fails_with_short_numbers(employees, office_doc):
    office = ex("OfficeNumberShape")
    sigma = Assignment({(Literal("171"), office): T, (Literal("18"), office): F, (Literal("3"), office): F})
    c = office_doc[ex("EmployeeShapeB")].constraint
    assert eval_constraint(employees, sigma, c, ex("Bob")) is F
    assert eval_constraint(employees, sigma, c, ex("Carl")) is T


def _full_evaluation(g, d):
    """The condition-1 assignment of a document without references."""
    return Assignment(
        {(n, s.name): eval_constraint(g, EMPTY_ASSIGNMENT, s.constraint, n) for n in node_universe(g, d) for s in d}
    )


def test_employees_condition1_and_targets(employees, employee_doc):
    sigma = _full_evaluation(employees, employee_doc)
    assert sigma.value(ex("Anne"), ex("EmployeeShape")) is F
    assert sigma.positive(ex("Bob"), ex("EmployeeShape")) and sigma.positive(ex("Carl"), ex("EmployeeShape"))
    assert check_condition1(employees, sigma, employee_doc)
    assert not check_targets(employees, sigma, employee_doc)
    assert not is_faithful(employees, sigma, employee_doc)
    assert is_total(sigma, employees, employee_doc)


def test_targets_trivial_without_declarations(inconsistent_doc):
    assert check_targets(Graph([(ex("a"), ex("p"), ex("b"))]), EMPTY_ASSIGNMENT, inconsistent_doc)
    d = Document([Shape(ex("S"), frozenset({NodeTarget(ex("x"))}))])
    assert check_targets(Graph(), Assignment({(ex("x"), ex("S")): T}), d)
    assert is_faithful(Graph(), Assignment({(ex("x"), ex("S")): T}), d)


def test_is_total():
    d = Document([Shape(ex("S"), frozenset({NodeTarget(ex("x"))}))])
    assert not is_total(EMPTY_ASSIGNMENT, Graph(), d)
    assert is_total(EMPTY_ASSIGNMENT, Graph(), Document([Shape(ex("S"))]))


def test_geq_counting_rule():
    a, b, c = ex("a"), ex("b"), ex("c")
    g = Graph([(a, ex("p"), b), (a, ex("p"), c)])
    s = ex("S")
    geq2 = GEq(2, P, Ref(s))
    for vb, vc, expected in [(T, T, T), (T, U, U), (T, F, F), (U, U, U), (F, U, F), (F, F, F)]:
        sigma = Assignment({(b, s): vb, (c, s): vc})
        assert eval_constraint(g, sigma, geq2, a) is expected, (vb, vc)


@pytest.mark.parametrize(
    "kind, node, expected",
    [
        (NodeKindIri(), ex("a"), True),
        (NodeKindIri(), Literal("a"), False),
        (NodeKindBlank(), BlankNode("x"), True),
        (NodeKindLiteral(), Literal("a"), True),
        (Datatype(ex("dt")), Literal("a", ex("dt").value), True),
        (Datatype(ex("dt")), Literal("a"), False),
        (MinLength(3), Literal("171"), True),
        (MinLength(3), Literal("18"), False),
        (MaxLength(2), Literal("18"), True),
        (MinLength(3), ex("a"), True),
        (MinLength(0), BlankNode("x"), False),
        (Pattern("^1[0-9]"), Literal("171"), True),
        (Pattern("^1[0-9]"), Literal("3"), False),
        (Pattern("ABC", "i"), Literal("xabc"), True),
        (InSet(frozenset({ex("a")})), ex("a"), True),
        (InSet(frozenset({ex("a")})), ex("b"), False),
    ],
)
def test_filters(kind, node, expected):
    assert filter_holds(kind, node) is expected


def test_literal_order():
    i = lambda v: Literal(v, XSD_INTEGER)  # noqa: E731
    assert compare_literals(i("9"), i("10")) == -1
    assert compare_literals(i("2"), Literal("2.0", XSD_DECIMAL)) == 0
    assert compare_literals(Literal("b"), Literal("ab")) == 1
    assert compare_literals(Literal("1"), i("1")) is None
    assert compare_literals(ex("a"), i("1")) is None


def test_pair_constraints():
    a, p, q = ex("a"), ex("p"), ex("q")
    i = lambda v: Literal(v, XSD_INTEGER)  # noqa: E731
    g = Graph([(a, p, i("1")), (a, p, i("2")), (a, q, i("2")), (a, q, i("3")), (a, ex("r"), i("1"))])
    e = EMPTY_ASSIGNMENT
    assert eval_constraint(g, e, Equals(P, p), a) is T
    assert eval_constraint(g, e, Equals(P, q), a) is F
    assert eval_constraint(g, e, Disjoint(P, q), a) is F
    assert eval_constraint(g, e, Disjoint(P, ex("zz")), a) is T
    assert eval_constraint(g, e, LessThan(P, q), a) is F
    assert eval_constraint(g, e, LessThan(P, q, or_equals=True), a) is T
    assert eval_constraint(g, e, LessThan(Pred(q), ex("r"), inverted=True), a) is T
    assert eval_constraint(g, e, LessThan(P, ex("zz")), a) is T
    assert eval_constraint(g, e, Closed(frozenset({p, q, ex("r")})), a) is T
    assert eval_constraint(g, e, Closed(frozenset({p, q})), a) is F
    assert eval_constraint(g, e, Closed(frozenset()), ex("other")) is T


def test_geq_with_true_is_two_valued_cardinality():
    for inst in gen.instances(40):
        for n in node_universe(inst.graph, inst.doc):
            for k in (1, 2, 3):
                got = eval_constraint(inst.graph, EMPTY_ASSIGNMENT, GEq(k, P, TRUE), n)
                assert got is TruthValue.of(len(path_eval(inst.graph, P, n)) >= k)


def test_path_closure_inclusions():
    for inst in gen.instances(40):
        for n in node_universe(inst.graph, inst.doc):
            star = path_eval(inst.graph, ZeroOrMore(P), n)
            assert star >= path_eval(inst.graph, OneOrMore(P), n) | {n}
            assert path_eval(inst.graph, ZeroOrOne(P), n) <= star


def test_reference_free_documents_have_one_condition1_assignment():
    checked = 0
    for inst in gen.instances(150):
        if any(isinstance(c, Ref) for s in inst.doc for c in iter_constraint(s.constraint)) or inst.pairs > 6:
            continue
        g, d = inst.graph, inst.doc
        pairs = [(n, s.name) for n in sorted_terms(node_universe(g, d)) for s in d]
        found = [
            combo
            for combo in itertools.product((U, F, T), repeat=len(pairs))
            if check_condition1(g, Assignment(dict(zip(pairs, combo))), d)
        ]
        assert len(found) == 1
        checked += 1
    assert checked >= 20


def test_two_valued_constructs_never_undefined():
    for inst in gen.instances(80):
        g, d = inst.graph, inst.doc
        sigma = EMPTY_ASSIGNMENT
        for s in d:
            for c in iter_constraint(s.constraint):
                if isinstance(c, (Equals, Disjoint, LessThan, Closed, Filter, HasValue)):
                    for n in node_universe(g, d):
                        assert eval_constraint(g, sigma, c, n) is not U


_value = st.sampled_from((U, F, T))


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10_000), data=st.data())
def test_kleene_monotonicity(seed, data):
    """Refining an assignment never flips a definite result."""
    inst = gen.random_instance(seed)
    g, d = inst.graph, inst.doc
    pairs = [(n, s.name) for n in sorted_terms(node_universe(g, d)) for s in d]
    coarse = {p: data.draw(_value) for p in pairs}
    fine = {p: (data.draw(st.sampled_from((F, T))) if v is U else v) for p, v in coarse.items()}
    sigma, refined = Assignment(coarse), Assignment(fine)
    for s in d:
        for n in node_universe(g, d):
            before = eval_constraint(g, sigma, s.constraint, n)
            if before is not U:
                assert eval_constraint(g, refined, s.constraint, n) is before
