"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the summary lines.
"""

from __future__ import annotations

import itertools
import random
import time
from functools import lru_cache

import gen
import scl_eval
from shaperec.cli import main
from shaperec.evaluation import Assignment, is_faithful, is_total, node_universe
from shaperec.parsing import load_graph
from shaperec.rdf import BlankNode, Graph, Triple, sorted_terms
from shaperec.reader import read_document
from shaperec.scl import (
    ConstraintAxiom,
    ExistsPath,
    FilterAtom,
    Rel,
    SclSentence,
    ShapeAtom,
    TargetAxiom,
    render,
    render_axiom,
    translate,
)
from shaperec.semantics import (
    EXTENDED_MODES,
    Mode,
    brute_force_validate,
    clear_oracle_cache,
    has_closed,
    monotone_extension_check,
    validate,
)
from shaperec.shapes import (
    ClassTarget,
    Document,
    MinLength,
    NodeTarget,
    ObjectsOfTarget,
    Shape,
    SubjectsOfTarget,
    is_recursive,
)
from support import FIXTURES, ex

SUITE_SIZE = 500
SUITE_SEED = 0


def verdict(number: int, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, (time.perf_counter() - start) * 1000


def load_and_validate(data: str, shapes: str, mode: Mode):
    g = load_graph(FIXTURES / data)[0]
    d = read_document(load_graph(FIXTURES / shapes)[0])
    return validate(g, d, mode)


# ---------------------------------------------------------------------------
# 1-2: golden reproductions


def test_criterion_1_employees():
    result, ms = timed(lambda: load_and_validate("employees.ttl", "employee_shapes.ttl", Mode.STANDARD))
    pairs = result.violation_pairs()
    ok = not result.valid and pairs == {(ex("Anne"), ex("EmployeeShape"))} and ms < 50
    verdict(1, ok, f"invalid={not result.valid} violations={len(pairs)} on Anne, {ms:.1f} ms (< 50)")


def test_criterion_2_office_numbers():
    result, ms = timed(lambda: load_and_validate("employees.ttl", "office_number_shapes.ttl", Mode.STANDARD))
    shape = ex("EmployeeShapeB")
    ok = not result.valid and result.violation_pairs() == {(ex("Anne"), shape), (ex("Bob"), shape)} and ms < 50
    verdict(2, ok, f"violations={sorted(str(n) for n, _ in result.violation_pairs())}, {ms:.1f} ms (< 50)")


# ---------------------------------------------------------------------------
# 3-4: recursive examples


def test_criterion_3_inconsistent_split():
    d = read_document(load_graph(FIXTURES / "inconsistent_shapes.ttl")[0])
    graphs = ["employees.ttl", "vegdish_data.ttl", "chain_data.ttl"]
    outcomes = []
    for name in graphs:
        g = load_graph(FIXTURES / name)[0]
        assert len(g) > 0
        outcomes.append((validate(g, d, Mode.BRAVE_PARTIAL).valid, validate(g, d, Mode.BRAVE_TOTAL).valid))
    ok = len(graphs) >= 3 and all(bp and not bt for bp, bt in outcomes)
    verdict(3, ok, f"brave-partial valid and brave-total invalid on {sum(bp and not bt for bp, bt in outcomes)}/{len(graphs)} graphs")


def test_criterion_4_vegdish_split():
    g = load_graph(FIXTURES / "vegdish_data.ttl")[0]
    d = read_document(load_graph(FIXTURES / "vegdish_shapes.ttl")[0])
    outcome = {m: validate(g, d, m) for m in EXTENDED_MODES}
    witness_ok = all(
        outcome[m].witness is not None
        and outcome[m].witness.positive(ex("DailySpecial"), ex("VegDishShape"))
        and outcome[m].witness.positive(ex("Chicken"), ex("VegIngredientShape"))
        for m in (Mode.BRAVE_PARTIAL, Mode.BRAVE_TOTAL)
    )
    flags = {m.value: r.valid for m, r in outcome.items()}
    expected = {"brave-partial": True, "brave-total": True, "cautious-partial": False, "cautious-total": False}
    verdict(4, flags == expected and witness_ok, f"{flags}, witness marks dish and ingredient Pos: {witness_ok}")


# ---------------------------------------------------------------------------
# 5: SCL golden


def test_criterion_5_scl_golden(tmp_path, capsys):
    emp, office = ex("EmployeeShapeB"), ex("OfficeNumberShape")
    expected = SclSentence((
        TargetAxiom("class", emp, ex("Employee")),
        ConstraintAxiom(emp, ExistsPath(Rel(ex("hasOfficeNumber")), ShapeAtom(office))),
        ConstraintAxiom(office, FilterAtom(MinLength(3))),
    ))
    out = tmp_path / "office.scl"
    code = main(["translate", "--shapes", str(FIXTURES / "office_number_shapes.ttl"), "--out", str(out)])
    capsys.readouterr()
    structural = translate(read_document(load_graph(FIXTURES / "office_number_shapes.ttl")[0])) == expected
    textual = code == 0 and out.read_text() == render(expected) + "\n"

    s, c, p = ex("s"), ex("c"), ex("p")
    rows = {
        "node": (NodeTarget(c), f"S_{s}({c})"),
        "class": (ClassTarget(c), f"forall x . isA(x, {c}) -> S_{s}(x)"),
        "subjectsOf": (SubjectsOfTarget(p), f"forall x, y . R_{p}(x, y) -> S_{s}(x)"),
        "objectsOf": (ObjectsOfTarget(p), f"forall x, y . R_{p}^(x, y) -> S_{s}(x)"),
    }
    table_ok = True
    for form, (decl, text) in rows.items():
        (axiom, _) = translate(Document([Shape(s, frozenset({decl}))])).conjuncts
        table_ok &= axiom == TargetAxiom(form, s, c if form in ("node", "class") else p)
        table_ok &= render_axiom(axiom) == text
    verdict(5, structural and textual and table_ok, f"structural={structural} cli text={textual} target rows={table_ok}")


# ---------------------------------------------------------------------------
# 6-7: random suite


@lru_cache(maxsize=1)
def random_suite():
    """(instance, {mode: (fast, slow)}) for the seeded suite, plus elapsed seconds."""
    clear_oracle_cache()  # time the oracle from scratch
    start = time.perf_counter()
    rows = []
    for inst in gen.instances(SUITE_SIZE, start=SUITE_SEED):
        outcome = {}
        for mode in Mode:
            if mode is Mode.STANDARD and is_recursive(inst.doc):
                continue
            fast = validate(inst.graph, inst.doc, mode)
            slow = brute_force_validate(inst.graph, inst.doc, mode)
            outcome[mode] = (fast, slow)
        rows.append((inst, outcome))
    return rows, time.perf_counter() - start


def test_criterion_6_oracle_equivalence():
    rows, seconds = random_suite()
    checks = sum(len(outcome) for _, outcome in rows)
    mismatches = [(inst.seed, m) for inst, outcome in rows for m, (a, b) in outcome.items() if a.valid != b.valid]
    modes_seen = {m for _, outcome in rows for m in outcome}
    ok = len(rows) >= 500 and not mismatches and modes_seen == set(Mode) and seconds < 60
    verdict(
        6, ok,
        f"{len(rows)} instances, {checks} (instance, mode) checks, {len(mismatches)} disagreements, {seconds:.1f} s (< 60)",
    )


def test_criterion_7_lattice():
    rows, _ = random_suite()
    bad = []
    for inst, outcome in rows:
        valid = {m: fast.valid for m, (fast, _) in outcome.items()}
        if valid[Mode.BRAVE_TOTAL] and not valid[Mode.BRAVE_PARTIAL]:
            bad.append((inst.seed, "BT=>BP"))
        if valid[Mode.CAUTIOUS_PARTIAL] and not valid[Mode.BRAVE_PARTIAL]:
            bad.append((inst.seed, "CP=>BP"))
        if valid[Mode.CAUTIOUS_TOTAL] and not valid[Mode.BRAVE_TOTAL]:
            bad.append((inst.seed, "CT=>BT"))
        if not is_recursive(inst.doc) and len(set(valid.values())) != 1:
            bad.append((inst.seed, "non-recursive agreement"))
    nonrec = sum(not is_recursive(inst.doc) for inst, _ in rows)
    verdict(7, not bad, f"{len(rows)} instances ({nonrec} non-recursive), {len(bad)} counterexamples {bad[:3]}")


# ---------------------------------------------------------------------------
# 8: monotonicity


def _foreign_triple(rng: random.Random, g: Graph, d: Document) -> Triple:
    pool = sorted_terms(node_universe(g, d)) + [ex("fresh1"), BlankNode("fresh2")]
    return Triple(rng.choice(pool), gen.FOREIGN, rng.choice(pool))


def test_criterion_8_monotonicity():
    """Adding a triple with a foreign predicate preserves validity.

    The property is checked for the standard semantics, both partial
    extended semantics on every instance, and the total semantics on
    non-recursive instances. On recursive documents the total semantics are
    not monotone: a fresh node may admit no total consistent value. That
    case is counted and reported separately.
    """
    rng = random.Random(8)
    valid_instances = 0
    checks = 0
    counterexamples = []
    total_recursive_breaks = 0
    for inst in gen.instances(700, start=20_000):
        g, d = inst.graph, inst.doc
        if has_closed(d):
            continue
        recursive = is_recursive(d)
        modes = [m for m in Mode if not (m is Mode.STANDARD and recursive)]
        results = {m: validate(g, d, m).valid for m in modes}
        if not any(results.values()):
            continue
        valid_instances += 1
        for _ in range(3):
            t = _foreign_triple(rng, g, d)
            assert monotone_extension_check(g, d, t)
            bigger = g.add(t)
            for m, was_valid in results.items():
                if not was_valid:
                    continue
                still = validate(bigger, d, m).valid
                if m.total and recursive:
                    total_recursive_breaks += not still
                    continue
                checks += 1
                if not still:
                    counterexamples.append((inst.seed, m.value, str(t)))
    ok = valid_instances >= 200 and not counterexamples
    verdict(
        8, ok,
        f"{valid_instances} valid instances, {checks} extension checks, {len(counterexamples)} counterexamples "
        f"(out of scope: {total_recursive_breaks} total-mode breaks on recursive documents)",
    )


# ---------------------------------------------------------------------------
# 9: SCL correspondence


def test_criterion_9_scl_correspondence():
    instances = 0
    assignments = 0
    disagreements = []
    for inst in gen.instances(250, start=40_000):
        g, d = inst.graph, inst.doc
        sentence = translate(d)
        pairs = [(n, s.name) for n in sorted_terms(node_universe(g, d)) for s in d]
        instances += 1
        for combo in itertools.product((False, True), repeat=len(pairs)):
            sigma = Assignment(dict(zip(pairs, combo)))
            assignments += 1
            if is_faithful(g, sigma, d) != scl_eval.induced(g, sigma, d).satisfies(sentence):
                disagreements.append(inst.seed)
    ok = instances >= 200 and not disagreements
    verdict(9, ok, f"{instances} instances, {assignments} total assignments, {len(disagreements)} disagreements")


# ---------------------------------------------------------------------------
# 10: witness soundness


def test_criterion_10_witness_soundness():
    rows, _ = random_suite()
    witnesses = 0
    failures = []
    for inst, outcome in rows:
        for mode, (fast, slow) in outcome.items():
            if mode.cautious:
                continue
            for result in (fast, slow):
                if not result.valid:
                    continue
                witnesses += 1
                sigma = result.witness
                if sigma is None or not is_faithful(inst.graph, sigma, inst.doc):
                    failures.append((inst.seed, mode.value))
                elif mode.total and not is_total(sigma, inst.graph, inst.doc):
                    failures.append((inst.seed, mode.value, "partial"))
    for data, shapes, mode in [
        ("vegdish_data.ttl", "vegdish_shapes.ttl", Mode.BRAVE_PARTIAL),
        ("vegdish_data.ttl", "vegdish_shapes.ttl", Mode.BRAVE_TOTAL),
        ("chain_data.ttl", "inconsistent_shapes.ttl", Mode.BRAVE_PARTIAL),
    ]:
        g = load_graph(FIXTURES / data)[0]
        d = read_document(load_graph(FIXTURES / shapes)[0])
        result = validate(g, d, mode)
        witnesses += 1
        if not (result.valid and is_faithful(g, result.witness, d)):
            failures.append((data, shapes, mode.value))
    verdict(10, not failures, f"{witnesses} witnesses re-checked, {len(failures)} failures")
