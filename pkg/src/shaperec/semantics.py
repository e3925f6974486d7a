"""Validity under the standard semantics and the four recursive extensions.

``validate`` searches only over (node, shape) pairs whose shape lies on a
reference cycle. Every other pair is functionally determined by those
guesses, so the search is exhaustive over assignments that satisfy the
constraint condition. ``brute_force_validate`` enumerates every assignment
over every pair and applies the definitions literally; it is the oracle the
search is tested against.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import OracleBudgetExceeded, RecursionNotAllowed, SearchBudgetExceeded
from .evaluation import (
    Assignment,
    TruthValue,
    check_condition1,
    eval_constraint,
    node_universe,
    shape_targets,
)
from .rdf import RDF_TYPE, Graph, Term, Triple, sorted_terms, term_key
from .shapes import (
    ClassTarget,
    Closed,
    Document,
    ShapeName,
    cyclic_shapes,
    dependency_graph,
    is_recursive,
    iter_constraint,
    strongly_connected_components,
)

T, F, U = TruthValue.TRUE, TruthValue.FALSE, TruthValue.UNDEFINED

DEFAULT_MAX_PAIRS = 24
DEFAULT_ORACLE_PAIRS = 16


class Mode(enum.Enum):
    STANDARD = "standard"
    BRAVE_PARTIAL = "brave-partial"
    BRAVE_TOTAL = "brave-total"
    CAUTIOUS_PARTIAL = "cautious-partial"
    CAUTIOUS_TOTAL = "cautious-total"

    @property
    def total(self) -> bool:
        return self in (Mode.BRAVE_TOTAL, Mode.CAUTIOUS_TOTAL)

    @property
    def cautious(self) -> bool:
        return self in (Mode.CAUTIOUS_PARTIAL, Mode.CAUTIOUS_TOTAL)

    @property
    def values(self) -> tuple[TruthValue, ...]:
        """Guess values in enumeration order."""
        return (F, T) if self.total else (U, F, T)


EXTENDED_MODES = (Mode.BRAVE_PARTIAL, Mode.BRAVE_TOTAL, Mode.CAUTIOUS_PARTIAL, Mode.CAUTIOUS_TOTAL)


@dataclass(frozen=True)
class Violation:
    focus: Term
    shape: ShapeName
    detail: str


@dataclass
class Stats:
    nodes: int = 0
    shapes: int = 0
    guessable_pairs: int = 0
    assignments_tried: int = 0
    elapsed_ms: float = 0.0
    oracle: bool = False


@dataclass
class ValidationResult:
    valid: bool
    mode: Mode
    witness: Assignment | None = None
    violations: list[Violation] = field(default_factory=list)
    stats: Stats = field(default_factory=Stats)

    def violation_pairs(self) -> set[tuple[Term, ShapeName]]:
        return {(v.focus, v.shape) for v in self.violations}


def assignment_digest(sigma: Assignment) -> str:
    rows = sorted(f"{n}\t{s}\t{v.name}" for (n, s), v in sigma.items())
    return hashlib.sha1("\n".join(rows).encode()).hexdigest()[:12]


def _target_pairs(g: Graph, d: Document) -> set[tuple[Term, ShapeName]]:
    return {(n, s.name) for s in d for n in shape_targets(g, s.targets)}


def _key(pair: tuple[Term, ShapeName]) -> tuple:
    return (term_key(pair[0]), term_key(pair[1]))


def _sort_pairs(pairs) -> list[tuple[Term, ShapeName]]:
    return sorted(pairs, key=_key)


def _evaluation_order(d: Document) -> list[ShapeName]:
    """Shape names with every dependency before its dependents."""
    comps = strongly_connected_components(d.names, dependency_graph(d))
    return [s for comp in comps for s in comp]


# ---------------------------------------------------------------------------
# Standard (non-recursive) validation


def validate_standard(g: Graph, d: Document) -> ValidationResult:
    """Compute the unique condition-1 assignment leaves-first, then check targets."""
    start = time.perf_counter()
    if is_recursive(d):
        raise RecursionNotAllowed("standard semantics is undefined for recursive documents")
    universe = node_universe(g, d)
    signs: dict = {}
    sigma = Assignment._trusted(signs)
    for name in _evaluation_order(d):
        c = d[name].constraint
        for n in universe:
            signs[(n, name)] = eval_constraint(g, sigma, c, n)
    violations = [
        Violation(n, s, "focus node does not conform to the shape")
        for n, s in _sort_pairs(_target_pairs(g, d))
        if signs.get((n, s)) is not T
    ]
    valid = not violations
    stats = Stats(len(universe), len(d), 0, 1, (time.perf_counter() - start) * 1000)
    return ValidationResult(valid, Mode.STANDARD, sigma if valid else None, violations, stats)


# ---------------------------------------------------------------------------
# Guess-and-check search


class _Search:
    def __init__(self, g: Graph, d: Document, mode: Mode, max_pairs: int):
        self.g = g
        self.d = d
        self.mode = mode
        self.universe = sorted_terms(node_universe(g, d))
        cyclic = cyclic_shapes(d)
        order = _evaluation_order(d)
        self.derived = [(s, d[s].constraint) for s in order if s not in cyclic]
        self.guess_pairs = [(n, s) for n in self.universe for s in d.names if s in cyclic]
        self.guess_constraints = [d[s].constraint for _, s in self.guess_pairs]
        if len(self.guess_pairs) > max_pairs:
            raise SearchBudgetExceeded(len(self.guess_pairs), max_pairs)
        self.targets = _sort_pairs(_target_pairs(g, d))
        self.tried = 0

    def materialize(self, guesses: dict) -> Assignment:
        signs = dict(guesses)
        sigma = Assignment._trusted(signs)
        g = self.g
        for name, c in self.derived:
            for n in self.universe:
                v = eval_constraint(g, sigma, c, n)
                if v is not U:
                    signs[(n, name)] = v
        return sigma

    def consistent(self, sigma: Assignment, guesses: dict, upto: int) -> bool:
        """No assigned guess contradicts a value already forced by the others.

        Unassigned guesses read as Undefined; by Kleene monotonicity a
        definite result cannot change once they are filled in.
        """
        g = self.g
        for i in range(upto):
            n, s = self.guess_pairs[i]
            r = eval_constraint(g, sigma, self.guess_constraints[i], n)
            if r is U and upto < len(self.guess_pairs):
                continue
            if r is not guesses.get((n, s), U):
                return False
        return True

    def leaves(self):
        """Condition-1-consistent assignments in enumeration order."""
        values = self.mode.values
        k = len(self.guess_pairs)
        guesses: dict = {}

        def dfs(i: int):
            if i == k:
                self.tried += 1
                sigma = self.materialize(guesses)
                if self.consistent(sigma, guesses, k):
                    yield sigma
                return
            pair = self.guess_pairs[i]
            for v in values:
                if v is U:
                    guesses.pop(pair, None)
                else:
                    guesses[pair] = v
                if i + 1 < k and not self.consistent(self.materialize(guesses), guesses, i + 1):
                    continue
                yield from dfs(i + 1)
            guesses.pop(pair, None)

        yield from dfs(0)


def _decide(mode: Mode, targets, candidates, stats: Stats, blame=()) -> ValidationResult:
    """Apply a mode's definition to a stream of condition-1 assignments.

    ``blame`` lists the pairs reported when the stream is empty and there
    are no targets to report instead.
    """
    witness: Assignment | None = None
    ever_positive: set = set()
    seen_any = False
    for sigma in candidates:
        seen_any = True
        failing = [p for p in targets if not sigma.positive(*p)]
        ever_positive.update(p for p in targets if sigma.positive(*p))
        if not failing:
            if witness is None:
                witness = sigma
            if not mode.cautious:
                return ValidationResult(True, mode, witness, [], stats)
        elif mode.cautious:
            digest = assignment_digest(sigma)
            violations = [
                Violation(n, s, f"does not conform in condition-1 assignment {digest}")
                for n, s in failing
            ]
            return ValidationResult(False, mode, None, violations, stats)
    if witness is not None:
        return ValidationResult(True, mode, witness, [], stats)
    if not seen_any:
        detail = "no assignment satisfies the shape constraints" + (" with total values" if mode.total else "")
    else:
        detail = "does not conform in any assignment satisfying the shape constraints"
    violations = [Violation(n, s, detail) for n, s in targets if (n, s) not in ever_positive]
    if not targets:
        violations = [Violation(n, s, detail) for n, s in blame]
    elif not violations:
        # targets conform in some assignment each, but never all together
        violations = [Violation(n, s, "targets cannot all conform in a single assignment") for n, s in targets]
    return ValidationResult(False, mode, None, violations, stats)


def validate(g: Graph, d: Document, mode: Mode | str, *, max_pairs: int = DEFAULT_MAX_PAIRS) -> ValidationResult:
    """Decide whether ``g`` is valid against ``d`` under ``mode``."""
    mode = Mode(mode)
    if mode is Mode.STANDARD:
        return validate_standard(g, d)
    start = time.perf_counter()
    search = _Search(g, d, mode, max_pairs)
    stats = Stats(len(search.universe), len(d), len(search.guess_pairs))
    result = _decide(mode, search.targets, search.leaves(), stats, search.guess_pairs)
    stats.assignments_tried = search.tried
    stats.elapsed_ms = (time.perf_counter() - start) * 1000
    return result


# ---------------------------------------------------------------------------
# Brute-force oracle


@dataclass(frozen=True)
class Census:
    """Every assignment that satisfies condition 1, found by full enumeration."""

    pairs: tuple
    consistent: tuple  # of (Assignment, is_total)
    tried: int


@lru_cache(maxsize=256)
def _census(g: Graph, d: Document, total_only: bool) -> Census:
    universe = sorted_terms(node_universe(g, d))
    pairs = tuple((n, s.name) for n in universe for s in d)
    values = (F, T) if total_only else (U, F, T)
    found = []
    tried = 0
    for combo in itertools.product(values, repeat=len(pairs)):
        tried += 1
        sigma = Assignment._trusted({p: v for p, v in zip(pairs, combo) if v is not U})
        if check_condition1(g, sigma, d):
            found.append((sigma, U not in combo))
    return Census(pairs, tuple(found), tried)


def census(g: Graph, d: Document, *, max_pairs: int = DEFAULT_ORACLE_PAIRS, total_only: bool = False) -> Census:
    k = len(node_universe(g, d)) * len(d)
    if k > max_pairs:
        raise OracleBudgetExceeded(k, max_pairs)
    return _census(g, d, total_only)


def clear_oracle_cache() -> None:
    _census.cache_clear()


def brute_force_validate(
    g: Graph, d: Document, mode: Mode | str, *, max_pairs: int = DEFAULT_ORACLE_PAIRS
) -> ValidationResult:
    """Same contract as :func:`validate`, by enumerating all 3^k (or 2^k) assignments."""
    mode = Mode(mode)
    if mode is Mode.STANDARD and is_recursive(d):
        raise RecursionNotAllowed("standard semantics is undefined for recursive documents")
    start = time.perf_counter()
    cen = census(g, d, max_pairs=max_pairs, total_only=mode.total)
    candidates = (sigma for sigma, total in cen.consistent if total or not mode.total)
    stats = Stats(len(node_universe(g, d)), len(d), len(cen.pairs), cen.tried, oracle=True)
    # the standard definition: some faithful (possibly partial) assignment exists
    decide_mode = Mode.BRAVE_PARTIAL if mode is Mode.STANDARD else mode
    result = _decide(decide_mode, _sort_pairs(_target_pairs(g, d)), candidates, stats, cen.pairs)
    result.mode = mode
    stats.elapsed_ms = (time.perf_counter() - start) * 1000
    return result


# ---------------------------------------------------------------------------


def occurring_predicates(d: Document) -> set[Term]:
    terms = d.terms()
    if any(isinstance(t, ClassTarget) for s in d for t in s.targets):
        terms.add(RDF_TYPE)
    return terms


def has_closed(d: Document) -> bool:
    return any(isinstance(c, Closed) for s in d for c in iter_constraint(s.constraint))


def monotone_extension_check(g: Graph, d: Document, t: Triple) -> bool:
    """Whether adding ``t`` is guaranteed not to break validity.

    Holds when the predicate of ``t`` is foreign to ``d`` and ``d`` has no
    closed constraint. ``rdf:type`` counts as occurring whenever a class
    target is present.
    """
    return t.predicate not in occurring_predicates(d) and not has_closed(d)
