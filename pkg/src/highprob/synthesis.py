"""Exact linear-programming feasibility and its applications.

A small two-phase simplex over ``Fraction`` decides feasibility of
rational constraint systems with strict inequalities: every strict
constraint shares one slack variable which the objective maximizes, so the
system is strictly feasible exactly when the optimum slack is positive.
On top of the solver sit agreeing-measure synthesis for neighborhood
models and realizability checking for comparative-probability relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .core import (
    EventSet,
    NeighborhoodModel,
    ProbabilityModel,
    make_probability_model,
)
from .errors import UniverseTooLarge
from .formula import Threshold
from .neighborhood import (
    PropertyReport,
    Verdict,
    maximal_nonneighborhoods,
)

_RELATIONS = (">=", ">", "=")


@dataclass(frozen=True)
class LinearConstraint:
    """sum(coefficients) rel bound, with rel one of >=, >, =.

    <= and < inputs are normalized by negation at construction.
    """

    coefficients: tuple[tuple[str, Fraction], ...]
    relation: str
    bound: Fraction

    def __init__(self, coefficients: Mapping[str, object], relation: str,
                 bound):
        coeffs = {v: Fraction(q) for v, q in coefficients.items()
                  if Fraction(q) != 0}
        bound = Fraction(bound)
        if relation in ("<=", "<"):
            coeffs = {v: -q for v, q in coeffs.items()}
            bound = -bound
            relation = ">=" if relation == "<=" else ">"
        if relation not in _RELATIONS:
            raise ValueError(f"unknown relation {relation!r}")
        object.__setattr__(self, "coefficients",
                           tuple(sorted(coeffs.items())))
        object.__setattr__(self, "relation", relation)
        object.__setattr__(self, "bound", bound)

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        return sum((q * assignment.get(v, Fraction(0))
                    for v, q in self.coefficients), Fraction(0))

    def satisfied_by(self, assignment: Mapping[str, Fraction]) -> bool:
        lhs = self.evaluate(assignment)
        if self.relation == ">=":
            return lhs >= self.bound
        if self.relation == ">":
            return lhs > self.bound
        return lhs == self.bound


def dump_constraints(constraints: Iterable[LinearConstraint]) -> str:
    """One constraint per line: `coeff*var ... rel bound`, rationals as p/q."""
    lines = []
    for con in constraints:
        parts = [f"{q}*{v}" for v, q in con.coefficients]
        lines.append(f"{' '.join(parts) or '0'} {con.relation} {con.bound}")
    return "\n".join(lines)


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    assignment: tuple[tuple[str, Fraction], ...] | None = None
    slack: Fraction | None = None

    def value(self, var: str) -> Fraction:
        return dict(self.assignment)[var]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.assignment or ())


INFEASIBLE = LPResult(False)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _pivot(rows, rhs, basis, r, c):
    inv = _ONE / rows[r][c]
    rows[r] = [a * inv for a in rows[r]]
    rhs[r] *= inv
    for i in range(len(rows)):
        if i != r and rows[i][c] != 0:
            f = rows[i][c]
            rows[i] = [a - f * p for a, p in zip(rows[i], rows[r])]
            rhs[i] -= f * rhs[r]
    basis[r] = c


def _simplex(rows, rhs, basis, objective, allowed):
    """Maximize objective over {y >= 0, rows*y = rhs} from a feasible basis.

    Bland's rule throughout: smallest eligible entering index, ties in the
    ratio test broken by smallest basic variable index.  Terminates.
    """
    m = len(rows)
    while True:
        enter = None
        for j in allowed:
            reduced = objective[j] - sum(
                objective[basis[i]] * rows[i][j] for i in range(m))
            if reduced > 0:
                enter = j
                break
        if enter is None:
            return True
        leave = None
        best = None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rhs[i] / rows[i][enter]
                if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return False  # unbounded
        _pivot(rows, rhs, basis, leave, enter)


def lp_feasible(constraints: Iterable[LinearConstraint],
                positivity: Iterable[str] = ()) -> LPResult:
    """Decide strict-rational feasibility.

    Strict constraints (and strict positivity of the listed variables)
    are tightened by a shared slack, the slack is maximized subject to a
    cap of 1, and the system is feasible exactly when the optimum is
    positive.  Returned assignments are re-verified against every input
    constraint before being reported.
    """
    constraints = list(constraints)
    positivity = list(dict.fromkeys(positivity))
    variables = sorted({v for con in constraints
                        for v, _ in con.coefficients} | set(positivity))

    # columns: u_x, v_x per variable (x = u - v), then eps, then slacks
    ncols = 0
    upos, uneg = {}, {}
    for x in variables:
        upos[x] = ncols
        uneg[x] = ncols + 1
        ncols += 2
    eps = ncols
    ncols += 1

    raw_rows = []  # (coeff list over current ncols, relation, bound)
    for con in constraints:
        row = [_ZERO] * ncols
        for v, q in con.coefficients:
            row[upos[v]] += q
            row[uneg[v]] -= q
        if con.relation == ">":
            row[eps] -= _ONE
        raw_rows.append((row, con.relation, con.bound))
    for v in positivity:
        row = [_ZERO] * ncols
        row[upos[v]] += _ONE
        row[uneg[v]] -= _ONE
        row[eps] -= _ONE
        raw_rows.append((row, ">", _ZERO))
    cap = [_ZERO] * ncols
    cap[eps] = -_ONE
    raw_rows.append((cap, ">=", -_ONE))  # eps <= 1 keeps phase 2 bounded

    # slack columns for the inequalities
    n_ineq = sum(1 for _, rel, _ in raw_rows if rel != "=")
    total = ncols + n_ineq
    rows, rhs = [], []
    si = ncols
    for row, rel, bound in raw_rows:
        full = row + [_ZERO] * n_ineq
        if rel != "=":
            full[si] = -_ONE
            si += 1
        b = Fraction(bound)
        if b < 0:
            full = [-a for a in full]
            b = -b
        rows.append(full)
        rhs.append(b)

    # phase 1: artificial variables, drive their sum to zero
    m = len(rows)
    art0 = total
    for i in range(m):
        rows[i] = rows[i] + [_ONE if j == i else _ZERO for j in range(m)]
    basis = [art0 + i for i in range(m)]
    obj1 = [_ZERO] * total + [-_ONE] * m
    allowed = range(total + m)
    _simplex(rows, rhs, basis, obj1, allowed)
    if any(rhs[i] != 0 for i in range(m) if basis[i] >= art0):
        return INFEASIBLE

    # pivot remaining zero-level artificials out of the basis
    for i in range(m):
        if basis[i] >= art0:
            c = next((j for j in range(total) if rows[i][j] != 0), None)
            if c is not None:
                _pivot(rows, rhs, basis, i, c)
    keep = [i for i in range(m) if basis[i] < art0]
    rows = [rows[i][:total] for i in keep]
    rhs = [rhs[i] for i in keep]
    basis = [basis[i] for i in keep]

    # phase 2: maximize the shared slack
    obj2 = [_ZERO] * total
    obj2[eps] = _ONE
    if not _simplex(rows, rhs, basis, obj2, range(total)):
        raise RuntimeError("slack maximization unbounded despite cap")

    values = [_ZERO] * total
    for i, bi in enumerate(basis):
        values[bi] = rhs[i]
    slack = values[eps]
    if slack <= 0:
        return INFEASIBLE
    assignment = {x: values[upos[x]] - values[uneg[x]] for x in variables}
    for con in constraints:
        if not con.satisfied_by(assignment):
            raise RuntimeError(f"solver returned a bad assignment for {con}")
    for v in positivity:
        if assignment[v] <= 0:
            raise RuntimeError("solver violated strict positivity")
    return LPResult(True, tuple(sorted(assignment.items())), slack)


# ---------------------------------------------------------------------------
# Agreeing-measure synthesis


@dataclass(frozen=True)
class SynthesisResult:
    feasible: bool
    model: ProbabilityModel | None = None
    failed_cell: int | None = None


def agreement_constraints(model: NeighborhoodModel, cell_index: int,
                          c: Threshold) -> tuple[list[LinearConstraint],
                                                 list[str]]:
    """The per-cell system: weights sum to one, each minimal neighborhood
    exceeds c, each maximal non-neighborhood stays at or below c.

    The non-strict caps are exactly what forces non-neighborhoods below
    the threshold: every non-neighborhood lies under a maximal one, and
    every neighborhood contains a minimal generator, so the two antichains
    carry the whole biconditional.
    """
    frame = model.frame
    cell = frame.partition[cell_index]
    names = {v: f"p_{frame.worlds[v]}" for v in cell.indices()}
    cons = [LinearConstraint({nm: 1 for nm in names.values()}, "=", 1)]
    for g in model.generators[cell_index]:
        cons.append(LinearConstraint(
            {names[v]: 1 for v in g.indices()}, ">", c.value))
    for x in maximal_nonneighborhoods(cell, model.generators[cell_index]):
        if not x.is_empty():
            cons.append(LinearConstraint(
                {names[v]: 1 for v in x.indices()}, "<=", c.value))
    return cons, list(names.values())


def synthesize_measure(model: NeighborhoodModel, c: Threshold
                       ) -> SynthesisResult:
    """Find a full-support measure agreeing with the neighborhood system
    at threshold c, or report that none exists.

    Cells are independent, so each is solved separately and the global
    measure weights the cells uniformly; conditional probabilities, and
    hence agreement, do not depend on the cell weighting.
    """
    frame = model.frame
    k = len(frame.partition)
    weights: dict[str, Fraction] = {}
    for ci, cell in enumerate(frame.partition):
        cons, variables = agreement_constraints(model, ci, c)
        result = lp_feasible(cons, positivity=variables)
        if not result.feasible:
            return SynthesisResult(False, failed_cell=ci)
        local = result.as_dict()
        for v in cell.indices():
            weights[frame.worlds[v]] = local[f"p_{frame.worlds[v]}"] / k
    return SynthesisResult(
        True, make_probability_model(frame, weights))


# ---------------------------------------------------------------------------
# Comparative probability

_COMP_RELS = ("<", "<=", "=")


@dataclass(frozen=True)
class ComparativeRelation:
    """Finitely many comparisons between events over a common universe."""

    worlds: tuple[str, ...]
    statements: tuple[tuple[EventSet, str, EventSet], ...]

    def __post_init__(self):
        n = len(self.worlds)
        for x, rel, y in self.statements:
            if rel not in _COMP_RELS:
                raise ValueError(f"unknown comparison {rel!r}")
            if x.universe_size != n or y.universe_size != n:
                raise ValueError("statement events outside the universe")


def realize_comparative(rel: ComparativeRelation,
                        full_support: bool = False) -> LPResult:
    """A probability measure realizing every statement, or Infeasible."""
    names = {i: f"p_{w}" for i, w in enumerate(rel.worlds)}
    cons = [LinearConstraint({nm: 1 for nm in names.values()}, "=", 1)]
    for nm in names.values():
        cons.append(LinearConstraint({nm: 1}, ">=", 0))
    for x, comparison, y in rel.statements:
        coeffs: dict[str, Fraction] = {}
        for i in y.indices():
            coeffs[names[i]] = coeffs.get(names[i], _ZERO) + 1
        for i in x.indices():
            coeffs[names[i]] = coeffs.get(names[i], _ZERO) - 1
        relation = {"<": ">", "<=": ">=", "=": "="}[comparison]
        cons.append(LinearConstraint(coeffs, relation, 0))
    positivity = list(names.values()) if full_support else []
    return lp_feasible(cons, positivity=positivity)


def check_definetti(leq: Callable[[EventSet, EventSet], bool],
                    universe_size: int) -> PropertyReport:
    """The five classical conditions on a comparative relation, given as a
    total weak order oracle leq(X, Y) over the powerset.

    1. the universe is not below the empty set; 2. the empty set is below
    everything; 3. totality; 4. transitivity; 5. adding or removing a
    common disjoint part does not change a comparison.
    """
    if universe_size > 5:
        raise UniverseTooLarge("condition table limited to 5 worlds")
    n = universe_size
    events = [EventSet(bits, n) for bits in range(1 << n)]
    full = EventSet.full(n)
    empty = EventSet.empty(n)

    nontrivial = Verdict.ok()
    if leq(full, empty):
        nontrivial = Verdict.fail((full, empty))

    minimal = Verdict.ok()
    for x in events:
        if not leq(empty, x):
            minimal = Verdict.fail((empty, x))
            break

    total_v = Verdict.ok()
    for x, y in itertools.combinations(events, 2):
        if not (leq(x, y) or leq(y, x)):
            total_v = Verdict.fail((x, y))
            break

    transitive = Verdict.ok()
    for x in events:
        for y in events:
            if not leq(x, y):
                continue
            for z in events:
                if leq(y, z) and not leq(x, z):
                    transitive = Verdict.fail((x, y, z))
                    break
            if not transitive.holds:
                break
        if not transitive.holds:
            break

    additive = Verdict.ok()
    for x in events:
        for y in events:
            rest = full.difference(x.union(y))
            for z in rest.subsets():
                if leq(x, y) != leq(x.union(z), y.union(z)):
                    additive = Verdict.fail((x, y, z))
                    break
            if not additive.holds:
                break
        if not additive.holds:
            break

    return PropertyReport((
        ("nontrivial", nontrivial),
        ("minimal-empty", minimal),
        ("total", total_v),
        ("transitive", transitive),
        ("additive", additive),
    ))


def measure_order(weights: Mapping[int, Fraction] | list[Fraction],
                  universe_size: int) -> Callable[[EventSet, EventSet], bool]:
    """The comparison induced by a measure: X below Y iff X weighs no more."""
    vec = [Fraction(weights[i]) for i in range(universe_size)]

    def leq(x: EventSet, y: EventSet) -> bool:
        return (sum((vec[i] for i in x.indices()), _ZERO)
                <= sum((vec[i] for i in y.indices()), _ZERO))

    return leq
