"""Relevant decision pairs, cost minimization and the optimum-vs-exposure sweep.

A decision pair is kept only if no other pair, nor any convex combination
of pairs, costs weakly less for both players while losing weakly less
often. Eliminated pairs carry a certificate that can be re-checked
independently of the solver that found it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import EmptyFeasibleSetError, ValidationError
from .lp import maximize
from .model import Cell, TransactionType, argmin_cells, check_exposure, total_cost
from .numeric import Number, close, div, leq, lt, tol

DUPLICATE = "duplicate-cost-higher-loss"
DOMINATED = "pareto-dominated"
ABOVE_HULL = "above-convex-hull"


@dataclass(frozen=True)
class DecisionPoint:
    i: int
    j: int
    z1: Number
    z2: Number
    pl: Number

    @property
    def cell(self) -> Cell:
        return (self.i, self.j)

    @property
    def coords(self) -> tuple[Number, Number, Number]:
        return (self.z1, self.z2, self.pl)


@dataclass(frozen=True)
class Elimination:
    """``certificate`` is the dominating point, or a mapping cell -> weight."""

    point: DecisionPoint
    reason: str
    certificate: Union[DecisionPoint, dict]


@dataclass(frozen=True)
class RelevantSet:
    kept: tuple[DecisionPoint, ...]
    eliminated: tuple[Elimination, ...]

    @property
    def kept_cells(self) -> list[Cell]:
        return [p.cell for p in self.kept]


def decision_points(t: TransactionType) -> list[DecisionPoint]:
    return [
        DecisionPoint(i, j, t.player1.costs[i], t.player2.costs[j], t.loss[(i, j)])
        for i, j in t.cells()
    ]


def _weakly_better(q: DecisionPoint, p: DecisionPoint) -> tuple[bool, bool]:
    """(all coords of q <= p, at least one strictly less)."""
    weak = all(leq(a, b) for a, b in zip(q.coords, p.coords))
    strict = any(lt(a, b) for a, b in zip(q.coords, p.coords))
    return weak, strict


def dominance_filter(points: Sequence[DecisionPoint]) -> tuple[list[DecisionPoint], list[Elimination]]:
    """Drop points beaten coordinate-wise by another point.

    Exact duplicates keep the first in (i, j) order.
    """
    ordered = sorted(points, key=lambda p: p.cell)
    kept, gone = [], []
    for idx, p in enumerate(ordered):
        witness = None
        for jdx, q in enumerate(ordered):
            if jdx == idx:
                continue
            weak, strict = _weakly_better(q, p)
            if weak and (strict or jdx < idx):
                witness = q
                break
        if witness is None:
            kept.append(p)
            continue
        same_cost = close(witness.z1, p.z1) and close(witness.z2, p.z2)
        gone.append(Elimination(p, DUPLICATE if same_cost else DOMINATED, witness))
    return kept, gone


def hull_weights(p: DecisionPoint, others: Sequence[DecisionPoint]) -> Optional[dict]:
    """Convex weights over ``others`` beating ``p``, or None when none exist.

    Over weights ``w >= 0, sum(w) == 1`` with ``sum(w*z1) + s1 == z1(p)``
    (likewise for z2 and loss) and slack ``s >= 0``, first maximize the loss
    slack ``s3``; if that is zero, maximize ``s1 + s2``. A positive optimum
    means some combination is at least as good everywhere and strictly
    better somewhere. Preferring loss reduction makes the certificate the
    combination that cuts loss most without costing more.
    """
    if not others:
        return None
    k = len(others)
    rows = []
    for axis in range(3):
        rows.append([q.coords[axis] for q in others] + [1 if a == axis else 0 for a in range(3)])
    rows.append([1] * k + [0, 0, 0])
    rhs = [p.z1, p.z2, p.pl, 1]
    eps = tol(*rhs, *(v for q in others for v in q.coords))
    for c in ([0] * k + [0, 0, 1], [0] * k + [1, 1, 0]):
        res = maximize(c, rows, rhs)
        if res.status != "optimal":
            return None
        if res.value > eps:
            return {q.cell: w for q, w in zip(others, res.x[:k]) if w != 0}
    return None


def hull_relevance(points: Sequence[DecisionPoint]) -> tuple[list[DecisionPoint], list[Elimination]]:
    """Drop points lying above the lower convex hull of the others."""
    ordered = sorted(points, key=lambda p: p.cell)
    kept, gone = [], []
    for p in ordered:
        others = [q for q in ordered if q is not p]
        weights = hull_weights(p, others)
        if weights is None:
            kept.append(p)
        else:
            gone.append(Elimination(p, ABOVE_HULL, weights))
    return kept, gone


def relevant_set(t: TransactionType) -> RelevantSet:
    points = decision_points(t)
    if not points:
        raise EmptyFeasibleSetError("feasible set empty")
    survivors, dominated = dominance_filter(points)
    kept, above = hull_relevance(survivors)
    return RelevantSet(tuple(kept), tuple(dominated + above))


def verify_certificate(elim: Elimination, points: Sequence[DecisionPoint]) -> bool:
    """Re-check an elimination against the raw point list."""
    p = elim.point
    if isinstance(elim.certificate, DecisionPoint):
        q = elim.certificate
        if q.cell == p.cell:
            return False
        weak, strict = _weakly_better(q, p)
        return weak and (strict or q.cell < p.cell)
    by_cell = {q.cell: q for q in points}
    w = elim.certificate
    if p.cell in w or any(v < 0 for v in w.values()) or not close(sum(w.values()), 1):
        return False
    combo = [sum(wt * by_cell[c].coords[a] for c, wt in w.items()) for a in range(3)]
    weak = all(leq(a, b) for a, b in zip(combo, p.coords))
    strict = any(lt(a, b) for a, b in zip(combo, p.coords))
    return weak and strict


@dataclass(frozen=True)
class OptimumReport:
    value: Number
    argmin: tuple[Cell, ...]
    exposure: Number


def minimize_cost(t: TransactionType, e: Number) -> OptimumReport:
    """Exhaustive minimum of total cost; ties are all reported."""
    check_exposure(e)
    if not t.feasible:
        raise EmptyFeasibleSetError("feasible set empty")
    value, cells = argmin_cells((c, total_cost(t, e, *c).total) for c in t.cells())
    return OptimumReport(value, tuple(cells), e)


@dataclass(frozen=True)
class Segment:
    e_lo: Number
    e_hi: Number
    argmin: tuple[Cell, ...]
    intercept: Number
    slope: Number

    def value(self, e: Number) -> Number:
        return self.intercept + self.slope * e


@dataclass(frozen=True)
class Breakpoint:
    exposure: Number
    argmin: tuple[Cell, ...]


@dataclass(frozen=True)
class ExposureSweep:
    segments: tuple[Segment, ...]
    breakpoints: tuple[Breakpoint, ...]

    def value(self, e: Number) -> Number:
        for seg in self.segments:
            if leq(seg.e_lo, e) and leq(e, seg.e_hi):
                return seg.value(e)
        raise ValueError(f"exposure {e!r} outside the swept range")


def exposure_sweep(t: TransactionType, e_min: Number, e_max: Number) -> ExposureSweep:
    """Exact lower envelope of the lines ``(z1 + z2) + Pl * e`` on [e_min, e_max].

    Each segment's argmin holds the cells optimal on its interior;
    breakpoints carry every cell tied at the boundary.
    """
    if not (e_min > 0 and e_min < e_max):
        raise ValidationError(f"invalid exposure range [{e_min!r}, {e_max!r}]")
    if not t.feasible:
        raise EmptyFeasibleSetError("feasible set empty")
    lines = {c: (t.player1.costs[c[0]] + t.player2.costs[c[1]], t.loss[c]) for c in t.cells()}

    def at(e):
        return argmin_cells((c, a + b * e) for c, (a, b) in lines.items())

    def pick(cells):
        # Among lines tied at the current exposure, the flattest one continues to the right.
        slope = min(lines[c][1] for c in cells)
        lead = min(c for c in cells if close(lines[c][1], slope))
        a, b = lines[lead]
        group = tuple(c for c in t.cells() if close(lines[c][0], a) and close(lines[c][1], b))
        return a, b, group

    segments, breaks = [], []
    cur = e_min
    a, b, group = pick(at(cur)[1])
    while True:
        nxt = None
        for c, (ak, bk) in lines.items():
            if lt(bk, b):
                cross = div(ak - a, b - bk)
                if lt(cur, cross) and (nxt is None or cross < nxt):
                    nxt = cross
        if nxt is None or not lt(nxt, e_max):
            segments.append(Segment(cur, e_max, group, a, b))
            break
        segments.append(Segment(cur, nxt, group, a, b))
        tied = at(nxt)[1]
        breaks.append(Breakpoint(nxt, tuple(tied)))
        cur = nxt
        a, b, group = pick(tied)
    return ExposureSweep(tuple(segments), tuple(breaks))


SURFACE_COLUMNS = ("i", "j", "z1", "z2", "pl", "tc", "relevant")


def surface_export(t: TransactionType, e: Number) -> list[dict]:
    """One row per feasible pair, in row-major order, for external plotting."""
    check_exposure(e)
    kept = set(relevant_set(t).kept_cells)
    rows = []
    for p in decision_points(t):
        rows.append(
            {
                "i": p.i,
                "j": p.j,
                "z1": p.z1,
                "z2": p.z2,
                "pl": p.pl,
                "tc": total_cost(t, e, p.i, p.j).total,
                "relevant": int(p.cell in kept),
            }
        )
    return rows
