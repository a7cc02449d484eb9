from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from conftest import exposures, base_model, transaction_types
from transcost.efficiency import (
    ABOVE_HULL,
    DOMINATED,
    DUPLICATE,
    DecisionPoint,
    decision_points,
    dominance_filter,
    exposure_sweep,
    hull_relevance,
    minimize_cost,
    relevant_set,
    surface_export,
    verify_certificate,
)
from transcost.errors import ValidationError
from transcost.model import TransactionType, total_cost

F = Fraction


def pt(i, z1, z2, pl):
    return DecisionPoint(i, 0, F(z1), F(z2), F(pl))


def scipy_eliminates(p, others):
    """Independent DEA check: can a convex combination of ``others`` match
    ``p`` weakly in every coordinate and beat it somewhere?"""
    if not others:
        return False
    k = len(others)
    A = [[float(q.coords[a]) for q in others] + [1.0 if b == a else 0.0 for b in range(3)] for a in range(3)]
    A.append([1.0] * k + [0.0] * 3)
    b = [float(v) for v in p.coords] + [1.0]
    res = linprog([0.0] * k + [-1.0] * 3, A_eq=A, b_eq=b, bounds=[(0, None)] * (k + 3), method="highs")
    return res.status == 0 and -res.fun > 1e-7


def brute_dominated(p, points):
    return any(
        q.cell != p.cell
        and all(a <= b for a, b in zip(q.coords, p.coords))
        and (any(a < b for a, b in zip(q.coords, p.coords)) or q.cell < p.cell)
        for q in points
    )


# dominance

def test_base_model_nothing_dominated(t1):
    pts = decision_points(t1)
    assert not any(brute_dominated(p, pts) for p in pts)
    kept, gone = dominance_filter(pts)
    assert len(kept) == 9 and gone == []


def test_same_cost_higher_loss_is_duplicate():
    a, b = pt(0, 0, 0, "0.5"), pt(1, 0, 0, "0.4")
    kept, gone = dominance_filter([a, b])
    assert kept == [b]
    assert gone[0].point == a and gone[0].reason == DUPLICATE and gone[0].certificate == b


def test_costlier_same_loss_is_dominated():
    a, b = pt(0, 1, 1, "0.1"), pt(1, 2, 2, "0.1")
    kept, gone = dominance_filter([a, b])
    assert kept == [a] and gone[0].point == b and gone[0].reason == DOMINATED


def test_exact_duplicates_keep_first():
    a, b = pt(0, 1, 1, "0.1"), pt(1, 1, 1, "0.1")
    kept, gone = dominance_filter([b, a])
    assert kept == [a] and gone[0].point == b


# hull

def test_base_model_hull_keeps_all(t1):
    pts = decision_points(t1)
    kept, gone = hull_relevance(pts)
    assert len(kept) == 9 and gone == []
    assert not any(scipy_eliminates(p, [q for q in pts if q is not p]) for p in pts)


def test_base_model_hull_by_enumeration(t1):
    # On this grid 2- and 3-point mixtures suffice; scan a 1/20 weight lattice.
    pts = decision_points(t1)
    for p in pts:
        others = [q for q in pts if q is not p]
        for size in (2, 3):
            for combo in combinations(others, size):
                for w1 in range(21):
                    for w2 in range(21 - w1 if size == 3 else 1):
                        ws = [F(w1, 20), F(w2, 20)] if size == 3 else [F(w1, 20)]
                        ws.append(1 - sum(ws))
                        mix = [sum(w * q.coords[a] for w, q in zip(ws, combo)) for a in range(3)]
                        beats = all(x <= y for x, y in zip(mix, p.coords)) and any(x < y for x, y in zip(mix, p.coords))
                        assert not beats


def test_midpoint_combination_eliminates():
    a, b, c = pt(0, 0, 0, "0.9"), pt(1, 2, 0, "0.1"), pt(2, 1, 0, "0.6")
    kept, gone = hull_relevance([a, b, c])
    assert kept == [a, b]
    (elim,) = gone
    assert elim.point == c and elim.reason == ABOVE_HULL
    assert elim.certificate == {a.cell: F(1, 2), b.cell: F(1, 2)}
    assert verify_certificate(elim, [a, b, c])


def test_single_point_kept():
    t = TransactionType.from_matrix([3], [4], [[F(1, 2)]])
    rs = relevant_set(t)
    assert rs.kept_cells == [(0, 0)] and rs.eliminated == ()


def test_relevant_set_reports_duplicate():
    t = TransactionType.from_matrix([0, 0], [1], [[F(3, 10)], [F(2, 10)]])
    rs = relevant_set(t)
    assert rs.kept_cells == [(1, 0)]
    assert [(e.point.cell, e.reason) for e in rs.eliminated] == [((0, 0), DUPLICATE)]


def test_tampered_certificates_fail():
    a, b, c = pt(0, 0, 0, "0.9"), pt(1, 2, 0, "0.1"), pt(2, 1, 0, "0.6")
    (elim,) = hull_relevance([a, b, c])[1]
    bad = type(elim)(elim.point, elim.reason, {a.cell: F(1, 4), b.cell: F(3, 4)})
    assert not verify_certificate(bad, [a, b, c])
    selfref = type(elim)(elim.point, elim.reason, {c.cell: F(1)})
    assert not verify_certificate(selfref, [a, b, c])
    backwards = type(elim)(a, DOMINATED, b)
    assert not verify_certificate(backwards, [a, b, c])


def test_float_and_exact_agree(t1, t1_float):
    assert relevant_set(t1).kept_cells == relevant_set(t1_float).kept_cells


@settings(max_examples=150, deadline=None)
@given(transaction_types(max_n=5, max_m=5))
def test_frontier_soundness(t):
    rs = relevant_set(t)
    pts = decision_points(t)
    assert sorted(rs.kept_cells + [e.point.cell for e in rs.eliminated]) == t.cells()
    for e in rs.eliminated:
        assert verify_certificate(e, pts)
    survivors = [p for p in pts if not brute_dominated(p, pts)]
    for p in rs.kept:
        assert not brute_dominated(p, pts)
        assert not scipy_eliminates(p, [q for q in survivors if q.cell != p.cell])


@settings(max_examples=150, deadline=None)
@given(transaction_types(), st.lists(exposures(), min_size=5, max_size=5))
def test_optimum_preserved_by_frontier(t, es):
    kept = relevant_set(t).kept_cells
    for e in es:
        assert min(total_cost(t, e, *c).total for c in kept) == minimize_cost(t, e).value


@settings(max_examples=150, deadline=None)
@given(transaction_types(), st.fractions(min_value=F(1, 1000), max_value=1, max_denominator=1000))
def test_relevance_is_exposure_independent(t, s):
    scaled = TransactionType(t.player1, t.player2, {c: v * s for c, v in t.loss.items()})
    a, b = relevant_set(t), relevant_set(scaled)
    assert a.kept_cells == b.kept_cells
    assert [(e.point.cell, e.reason) for e in a.eliminated] == [(e.point.cell, e.reason) for e in b.eliminated]


# optimum

@pytest.mark.parametrize("e, value, cell", [(60, F("3.8"), (1, 1)), (1, F(1), (0, 0)), (120, F("5.2"), (2, 2))])
def test_optimum_base_model(t1, e, value, cell):
    opt = minimize_cost(t1, e)
    assert opt.value == value and opt.argmin == (cell,)


def test_optimum_float_mode(t1_float):
    opt = minimize_cost(t1_float, 60.0)
    assert opt.value == pytest.approx(3.8) and opt.argmin == ((1, 1),)


def test_optimum_reports_all_ties(t1):
    assert minimize_cost(t1, 50).argmin == ((0, 1), (1, 0), (1, 1))


def test_optimum_rejects_bad_exposure(t1):
    with pytest.raises(ValidationError):
        minimize_cost(t1, 0)


# sweep

def envelope_oracle(t, e_min, e_max):
    """Breakpoints from all pairwise line intersections where the envelope's
    argmin set changes."""
    lines = {c: (t.player1.costs[c[0]] + t.player2.costs[c[1]], t.loss[c]) for c in t.cells()}
    cands = set()
    for (a1, b1), (a2, b2) in combinations(lines.values(), 2):
        if b1 != b2:
            x = (a2 - a1) / (b1 - b2)
            if e_min < x < e_max:
                cands.add(x)

    def arg(e):
        v = min(a + b * e for a, b in lines.values())
        return {c for c, (a, b) in lines.items() if a + b * e == v}

    return sorted(x for x in cands if arg(x) != arg(x - F(1, 10**9)) or arg(x) != arg(x + F(1, 10**9)))


def test_sweep_base_model(t1):
    sw = exposure_sweep(t1, F(1, 2), 250)
    assert [b.exposure for b in sw.breakpoints] == [F(20, 19), 50, 100]
    assert [b.exposure for b in sw.breakpoints] == envelope_oracle(t1, F(1, 2), 250)
    assert [s.argmin for s in sw.segments] == [((0, 0),), ((0, 1), (1, 0)), ((1, 1),), ((2, 2),)]
    assert sw.breakpoints[2].argmin == ((1, 1), (1, 2), (2, 1), (2, 2))
    assert sw.segments[0].e_lo == F(1, 2) and sw.segments[-1].e_hi == 250


def test_sweep_base_model_float(t1_float):
    sw = exposure_sweep(t1_float, 0.5, 250.0)
    for got, want in zip([b.exposure for b in sw.breakpoints], [20 / 19, 50, 100]):
        assert abs(got - want) <= 1e-9
    assert len(sw.breakpoints) == 3


def test_sweep_consistent_with_minimize(t1):
    sw = exposure_sweep(t1, F(1, 2), 250)
    seg = {s.argmin: s for s in sw.segments}
    assert seg[((1, 1),)].e_lo < 60 < seg[((1, 1),)].e_hi
    assert seg[((2, 2),)].e_lo < 120
    for e in range(1, 250):
        assert sw.value(e) == minimize_cost(t1, e).value


def test_sweep_single_pair():
    t = TransactionType.from_matrix([1], [1], [[F(1, 10)]])
    sw = exposure_sweep(t, 1, 10)
    assert len(sw.segments) == 1 and sw.breakpoints == ()


@pytest.mark.parametrize("lo, hi", [(0, 5), (5, 5), (6, 5), (-1, 2)])
def test_sweep_invalid_range(t1, lo, hi):
    with pytest.raises(ValidationError):
        exposure_sweep(t1, lo, hi)


@settings(max_examples=150, deadline=None)
@given(transaction_types(), st.lists(exposures(), min_size=5, max_size=5))
def test_sweep_shape_and_agreement(t, es):
    lo, hi = F(1, 100), F(500)
    sw = exposure_sweep(t, lo, hi)
    segs = sw.segments
    assert segs[0].e_lo == lo and segs[-1].e_hi == hi
    for s, nxt in zip(segs, segs[1:]):
        assert s.e_hi == nxt.e_lo
        assert nxt.slope < s.slope and nxt.intercept > s.intercept
        assert s.value(s.e_hi) == nxt.value(nxt.e_lo)
    assert all(s.slope >= 0 for s in segs)
    assert [b.exposure for b in sw.breakpoints] == envelope_oracle(t, lo, hi)
    for e in es:
        opt = minimize_cost(t, e)
        assert sw.value(e) == opt.value
    # low-exposure limit: argmin lies among the cheapest pairs
    cheapest = min(t.player1.costs[i] + t.player2.costs[j] for i, j in t.cells())
    assert all(t.player1.costs[i] + t.player2.costs[j] == cheapest for i, j in segs[0].argmin)


# surface

def test_surface_base_model(t1):
    rows = surface_export(t1, 60)
    assert len(rows) == 9
    assert [r["tc"] for r in rows] == [60, 4, F("4.4"), 4, F("3.8"), F("4.2"), F("4.4"), F("4.2"), F("4.6")]
    assert all(r["relevant"] == 1 for r in rows)
    low = surface_export(t1, 1)
    assert [str(r["tc"]) for r in low][:2] == ["1", "21/20"]


def test_surface_lossless():
    t = TransactionType.from_matrix([2], [5], [[0]])
    assert surface_export(t, 7) == [{"i": 0, "j": 0, "z1": 2, "z2": 5, "pl": 0, "tc": 7, "relevant": 1}]


def test_surface_float_matches_exact():
    a = [r["tc"] for r in surface_export(base_model(False), 60.0)]
    b = [r["tc"] for r in surface_export(base_model(True), 60)]
    assert a == pytest.approx([float(x) for x in b])
