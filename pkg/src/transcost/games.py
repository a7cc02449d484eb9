"""Two-player cost games: pure and mixed equilibria.

Entries are payments each player wants to minimize. A game may carry an
``allowed`` mask; disallowed cells hold ``None`` and are not strategies
(a player's options are restricted to the allowed cells in the current
row or column).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import CapExceededError, ShapeMismatchError, SolverError, ValidationError
from .lp import maximize, solve_linear
from .model import Cell
from .numeric import Number, close, is_finite, leq, tol

Matrix = tuple[tuple[Optional[Number], ...], ...]


def _freeze(matrix) -> Matrix:
    return tuple(tuple(row) for row in matrix)


@dataclass(frozen=True)
class BimatrixGame:
    cost1: Matrix
    cost2: Matrix
    allowed: Optional[frozenset] = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cost1", _freeze(self.cost1))
        object.__setattr__(self, "cost2", _freeze(self.cost2))
        if self.allowed is not None:
            object.__setattr__(self, "allowed", frozenset(self.allowed))
        object.__setattr__(self, "notes", tuple(self.notes))
        shape1 = (len(self.cost1), len(self.cost1[0]) if self.cost1 else 0)
        shape2 = (len(self.cost2), len(self.cost2[0]) if self.cost2 else 0)
        if shape1 != shape2 or any(len(r) != shape1[1] for r in self.cost1 + self.cost2):
            raise ShapeMismatchError("cost matrices differ in shape or are ragged")
        if 0 in shape1:
            raise ShapeMismatchError("game has no strategies")
        for i, j in self.cells():
            a, b = self.cost1[i][j], self.cost2[i][j]
            if a is None or b is None or not (is_finite(a) and is_finite(b)):
                raise ValidationError(f"non-finite payment at ({i},{j})")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.cost1), len(self.cost1[0])

    def is_allowed(self, i: int, j: int) -> bool:
        return self.allowed is None or (i, j) in self.allowed

    def cells(self) -> list[Cell]:
        n, m = self.shape
        return [(i, j) for i in range(n) for j in range(m) if self.is_allowed(i, j)]

    def column_options(self, j: int) -> list[int]:
        return [i for i in range(self.shape[0]) if self.is_allowed(i, j)]

    def row_options(self, i: int) -> list[int]:
        return [j for j in range(self.shape[1]) if self.is_allowed(i, j)]


def best_rows(g: BimatrixGame, j: int) -> list[int]:
    """Player 1's cheapest replies to column ``j``."""
    opts = g.column_options(j)
    low = min(g.cost1[i][j] for i in opts)
    return [i for i in opts if close(g.cost1[i][j], low)]


def best_cols(g: BimatrixGame, i: int) -> list[int]:
    opts = g.row_options(i)
    low = min(g.cost2[i][j] for j in opts)
    return [j for j in opts if close(g.cost2[i][j], low)]


def pure_equilibria(g: BimatrixGame) -> list[Cell]:
    """Every cell that is a mutual best response, ties included."""
    return [(i, j) for i, j in g.cells() if i in best_rows(g, j) and j in best_cols(g, i)]


@dataclass(frozen=True)
class MixedProfile:
    p: tuple[Number, ...]
    q: tuple[Number, ...]
    cost1: Number
    cost2: Number

    @property
    def total(self) -> Number:
        return self.cost1 + self.cost2

    @property
    def support(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (
            tuple(i for i, x in enumerate(self.p) if x != 0),
            tuple(j for j, y in enumerate(self.q) if y != 0),
        )


@dataclass(frozen=True)
class EquilibriumReport:
    pure: tuple[Cell, ...]
    mixed: tuple[MixedProfile, ...]
    notes: tuple[str, ...] = field(default=())


def _expected(g_matrix, p, q):
    return sum(p[i] * q[j] * g_matrix[i][j] for i in range(len(p)) for j in range(len(q)) if p[i] and q[j])


def best_response_slack(g: BimatrixGame, prof: MixedProfile) -> Number:
    """Largest saving any pure deviation offers either player (0 at equilibrium)."""
    n, m = g.shape
    row_costs = [sum(prof.q[j] * g.cost1[i][j] for j in range(m)) for i in range(n)]
    col_costs = [sum(prof.p[i] * g.cost2[i][j] for i in range(n)) for j in range(m)]
    return max(prof.cost1 - min(row_costs), prof.cost2 - min(col_costs))


def _indifference(M, rows, cols, transpose):
    """Mix over ``rows`` (or ``cols`` when transposed) equalizing the opponent's
    payments on the opponent's support; returns (mix, value) or None."""
    if transpose:
        own, opp = cols, rows
        coef = lambda a, b: M[b][a]  # noqa: E731
    else:
        own, opp = rows, cols
        coef = lambda a, b: M[a][b]  # noqa: E731
    k = len(own)
    A = [[coef(a, b) for a in own] + [-1] for b in opp]
    A.append([1] * k + [0])
    rhs = [0] * len(opp) + [1]
    sol = solve_linear(A, rhs)
    if sol is None:
        return None
    return sol[:k], sol[k]


def _profile_from(g, rows, cols, x, y):
    n, m = g.shape
    zero = 0 * g.cost1[0][0]
    p = [zero] * n
    q = [zero] * m
    for i, v in zip(rows, x):
        p[i] = v
    for j, v in zip(cols, y):
        q[j] = v
    return p, q


def _accept(g, p, q, found):
    eps = tol(*p, *q)
    if any(v < -eps for v in p + q):
        return
    p = tuple(0 * v if abs(v) <= eps else v for v in p)
    q = tuple(0 * v if abs(v) <= eps else v for v in q)
    prof = MixedProfile(p, q, _expected(g.cost1, p, q), _expected(g.cost2, p, q))
    if not leq(best_response_slack(g, prof), 0):
        return
    for other in found:
        if all(close(a, b) for a, b in zip(p + q, other.p + other.q)):
            return
    found.append(prof)


def _lp_mix(M, own_support, opp_support, opp_size, transpose):
    """Feasibility LP: mix over ``own_support`` so every opponent strategy in
    ``opp_support`` is a cheapest reply. Handles degenerate supports."""
    k = len(own_support)
    coef = (lambda a, b: M[b][a]) if transpose else (lambda a, b: M[a][b])
    outside = [b for b in range(opp_size) if b not in opp_support]
    ncols = k + 2 + len(outside)  # mix, v+, v-, slacks
    rows, rhs = [], []
    for b in range(opp_size):
        row = [coef(a, b) for a in own_support] + [-1, 1] + [0] * len(outside)
        if b in outside:
            row[k + 2 + outside.index(b)] = -1
        rows.append(row)
        rhs.append(0)
    rows.append([1] * k + [0] * (ncols - k))
    rhs.append(1)
    res = maximize([0] * ncols, rows, rhs)
    if res.status != "optimal":
        return None
    return list(res.x[:k])


def mixed_equilibria(g: BimatrixGame, cap: int = 8) -> EquilibriumReport:
    """Support enumeration over equal-size supports.

    Supports are visited by increasing size, then lexicographically. Singular
    indifference systems are skipped. If the game is degenerate enough that
    no equal-size support yields an equilibrium, unequal supports are searched
    with a feasibility LP.
    """
    if g.allowed is not None and len(g.allowed) != g.shape[0] * g.shape[1]:
        raise SolverError("mixed equilibria need a full strategy grid")
    n, m = g.shape
    if max(n, m) > cap:
        raise CapExceededError(f"{n}x{m} game exceeds the support-enumeration cap of {cap}")
    A, B = g.cost1, g.cost2
    found: list[MixedProfile] = []
    notes = []
    singular = 0
    for k in range(1, min(n, m) + 1):
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(m), k):
                px = _indifference(B, rows, cols, transpose=False)
                qy = _indifference(A, rows, cols, transpose=True)
                if px is None or qy is None:
                    singular += 1
                    continue
                p, q = _profile_from(g, rows, cols, px[0], qy[0])
                _accept(g, p, q, found)
    if singular:
        notes.append(f"skipped {singular} singular support pairs")
    if not found:
        notes.append("degenerate game: searched unequal supports by LP")
        for size_r in range(1, n + 1):
            for rows in itertools.combinations(range(n), size_r):
                for size_c in range(1, m + 1):
                    for cols in itertools.combinations(range(m), size_c):
                        x = _lp_mix(B, rows, cols, m, transpose=False)
                        y = _lp_mix(A, cols, rows, n, transpose=True)
                        if x is None or y is None:
                            continue
                        p, q = _profile_from(g, rows, cols, x, y)
                        _accept(g, p, q, found)
                if found:
                    break
            if found:
                break
    return EquilibriumReport(tuple(pure_equilibria(g)), tuple(found), tuple(notes))


def game_from_lists(cost1: Sequence[Sequence[Number]], cost2: Sequence[Sequence[Number]]) -> BimatrixGame:
    return BimatrixGame(_freeze(cost1), _freeze(cost2))
