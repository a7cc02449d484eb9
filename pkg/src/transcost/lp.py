"""Small dense linear algebra over floats or Fractions.

Both routines work on plain lists so that rational inputs stay rational.
Sizes here are tiny (a few dozen columns), so clarity beats speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .numeric import Number, is_exact, tol


def _caster(*values: Number):
    # Python ints divide to floats, so lift everything into one mode up front.
    return Fraction if is_exact(*values) else float


def solve_linear(A: Sequence[Sequence[Number]], b: Sequence[Number]) -> Optional[list[Number]]:
    """Solve the square system ``A x = b``; return None when singular."""
    n = len(A)
    cast = _caster(*b, *(v for row in A for v in row))
    M = [[cast(v) for v in row] + [cast(b[i])] for i, row in enumerate(A)]
    eps = tol(*(v for row in M for v in row))
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(M[r][col]))
        if abs(M[pivot][col]) <= eps:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[tuple[Number, ...]] = None
    value: Optional[Number] = None


def _pivot(T: list[list[Number]], basis: list[int], r: int, k: int) -> None:
    piv = T[r][k]
    T[r] = [v / piv for v in T[r]]
    for i, row in enumerate(T):
        if i != r and row[k] != 0:
            f = row[k]
            T[i] = [a - f * c for a, c in zip(row, T[r])]
    basis[r] = k


def _simplex(T, basis, cost, columns, eps) -> str:
    # Bland's rule: smallest entering index, smallest leaving basis index.
    m = len(T)
    while True:
        enter = None
        in_basis = set(basis)
        for j in columns:
            if j in in_basis:
                continue
            reduced = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))
            if reduced > eps:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > eps:
                ratio = T[i][-1] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded"
        _pivot(T, basis, leave, enter)


def maximize(
    c: Sequence[Number],
    A_eq: Sequence[Sequence[Number]],
    b_eq: Sequence[Number],
) -> LPResult:
    """Maximize ``c @ x`` subject to ``A_eq @ x == b_eq`` and ``x >= 0``.

    Two-phase tableau simplex with Bland's anti-cycling rule. Exact when
    every coefficient is rational.
    """
    m, n = len(A_eq), len(c)
    coeffs = (*c, *b_eq, *(v for row in A_eq for v in row))
    eps = tol(*coeffs)
    cast = _caster(*coeffs)
    zero, one = cast(0), cast(1)
    c = [cast(v) for v in c]
    T = []
    for i in range(m):
        row = [cast(v) for v in A_eq[i]]
        rhs = cast(b_eq[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        T.append(row + [one if k == i else zero for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]

    phase1 = [zero] * n + [-one] * m
    _simplex(T, basis, phase1, range(n + m), eps)
    infeas = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    if infeas > eps:
        return LPResult("infeasible")

    # Drive remaining artificials out; drop rows that are redundant.
    keep = []
    for i in range(m):
        if basis[i] >= n:
            k = next((j for j in range(n) if abs(T[i][j]) > eps), None)
            if k is None:
                continue
            _pivot(T, basis, i, k)
        keep.append(i)
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    cost = list(c)
    status = _simplex(T, basis, cost, range(n), eps)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [zero] * n
    for i, k in enumerate(basis):
        x[k] = T[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return LPResult("optimal", tuple(x), value)
