"""Disputes over how an already-determined transaction cost is split.

Each player spends on advocacy; the dispute function maps the two spend
levels to Player 1's resulting share of the stake. An institution decides
who carries the dispute spending itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ValidationError
from .games import BimatrixGame, pure_equilibria
from .model import Cell, TransactionType, total_cost
from .numeric import Number, is_finite, leq, lt

EACH_PAYS_OWN = "each-pays-own"
PROPORTIONAL = "proportional"
LOSER_PAYS = "loser-pays"
INSTITUTIONS = (EACH_PAYS_OWN, PROPORTIONAL, LOSER_PAYS)


@dataclass(frozen=True)
class Institution:
    """Who pays dispute spending.

    ``proportional`` charges Player 1 the fraction ``d1`` of total spending.
    ``loser-pays`` treats Player 1 as initiator: if the resulting share is
    not strictly below the initial one, Player 1 pays all spending;
    otherwise Player 2 does.
    """

    kind: str = EACH_PAYS_OWN
    d1: Optional[Number] = None

    def __post_init__(self):
        if self.kind not in INSTITUTIONS:
            raise ValidationError(f"unknown institution {self.kind!r}; expected one of {', '.join(INSTITUTIONS)}")
        if self.kind == PROPORTIONAL:
            if self.d1 is None or not is_finite(self.d1) or not 0 <= self.d1 <= 1:
                raise ValidationError(f"proportional institution needs d1 in [0,1], got {self.d1!r}")
        elif self.d1 is not None:
            raise ValidationError(f"d1 only applies to the proportional institution, not {self.kind}")

    def __str__(self) -> str:
        return f"{self.kind}({self.d1})" if self.kind == PROPORTIONAL else self.kind


@dataclass(frozen=True)
class DisputeModel:
    spend1: tuple[Number, ...]
    spend2: tuple[Number, ...]
    share: tuple[tuple[Optional[Number], ...], ...]
    stake: Number
    institution: Institution = field(default_factory=Institution)

    def __post_init__(self):
        object.__setattr__(self, "spend1", tuple(self.spend1))
        object.__setattr__(self, "spend2", tuple(self.spend2))
        object.__setattr__(self, "share", tuple(tuple(r) for r in self.share))
        diags = dispute_diagnostics(self)
        if diags:
            raise ValidationError(diags)

    @classmethod
    def unchecked(cls, spend1, spend2, share, stake, institution) -> "DisputeModel":
        obj = object.__new__(cls)
        for key, value in (
            ("spend1", tuple(spend1)),
            ("spend2", tuple(spend2)),
            ("share", tuple(tuple(r) for r in share)),
            ("stake", stake),
            ("institution", institution),
        ):
            object.__setattr__(obj, key, value)
        return obj

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.spend1), len(self.spend2)

    def defined(self) -> list[Cell]:
        n, m = self.shape
        return [(i, j) for i in range(n) for j in range(m) if self.share[i][j] is not None]


def dispute_diagnostics(d: DisputeModel) -> list[str]:
    diags = []
    n, m = len(d.spend1), len(d.spend2)
    if n == 0 or m == 0:
        return ["dispute needs at least one spend level per player"]
    for name, spend in (("spend1", d.spend1), ("spend2", d.spend2)):
        for k, v in enumerate(spend):
            if not is_finite(v) or v < 0:
                diags.append(f"{name}[{k}] must be finite and >= 0")
        if any(not a < b for a, b in zip(spend, spend[1:])):
            diags.append(f"{name} must be strictly increasing")
    if not is_finite(d.stake) or d.stake < 0:
        diags.append("stake must be finite and >= 0")
    if len(d.share) != n or any(len(r) != m for r in d.share):
        diags.append(f"share matrix must be {n}x{m}")
        return diags
    if all(v is None for r in d.share for v in r):
        diags.append("share matrix has no defined cells")
    elif d.share[0][0] is None:
        diags.append("share must be defined at (0,0), the undisputed split")
    for i, row in enumerate(d.share):
        for j, v in enumerate(row):
            if v is not None and (not is_finite(v) or not 0 <= v <= 1):
                diags.append(f"share out of [0,1] at ({i},{j})")
    return diags


def shape_warnings(d: DisputeModel) -> list[str]:
    """Advisory checks: Player 1's share should fall (convexly) in own spend
    and rise (concavely) in the opponent's spend."""
    out = []
    n, m = d.shape
    s = d.share
    for j in range(m):
        col = [(i, s[i][j]) for i in range(n) if s[i][j] is not None]
        for (ia, a), (ib, b) in zip(col, col[1:]):
            if lt(a, b):
                out.append(f"share rises with player 1 spend between ({ia},{j}) and ({ib},{j})")
        for (_, a), (ib, b), (_, c) in zip(col, col[1:], col[2:]):
            if lt(a - b, b - c):
                out.append(f"share not convex in player 1 spend at ({ib},{j})")
    for i in range(n):
        row = [(j, s[i][j]) for j in range(m) if s[i][j] is not None]
        for (ja, a), (jb, b) in zip(row, row[1:]):
            if lt(b, a):
                out.append(f"share falls with player 2 spend between ({i},{ja}) and ({i},{jb})")
        for (_, a), (jb, b), (_, c) in zip(row, row[1:], row[2:]):
            if lt(b - a, c - b):
                out.append(f"share not concave in player 2 spend at ({i},{jb})")
    return out


def cell_payments(d: DisputeModel, i: int, j: int) -> tuple[Number, Number]:
    s = d.share[i][j]
    if s is None:
        raise ValidationError(f"dispute cell ({i},{j}) is not allowed")
    v1, v2 = d.spend1[i], d.spend2[j]
    base1, base2 = s * d.stake, (1 - s) * d.stake
    inst = d.institution
    if inst.kind == EACH_PAYS_OWN:
        return v1 + base1, v2 + base2
    if inst.kind == PROPORTIONAL:
        spent = v1 + v2
        return inst.d1 * spent + base1, (1 - inst.d1) * spent + base2
    # At (0,0) the share equals the initial one, so the initiator is charged
    # the (normally zero) spending there.
    if lt(s, d.share[0][0]):
        return base1, base2 + v1 + v2
    return base1 + v1 + v2, base2


def build_dispute_game(d: DisputeModel) -> BimatrixGame:
    n, m = d.shape
    cost1 = [[None] * m for _ in range(n)]
    cost2 = [[None] * m for _ in range(n)]
    for i, j in d.defined():
        cost1[i][j], cost2[i][j] = cell_payments(d, i, j)
    allowed = frozenset(d.defined())
    return BimatrixGame(cost1, cost2, allowed=allowed, notes=(f"institution {d.institution}",))


@dataclass(frozen=True)
class Reply:
    leader_move: int
    follower_move: int
    payments: tuple[Number, Number]


@dataclass(frozen=True)
class DisputeOutcome:
    """``cells`` holds the equilibria (simultaneous) or the single path (sequential)."""

    mode: str
    cells: tuple[Cell, ...]
    payments: dict
    totals: dict
    prisoners_dilemma: bool = False
    replies: tuple[Reply, ...] = ()
    leader: Optional[int] = None


def _totals(d, cells):
    return {c: d.stake + d.spend1[c[0]] + d.spend2[c[1]] for c in cells}


def simultaneous_equilibria(d: DisputeModel) -> DisputeOutcome:
    """Pure equilibria; flags a prisoners' dilemma when some equilibrium leaves
    both players strictly worse off than not disputing at all."""
    g = build_dispute_game(d)
    eq = pure_equilibria(g)
    pay = {c: (g.cost1[c[0]][c[1]], g.cost2[c[0]][c[1]]) for c in eq}
    base = (g.cost1[0][0], g.cost2[0][0])
    pd = any(c != (0, 0) and lt(base[0], p[0]) and lt(base[1], p[1]) for c, p in pay.items())
    return DisputeOutcome("simultaneous", tuple(eq), pay, _totals(d, eq), prisoners_dilemma=pd)


def sequential_solve(d: DisputeModel, leader: int = 1) -> DisputeOutcome:
    """Backward induction with ties broken toward the lowest spend."""
    if leader not in (1, 2):
        raise ValidationError(f"leader must be 1 or 2, got {leader!r}")
    g = build_dispute_game(d)
    n, m = d.shape
    replies = []
    if leader == 1:
        for i in range(n):
            opts = g.row_options(i)
            if not opts:
                continue
            low = min(g.cost2[i][k] for k in opts)
            j = next(k for k in opts if leq(g.cost2[i][k], low))
            replies.append(Reply(i, j, (g.cost1[i][j], g.cost2[i][j])))
        best = min(r.payments[0] for r in replies)
        pick = next(r for r in replies if leq(r.payments[0], best))
        cell = (pick.leader_move, pick.follower_move)
    else:
        for j in range(m):
            opts = g.column_options(j)
            if not opts:
                continue
            low = min(g.cost1[k][j] for k in opts)
            i = next(k for k in opts if leq(g.cost1[k][j], low))
            replies.append(Reply(j, i, (g.cost1[i][j], g.cost2[i][j])))
        best = min(r.payments[1] for r in replies)
        pick = next(r for r in replies if leq(r.payments[1], best))
        cell = (pick.follower_move, pick.leader_move)
    return DisputeOutcome(
        "sequential",
        (cell,),
        {cell: pick.payments},
        _totals(d, [cell]),
        replies=tuple(replies),
        leader=leader,
    )


def grand_total(t: TransactionType, e: Number, i: int, j: int, v1: Number, v2: Number) -> Number:
    """Total transaction cost plus both players' dispute spending."""
    if v1 < 0 or v2 < 0:
        raise ValidationError("dispute spending must be >= 0")
    return total_cost(t, e, i, j).total + v1 + v2


def dispute_from_matrix(
    spend1: Sequence[Number],
    spend2: Sequence[Number],
    share: Sequence[Sequence[Optional[Number]]],
    stake: Number,
    institution: str = EACH_PAYS_OWN,
    d1: Optional[Number] = None,
) -> DisputeModel:
    return DisputeModel(tuple(spend1), tuple(spend2), tuple(tuple(r) for r in share), stake, Institution(institution, d1))
