"""Transaction-cost sharing rules and the games they induce.

A rule gives Player 1's share ``c1`` of the total cost for every cell;
Player 2 pays the rest. Off the feasible set the transaction does not
execute and each player pays their own direct cost regardless of the rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .efficiency import minimize_cost
from .errors import DegenerateGridError, IllPosedError, ShapeMismatchError, ValidationError
from .games import BimatrixGame
from .model import Cell, TransactionType, check_exposure, total_cost
from .numeric import Number, close, div, is_finite, like

INFEASIBLE_NOTE = "infeasible cells: each player pays own direct cost"


@dataclass(frozen=True)
class SharingRule:
    c1: tuple[tuple[Number, ...], ...]
    context: str = ""
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "c1", tuple(tuple(r) for r in self.c1))
        object.__setattr__(self, "notes", tuple(self.notes))
        diags = rule_diagnostics(self.c1)
        if diags:
            raise ValidationError(diags)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.c1), len(self.c1[0])

    def c2(self, i: int, j: int) -> Number:
        return 1 - self.c1[i][j]


def rule_diagnostics(c1: Sequence[Sequence[Number]]) -> list[str]:
    if not c1 or not c1[0]:
        return ["sharing rule is empty"]
    diags = []
    width = len(c1[0])
    for i, row in enumerate(c1):
        if len(row) != width:
            diags.append(f"sharing rule row {i} has {len(row)} cells, expected {width}")
        for j, v in enumerate(row):
            if v is None or not is_finite(v) or not 0 <= v <= 1:
                diags.append(f"share out of [0,1] at ({i},{j})")
    return diags


def fixed_share_rule(c: Number, shape: tuple[int, int]) -> SharingRule:
    """Constant share ``c`` in the open interval (0, 1).

    At 0 or 1 one player bears nothing and loses any reason to make an effort.
    """
    if not 0 < c < 1:
        raise ValidationError(f"fixed share must lie strictly between 0 and 1, got {c!r}")
    n, m = shape
    return SharingRule(tuple((c,) * m for _ in range(n)), notes=(f"fixed share {c}",))


def _check_shape(rule: SharingRule, t: TransactionType) -> None:
    if rule.shape != t.shape:
        raise ShapeMismatchError(f"rule is {rule.shape[0]}x{rule.shape[1]}, model is {t.shape[0]}x{t.shape[1]}")


def build_game(t: TransactionType, e: Number, rule: SharingRule) -> BimatrixGame:
    _check_shape(rule, t)
    check_exposure(e)
    n, m = t.shape
    cost1 = [[None] * m for _ in range(n)]
    cost2 = [[None] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            if t.is_feasible(i, j):
                tc = total_cost(t, e, i, j).total
                share = rule.c1[i][j]
                cost1[i][j] = share * tc
                cost2[i][j] = (1 - share) * tc
            else:
                cost1[i][j] = t.player1.costs[i]
                cost2[i][j] = t.player2.costs[j]
    notes = [f"exposure {e}"]
    if len(t.feasible) < n * m:
        notes.append(INFEASIBLE_NOTE)
    return BimatrixGame(cost1, cost2, notes=notes)


def _argmin(values: dict) -> frozenset:
    low = min(values.values())
    return frozenset(k for k, v in values.items() if close(v, low))


@dataclass(frozen=True)
class OptimizerWitness:
    player: int
    axis: str  # "column" for Player 1 replies, "row" for Player 2 replies
    index: int
    payment_argmin: tuple[int, ...]
    cost_argmin: tuple[int, ...]


@dataclass(frozen=True)
class OptimizerCheck:
    """``witness`` is the first violating line; ``violations`` lists them all."""

    ok: bool
    violations: tuple[OptimizerWitness, ...] = ()

    @property
    def witness(self) -> Optional[OptimizerWitness]:
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.ok


def is_optimizer(rule: SharingRule, t: TransactionType, e: Number) -> OptimizerCheck:
    """Does every best reply coincide with the conditional total-cost minimum?

    Replies range over all choices (infeasible ones cost the player their own
    direct cost); the cost minimum ranges over feasible cells. Lines with no
    feasible cell impose nothing.
    """
    g = build_game(t, e, rule)
    n, m = t.shape
    found = []
    for j in range(m):
        tc = {i: total_cost(t, e, i, j).total for i in range(n) if t.is_feasible(i, j)}
        if not tc:
            continue
        pay = _argmin({i: g.cost1[i][j] for i in range(n)})
        want = _argmin(tc)
        if pay != want:
            found.append(OptimizerWitness(1, "column", j, tuple(sorted(pay)), tuple(sorted(want))))
    for i in range(n):
        tc = {j: total_cost(t, e, i, j).total for j in range(m) if t.is_feasible(i, j)}
        if not tc:
            continue
        pay = _argmin({j: g.cost2[i][j] for j in range(m)})
        want = _argmin(tc)
        if pay != want:
            found.append(OptimizerWitness(2, "row", i, tuple(sorted(pay)), tuple(sorted(want))))
    return OptimizerCheck(not found, tuple(found))


@dataclass(frozen=True)
class RegretProfile:
    optimum: Cell
    r1: Number
    r2: Number
    deviation1: Cell
    deviation2: Cell
    cost_deviation1: Optional[Cell]
    cost_deviation2: Optional[Cell]
    balanced: bool

    @property
    def deviation_targets_agree(self) -> bool:
        return self.deviation1 == self.cost_deviation1 and self.deviation2 == self.cost_deviation2


def _cheapest(values: dict):
    if not values:
        return None, None
    low = min(values.values())
    cell = min(c for c, v in values.items() if close(v, low))
    return cell, low


def regret_profile(rule: SharingRule, t: TransactionType, e: Number, opt: Cell) -> RegretProfile:
    """Extra payment each player suffers at their cheapest unilateral deviation.

    Deviation cells are chosen by the deviator's own payment; the cells with
    the lowest total-cost increase are reported alongside so that a rule for
    which the two differ is visible.
    """
    report = minimize_cost(t, e)
    if tuple(opt) not in report.argmin:
        raise IllPosedError(f"cell {tuple(opt)} is not a total-cost optimum {list(report.argmin)}")
    n, m = t.shape
    if n < 2 or m < 2:
        raise DegenerateGridError("regret needs at least two choices per player")
    i0, j0 = opt
    g = build_game(t, e, rule)
    dev1, pay1 = _cheapest({(i, j0): g.cost1[i][j0] for i in range(n) if i != i0})
    dev2, pay2 = _cheapest({(i0, j): g.cost2[i0][j] for j in range(m) if j != j0})
    tc_dev1, _ = _cheapest({(i, j0): total_cost(t, e, i, j0).total for i in range(n) if i != i0 and t.is_feasible(i, j0)})
    tc_dev2, _ = _cheapest({(i0, j): total_cost(t, e, i0, j).total for j in range(m) if j != j0 and t.is_feasible(i0, j)})
    r1 = pay1 - g.cost1[i0][j0]
    r2 = pay2 - g.cost2[i0][j0]
    return RegretProfile(tuple(opt), r1, r2, dev1, dev2, tc_dev1, tc_dev2, close(r1, r2))


def _unique_optimum(t: TransactionType, e: Number):
    report = minimize_cost(t, e)
    if len(report.argmin) > 1:
        raise IllPosedError(f"total cost has {len(report.argmin)} optima {list(report.argmin)}; regret balance is ill-posed")
    (i0, j0), = report.argmin
    n, m = t.shape
    if n < 2 or m < 2:
        raise DegenerateGridError("each player needs a choice other than the optimum")
    dev1 = [i for i in range(n) if i != i0 and t.is_feasible(i, j0)]
    dev2 = [j for j in range(m) if j != j0 and t.is_feasible(i0, j)]
    return (i0, j0), report.value, dev1, dev2


def _deviation_payment(t: TransactionType, e: Number, player: int, i: int, j: int) -> Number:
    """What a deviator charged in full pays: the total cost, or only their own
    direct cost when the deviation leaves the feasible set."""
    if t.is_feasible(i, j):
        return total_cost(t, e, i, j).total
    return t.player1.costs[i] if player == 1 else t.player2.costs[j]


def design_balanced_rule(t: TransactionType, e: Number, opt_share_hint: Optional[Number] = None) -> SharingRule:
    """Rule charging every unilateral deviation wholly to the deviator, with the
    share at the optimum chosen so both players' regrets are equal.

    The balancing share ``c`` solves ``dev1 - c*T = dev2 - (1-c)*T`` where
    ``T`` is the optimal total cost and ``devk`` player k's cheapest deviation
    payment (a deviation off the feasible set costs only the deviator's own
    direct cost). When ``c`` falls outside [0, 1] it is clamped and the
    residual imbalance is recorded. ``opt_share_hint`` overrides ``c`` (any
    split at the optimum keeps the rule an optimizer); the resulting
    imbalance is noted.
    """
    check_exposure(e)
    (i0, j0), T, dev1, dev2 = _unique_optimum(t, e)
    n, m = t.shape
    d1 = min(_deviation_payment(t, e, 1, i, j0) for i in range(n) if i != i0)
    d2 = min(_deviation_payment(t, e, 2, i0, j) for j in range(m) if j != j0)
    notes = []
    if opt_share_hint is not None:
        if not 0 <= opt_share_hint <= 1:
            raise ValidationError(f"share hint must lie in [0,1], got {opt_share_hint!r}")
        c = opt_share_hint
        notes.append(f"share at optimum fixed by hint {c}")
    elif T == 0:
        c = like(T, Fraction(1, 2))
        notes.append("optimal total cost is zero; share set to one half")
    else:
        c = div(d1 - d2 + T, 2 * T)
        if c < 0 or c > 1:
            notes.append(f"balancing share {c} clamped to [0,1]")
            c = min(max(c, like(c, 0)), like(c, 1))
    c1 = [[c] * m for _ in range(n)]
    one, zero = like(c, 1), like(c, 0)
    for i in dev1:
        c1[i][j0] = one
    for j in dev2:
        c1[i0][j] = zero
    r1, r2 = d1 - c * T, d2 - (1 - c) * T
    if not close(r1, r2):
        notes.append(f"residual regret imbalance {r1 - r2}")
    notes.append(f"optimum ({i0},{j0}), share {c}")
    rule = SharingRule(c1, context=f"balanced@{e}", notes=tuple(notes))
    check = is_optimizer(rule, t, e)
    if not check:
        w = check.witness
        raise IllPosedError(
            f"deviation charging breaks the optimizer property at {w.axis} {w.index}; "
            "no balanced rule of this form exists for the model"
        )
    return rule


def pay_for_mistake_rule(t: TransactionType, e: Number, base_share: Number) -> SharingRule:
    """The deviator alone bears the extra total cost of leaving the optimum.

    Off the optimum's row and column the base share applies unchanged.
    """
    check_exposure(e)
    if not 0 < base_share < 1:
        raise ValidationError(f"base share must lie strictly between 0 and 1, got {base_share!r}")
    (i0, j0), T, dev1, dev2 = _unique_optimum(t, e)
    n, m = t.shape
    b = base_share
    c1 = [[b] * m for _ in range(n)]
    notes = [f"optimum ({i0},{j0}), base share {b}"]
    for i in dev1:
        tc = total_cost(t, e, i, j0).total
        share = div(b * T + tc - T, tc)
        if share > 1:
            notes.append(f"share clamped to 1 at ({i},{j0})")
            share = like(share, 1)
        c1[i][j0] = share
    for j in dev2:
        tc = total_cost(t, e, i0, j).total
        share2 = div((1 - b) * T + tc - T, tc)
        if share2 > 1:
            notes.append(f"share clamped to 0 at ({i0},{j})")
            share2 = like(share2, 1)
        c1[i0][j] = 1 - share2
    return SharingRule(c1, context=f"pay-for-mistake@{e}", notes=tuple(notes))
