"""Transaction types and the elementary cost formulas."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import EmptyFeasibleSetError, InfeasiblePairError, ValidationError
from .numeric import Number, close, is_finite

Cell = tuple[int, int]


@dataclass(frozen=True)
class ChoiceSet:
    """One player's ordered effort levels and their direct costs."""

    labels: tuple[str, ...]
    costs: tuple[Number, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "costs", tuple(self.costs))

    @classmethod
    def from_costs(cls, costs: Sequence[Number], labels: Optional[Sequence[str]] = None) -> "ChoiceSet":
        if labels is None:
            labels = [str(k) for k in range(len(costs))]
        return cls(tuple(labels), tuple(costs))

    def __len__(self) -> int:
        return len(self.costs)


def _choice_diagnostics(name: str, cs: ChoiceSet) -> list[str]:
    out = []
    if len(cs.costs) == 0:
        out.append(f"{name}: no choices")
    if len(cs.labels) != len(cs.costs):
        out.append(f"{name}: {len(cs.labels)} labels for {len(cs.costs)} costs")
    seen = set()
    for k, lab in enumerate(cs.labels):
        if lab in seen:
            out.append(f"{name}: duplicate label {lab!r} at choice {k}")
        seen.add(lab)
    for k, z in enumerate(cs.costs):
        if not is_finite(z) or z < 0:
            out.append(f"{name}: cost {z!r} at choice {k} must be finite and >= 0")
    return out


@dataclass(frozen=True, eq=True)
class TransactionType:
    """Choice sets, feasible pairs and loss probabilities shared by a family
    of transactions that differ only in exposure.

    Rows index Player 1's choices, columns Player 2's. Construction validates
    every invariant; use :meth:`unchecked` to hold data still under review.
    """

    player1: ChoiceSet
    player2: ChoiceSet
    loss: Mapping[Cell, Number]
    name: str = ""
    feasible: frozenset = field(init=False, compare=False)

    def __post_init__(self):
        loss = {(int(i), int(j)): v for (i, j), v in dict(self.loss).items()}
        object.__setattr__(self, "loss", loss)
        object.__setattr__(self, "feasible", frozenset(loss))
        diags = validate_type(self)
        if diags:
            if self.feasible == frozenset():
                raise EmptyFeasibleSetError(diags)
            raise ValidationError(diags)

    @classmethod
    def unchecked(cls, player1, player2, loss, name="") -> "TransactionType":
        obj = object.__new__(cls)
        object.__setattr__(obj, "player1", player1)
        object.__setattr__(obj, "player2", player2)
        object.__setattr__(obj, "loss", dict(loss))
        object.__setattr__(obj, "name", name)
        object.__setattr__(obj, "feasible", frozenset(obj.loss))
        return obj

    @classmethod
    def from_matrix(
        cls,
        costs1: Sequence[Number],
        costs2: Sequence[Number],
        loss: Sequence[Sequence[Optional[Number]]],
        labels1: Optional[Sequence[str]] = None,
        labels2: Optional[Sequence[str]] = None,
        name: str = "",
    ) -> "TransactionType":
        """Build from a dense loss matrix; ``None`` marks an infeasible pair."""
        cells = {
            (i, j): v
            for i, row in enumerate(loss)
            for j, v in enumerate(row)
            if v is not None
        }
        return cls(
            ChoiceSet.from_costs(costs1, labels1),
            ChoiceSet.from_costs(costs2, labels2),
            cells,
            name,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.player1), len(self.player2)

    def cells(self) -> list[Cell]:
        """Feasible cells in row-major order."""
        return sorted(self.feasible)

    def is_feasible(self, i: int, j: int) -> bool:
        return (i, j) in self.loss

    def loss_matrix(self) -> list[list[Optional[Number]]]:
        n, m = self.shape
        return [[self.loss.get((i, j)) for j in range(m)] for i in range(n)]


def validate_type(t: TransactionType) -> list[str]:
    """Return one diagnostic per violated invariant; empty when valid."""
    diags = _choice_diagnostics("player1", t.player1) + _choice_diagnostics("player2", t.player2)
    n, m = len(t.player1.costs), len(t.player2.costs)
    if not t.loss:
        diags.append("feasible set empty")
    for (i, j), pl in sorted(t.loss.items()):
        if not (0 <= i < n and 0 <= j < m):
            diags.append(f"feasible pair ({i},{j}) outside the {n}x{m} grid")
            continue
        if pl is None or not is_finite(pl) or not 0 <= pl <= 1:
            diags.append(f"loss out of [0,1] at ({i},{j})")
    return diags


def check_exposure(e: Number) -> Number:
    if not is_finite(e) or not e > 0:
        raise ValidationError(f"exposure must be > 0, got {e!r}")
    return e


@dataclass(frozen=True)
class CostBreakdown:
    z1: Number
    z2: Number
    expected_loss: Number
    total: Number


def _require_feasible(t: TransactionType, i: int, j: int) -> Number:
    try:
        return t.loss[(i, j)]
    except KeyError:
        raise InfeasiblePairError(f"pair ({i},{j}) is not feasible; the transaction cannot be executed") from None


def total_cost(t: TransactionType, e: Number, i: int, j: int) -> CostBreakdown:
    """Direct costs of both players plus expected loss ``Pl * e``."""
    pl = _require_feasible(t, i, j)
    check_exposure(e)
    z1, z2 = t.player1.costs[i], t.player2.costs[j]
    loss = pl * e
    return CostBreakdown(z1, z2, loss, z1 + z2 + loss)


def yield_value(t: TransactionType, e: Number, i: int, j: int) -> Number:
    """Exposure preserved in expectation, ``(1 - Pl) * e``."""
    pl = _require_feasible(t, i, j)
    check_exposure(e)
    return (1 - pl) * e


def tc_matrix(t: TransactionType, e: Number) -> list[list[Optional[Number]]]:
    """Total cost per cell, ``None`` on infeasible pairs."""
    n, m = t.shape
    return [
        [total_cost(t, e, i, j).total if t.is_feasible(i, j) else None for j in range(m)]
        for i in range(n)
    ]


def argmin_cells(values: Iterable[tuple[Cell, Number]]) -> tuple[Number, list[Cell]]:
    """Minimum value and every cell attaining it (within tolerance)."""
    items = list(values)
    best = min(v for _, v in items)
    return best, sorted(c for c, v in items if close(v, best))
