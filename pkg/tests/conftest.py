from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from transcost.dispute import dispute_from_matrix
from transcost.model import TransactionType
from transcost.sharing import SharingRule

WORKED = Path(__file__).resolve().parent.parent / "fixtures" / "worked"

LOSS_BASE = [["1.00", "0.05", "0.04"], ["0.05", "0.03", "0.02"], ["0.04", "0.02", "0.01"]]
RULE_UNIFORM = [["0.5"] * 3] * 3
RULE_SKEWED = [["0.5", "0.5", "0.9"], ["0.1", "0.3", "0.9"], ["0.3", "0.1", "0.5"]]
RULE_NO_PURE = [["0.5", "0.5", "0.9"], ["0.1", "0.3", "0.2"], ["0.3", "0.1", "0.5"]]
RULE_BALANCED = [["0.5", "1.0", "0.5"], ["0.0", "0.5", "0.0"], ["0.5", "1.0", "0.5"]]
SHARE_SYMMETRIC = [["0.5", "0.8", "0.9"], ["0.2", "0.5", "0.6"], ["0.1", "0.4", "0.5"]]
SHARE_ASYMMETRIC = [["0.8", "0.9", "0.95"], ["0.3", "0.5", "0.6"], ["0.1", "0.4", "0.5"]]
SHARE_RESTRICTED = [["0.5", None, None], ["0.2", "0.5", "0.6"], ["0.1", "0.4", "0.5"]]


def frac(matrix):
    return [[None if v is None else Fraction(v) for v in row] for row in matrix]


def flt(matrix):
    return [[None if v is None else float(v) for v in row] for row in matrix]


def base_model(exact=True):
    conv = frac if exact else flt
    return TransactionType.from_matrix([0, 1, 2], [0, 1, 2], conv(LOSS_BASE))


def rule(matrix, exact=True):
    return SharingRule((frac if exact else flt)(matrix))


def dispute(share, stake, institution="each-pays-own", exact=True):
    return dispute_from_matrix([0, 1, 2], [0, 1, 2], (frac if exact else flt)(share), stake, institution)


@pytest.fixture
def t1():
    return base_model(exact=True)


@pytest.fixture
def t1_float():
    return base_model(exact=False)


@st.composite
def transaction_types(draw, max_n=6, max_m=6, exact=True, full_grid=False):
    """Random models: arbitrary nonnegative costs and loss probabilities on a
    1/100 grid, optionally with some infeasible pairs."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    costs = st.integers(0, 30)
    c1 = draw(st.lists(costs, min_size=n, max_size=n))
    c2 = draw(st.lists(costs, min_size=m, max_size=m))
    losses = draw(st.lists(st.integers(0, 100), min_size=n * m, max_size=n * m))
    if full_grid:
        mask = [True] * (n * m)
    else:
        drop = draw(st.sets(st.integers(0, n * m - 1), max_size=(n * m) // 3))
        mask = [k not in drop for k in range(n * m)]
        if not any(mask):
            mask[0] = True
    conv = (lambda k: Fraction(k, 100)) if exact else (lambda k: k / 100)
    loss = [[conv(losses[i * m + j]) if mask[i * m + j] else None for j in range(m)] for i in range(n)]
    return TransactionType.from_matrix(c1, c2, loss)


def exposures(exact=True):
    if exact:
        return st.fractions(min_value=Fraction(1, 100), max_value=500, max_denominator=1000)
    return st.floats(min_value=0.01, max_value=500, allow_nan=False)
