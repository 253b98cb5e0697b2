"""Two-population 2x2 bimatrix games and their interior mixed equilibria.

Conventions: the row population is X with strategies {X1, X2}, the column
population is Y with {Y1, Y2}.  Cell (i, j) pays a_ij to the X agent and
b_ij to the Y agent.  A population mix is the probability of playing the
first strategy: p for X1, q for Y1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGame, NoInteriorEquilibrium


@dataclass(frozen=True)
class PayoffMatrix:
    """The eight payoff cells of a bimatrix 2x2 game."""

    a11: float
    a12: float
    a21: float
    a22: float
    b11: float
    b12: float
    b21: float
    b22: float

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22", "b11", "b12", "b21", "b22"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"payoff {name} must be finite")

    def x_payoffs(self, q: float) -> tuple[float, float]:
        """Expected payoff of X1 and X2 against a Y population mixing q on Y1."""
        return (self.a11 * q + self.a12 * (1.0 - q),
                self.a21 * q + self.a22 * (1.0 - q))

    def y_payoffs(self, p: float) -> tuple[float, float]:
        """Expected payoff of Y1 and Y2 against an X population mixing p on X1."""
        return (self.b11 * p + self.b21 * (1.0 - p),
                self.b12 * p + self.b22 * (1.0 - p))

    def cells(self) -> tuple[tuple[float, float], ...]:
        """Cells in reading order: (a11,b11), (a12,b12), (a21,b21), (a22,b22)."""
        return ((self.a11, self.b11), (self.a12, self.b12),
                (self.a21, self.b21), (self.a22, self.b22))


@dataclass(frozen=True)
class EquilibriumPoint:
    """Interior mixed equilibrium: P(X1) = p_star, P(Y1) = q_star."""

    p_star: float
    q_star: float


@dataclass(frozen=True)
class Treatment:
    """One experimental configuration: a game plus its session layout."""

    id: int
    payoffs: PayoffMatrix
    groups: int
    rounds_per_group: int

    def __post_init__(self):
        if self.groups < 1 or self.rounds_per_group < 1:
            raise ValueError("groups and rounds_per_group must be positive")


def mixed_nash(payoffs: PayoffMatrix) -> EquilibriumPoint:
    """Solve the two indifference equations for the interior mixed equilibrium.

    q* makes X indifferent between X1 and X2; p* makes Y indifferent.
    Raises DegenerateGame if either indifference denominator vanishes and
    NoInteriorEquilibrium if the solution is not strictly inside (0, 1)^2;
    boundary points are rejected because downstream analysis assumes an
    interior mean.
    """
    da = payoffs.a11 - payoffs.a12 - payoffs.a21 + payoffs.a22
    db = payoffs.b11 - payoffs.b12 - payoffs.b21 + payoffs.b22
    if da == 0.0 or db == 0.0:
        raise DegenerateGame("indifference denominator is zero")
    q_star = (payoffs.a22 - payoffs.a12) / da
    p_star = (payoffs.b22 - payoffs.b21) / db
    if not (0.0 < p_star < 1.0 and 0.0 < q_star < 1.0):
        raise NoInteriorEquilibrium(
            f"indifference point ({p_star:.6g}, {q_star:.6g}) is not interior")
    return EquilibriumPoint(p_star=p_star, q_star=q_star)


# Built-in catalog, cells in the order (a11,b11, a12,b12, a21,b21, a22,b22).
# Ids 1-6 are constant-sum games run with 12 groups; 7-12 are non-constant-sum
# run with 6 groups.  All groups play 200 rounds.
_CATALOG_CELLS = {
    1: (10, 8, 0, 18, 9, 9, 10, 8),
    2: (9, 4, 0, 13, 6, 7, 8, 5),
    3: (8, 6, 0, 14, 7, 7, 10, 4),
    4: (7, 4, 0, 11, 5, 6, 9, 2),
    5: (7, 2, 0, 9, 4, 5, 8, 1),
    6: (7, 1, 1, 7, 3, 5, 8, 0),
    7: (10, 12, 4, 22, 9, 9, 14, 8),
    8: (9, 7, 3, 16, 6, 7, 11, 5),
    9: (8, 9, 3, 17, 7, 7, 13, 4),
    10: (7, 6, 2, 13, 5, 6, 11, 2),
    11: (7, 4, 2, 11, 4, 5, 10, 1),
    12: (7, 3, 3, 9, 3, 5, 10, 0),
}

ROUNDS_PER_GROUP = 200


def _treatment_from_cells(tid: int, cells: tuple) -> Treatment:
    a11, b11, a12, b12, a21, b21, a22, b22 = cells
    return Treatment(
        id=tid,
        payoffs=PayoffMatrix(a11=a11, a12=a12, a21=a21, a22=a22,
                             b11=b11, b12=b12, b21=b21, b22=b22),
        groups=12 if tid <= 6 else 6,
        rounds_per_group=ROUNDS_PER_GROUP,
    )


def treatment_catalog() -> list[Treatment]:
    """The twelve built-in treatments, ordered by id."""
    return [_treatment_from_cells(tid, _CATALOG_CELLS[tid])
            for tid in sorted(_CATALOG_CELLS)]


def get_treatment(tid: int) -> Treatment:
    """Look up a built-in treatment by id (1-12)."""
    if tid not in _CATALOG_CELLS:
        raise KeyError(f"unknown treatment id {tid}; catalog has 1-12")
    return _treatment_from_cells(tid, _CATALOG_CELLS[tid])
