"""The discrete social-state lattice and observation tallies.

A social state (i, j) counts how many of the n X-agents played X1 and how
many of the n Y-agents played Y1, so the lattice has (n+1)^2 states.  Each
state pools C(n,i)*C(n,j) individual action profiles (its degeneracy).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import EmptySession, MixedPopulationSize, OutOfRange


@dataclass(frozen=True, slots=True)
class SocialState:
    """One round's aggregate outcome for populations of size n."""

    i: int
    j: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise OutOfRange(f"population size must be positive, got {self.n}")
        if not (0 <= self.i <= self.n and 0 <= self.j <= self.n):
            raise OutOfRange(
                f"state ({self.i}, {self.j}) outside lattice for n={self.n}")

    @property
    def coords(self) -> tuple[float, float]:
        """Position in the unit square: (i/n, j/n)."""
        return (self.i / self.n, self.j / self.n)


@dataclass(frozen=True)
class MeanObservation:
    """Mean of the observed state coordinates: the two-moment constraint vector."""

    o_p: float
    o_q: float

    def __post_init__(self):
        if not (0.0 <= self.o_p <= 1.0 and 0.0 <= self.o_q <= 1.0):
            raise ValueError(f"mean observation ({self.o_p}, {self.o_q}) "
                             "outside the unit square")


def degeneracy(n: int, i: int, j: int) -> int:
    """Number of individual action profiles mapping to state (i, j): C(n,i)*C(n,j).

    Exact integer arithmetic; the degeneracies over the whole lattice sum
    to 2^(2n).
    """
    if not (0 <= i <= n and 0 <= j <= n):
        raise OutOfRange(f"({i}, {j}) outside lattice for n={n}")
    return math.comb(n, i) * math.comb(n, j)


def lattice_cells(n: int) -> Iterator[tuple[int, int]]:
    """All (i, j) cells in row-major order (i outer, j inner).

    Every float accumulation over the lattice iterates in this order so
    sums are bit-stable across runs.
    """
    for i in range(n + 1):
        for j in range(n + 1):
            yield (i, j)


class LatticeDistribution:
    """Observation counts over the lattice with their total round count."""

    def __init__(self, n: int, counts: Mapping[tuple[int, int], int],
                 total: int | None = None):
        clean: dict[tuple[int, int], int] = {}
        for (i, j), c in counts.items():
            if not (0 <= i <= n and 0 <= j <= n):
                raise OutOfRange(f"count cell ({i}, {j}) outside lattice for n={n}")
            if c < 0:
                raise ValueError(f"negative count at ({i}, {j})")
            if c:
                clean[(i, j)] = int(c)
        observed = sum(clean.values())
        if total is None:
            total = observed
        if observed != total:
            raise ValueError(f"counts sum to {observed}, expected total {total}")
        if total < 1:
            raise EmptySession("a distribution needs at least one observation")
        self.n = n
        self.counts = clean
        self.total = total

    def count(self, i: int, j: int) -> int:
        return self.counts.get((i, j), 0)

    def density(self, i: int, j: int) -> float:
        return self.counts.get((i, j), 0) / self.total

    def densities(self) -> dict[tuple[int, int], float]:
        """Full-grid density map in row-major order."""
        return {cell: self.counts.get(cell, 0) / self.total
                for cell in lattice_cells(self.n)}

    def __eq__(self, other) -> bool:
        return (isinstance(other, LatticeDistribution)
                and self.n == other.n and self.total == other.total
                and self.counts == other.counts)

    def __repr__(self) -> str:
        return (f"LatticeDistribution(n={self.n}, total={self.total}, "
                f"support={len(self.counts)} cells)")


def tally(states: Iterable[SocialState], n: int) -> LatticeDistribution:
    """Pool a round sequence into per-state counts.

    All states must share the population size n; an empty sequence is an
    error rather than an empty distribution.
    """
    counter: Counter[tuple[int, int]] = Counter()
    total = 0
    for state in states:
        if state.n != n:
            raise MixedPopulationSize(
                f"state with n={state.n} in a tally for n={n}")
        counter[(state.i, state.j)] += 1
        total += 1
    if total == 0:
        raise EmptySession("cannot tally an empty state sequence")
    return LatticeDistribution(n=n, counts=counter, total=total)


def mean_observation(dist: LatticeDistribution) -> MeanObservation:
    """First moments of the state coordinates: (sum rho_ij * i/n, sum rho_ij * j/n)."""
    o_p = 0.0
    o_q = 0.0
    n = dist.n
    for (i, j) in lattice_cells(n):
        c = dist.counts.get((i, j))
        if c:
            rho = c / dist.total
            o_p += rho * (i / n)
            o_q += rho * (j / n)
    return MeanObservation(o_p=min(o_p, 1.0), o_q=min(o_q, 1.0))
