"""The plateau game: Alice hides a grid shift, Bob queries torus points.

Bob wins on the first query outside the hidden plateau region
P_a = { x : far-count between a and x exceeds n/2 }.  The first-round win
probability is the exact binomial tail p_exact(n) = P(Bin(n, 1/3) >= ceil(n/2)),
and the linear bound P(win within m rounds) <= p_exact * m holds for every
strategy, adaptive or not (Alice's answers are always "yes" until the end,
so adaptivity buys nothing).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ._parallel import chunk_ranges, run_chunks
from .rng import RandomStack
from .torus import GRID_BASE, GridShift, TorusPoint, far_count_array, hamming_d

Strategy = Callable[[int, RandomStack, list], TorusPoint]
"""A strategy maps (round index, stack, past answers) to the next query point."""


@dataclass(frozen=True)
class PlateauRegion:
    """P_center = points whose FAR count from the center exceeds n/2."""

    n: int
    center: GridShift

    def __post_init__(self):
        if self.center.n != self.n:
            raise ValueError("center dimension must equal n")

    @property
    def threshold(self) -> float:
        return self.n / 2

    def contains(self, x: TorusPoint) -> bool:
        return hamming_d(self.center, x) > self.threshold

    def contains_array(self, points: np.ndarray) -> np.ndarray:
        return far_count_array(points, self.center.trits) > self.threshold


@dataclass
class GameRecord:
    hidden: GridShift
    queries: list[TorusPoint]
    win_round: Optional[int]  # None = censored at max_rounds


@dataclass(frozen=True)
class BoundsRow:
    n: int
    delta: float  # (2/3)^(n/2): plateau height bound
    p_exact: float  # exact binomial tail, sup over x of P(x not in P_A)
    p_hoeffding: float  # e^(-n/36)
    p_exact_fraction: Fraction


def delta_bound(n: int) -> float:
    return (2.0 / 3.0) ** (n / 2)


def p_exact_fraction(n: int) -> Fraction:
    """P(Bin(n, 1/3) >= ceil(n/2)) as an exact rational.

    A query point misses P_A iff at least ceil(n/2) coordinates are NEAR
    the hidden shift; per coordinate the near-probability is exactly 1/3
    for tie-free x, and the supremum over x is attained there.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k0 = math.ceil(n / 2)
    total = Fraction(0)
    for k in range(k0, n + 1):
        total += Fraction(math.comb(n, k) * 2 ** (n - k), 3**n)
    return total


def bounds(n: int) -> BoundsRow:
    frac = p_exact_fraction(n)
    return BoundsRow(
        n=n,
        delta=delta_bound(n),
        p_exact=float(frac),
        p_hoeffding=math.exp(-n / 36),
        p_exact_fraction=frac,
    )


def in_plateau(region: PlateauRegion, x: TorusPoint) -> bool:
    """True iff the FAR count from the region center strictly exceeds n/2."""
    return region.contains(x)


# --- strategies -------------------------------------------------------------

def uniform_strategy(n: int) -> Strategy:
    def strat(round_idx: int, stack: RandomStack, answers: list) -> TorusPoint:
        u = stack.pop_batch(n)
        return TorusPoint((u + 1.0) / 2.0)

    return strat


def grid_sweep_strategy(n: int) -> Strategy:
    total = GRID_BASE**n

    def strat(round_idx: int, stack: RandomStack, answers: list) -> TorusPoint:
        return GridShift.from_index(n, (round_idx - 1) % total).to_point()

    return strat


def adaptive_strategy(n: int) -> Strategy:
    """Heuristic that reacts to answers: after a "yes" (still inside the
    plateau), nudge one coordinate of the previous query by a grid step;
    after enough failures, restart uniformly."""
    state: dict = {"last": None}

    def strat(round_idx: int, stack: RandomStack, answers: list) -> TorusPoint:
        last = state["last"]
        if last is None or not answers or (round_idx - 1) % n == 0:
            u = stack.pop_batch(n)
            x = TorusPoint((u + 1.0) / 2.0)
        else:
            j = (round_idx - 1) % n
            coords = list(last.coords)
            coords[j] += 1.0 / GRID_BASE
            x = TorusPoint(coords)
        state["last"] = x
        return x

    return strat


STRATEGIES: dict[str, Callable[[int], Strategy]] = {
    "uniform": uniform_strategy,
    "grid": grid_sweep_strategy,
    "adaptive": adaptive_strategy,
}


def make_strategy(name: str, n: int) -> Strategy:
    try:
        return STRATEGIES[name](n)
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}") from None


# --- game simulation --------------------------------------------------------

def play_game(
    n: int,
    hidden: GridShift,
    strategy: Strategy,
    max_rounds: int,
    stack: RandomStack,
) -> GameRecord:
    """Run one game; Alice answers membership truthfully; censor at max_rounds."""
    region = PlateauRegion(n, hidden)
    queries: list[TorusPoint] = []
    answers: list[bool] = []
    for r in range(1, max_rounds + 1):
        x = strategy(r, stack, answers)
        if len(x) != n:
            raise ValueError("strategy produced a point of wrong dimension")
        queries.append(x)
        inside = region.contains(x)
        if not inside:
            return GameRecord(hidden, queries, r)
        answers.append(inside)
    return GameRecord(hidden, queries, None)


def _draw_hidden(n: int, stack: RandomStack) -> GridShift:
    u = stack.pop()
    idx = min(int((u + 1.0) / 2.0 * GRID_BASE**n), GRID_BASE**n - 1)
    return GridShift.from_index(n, idx)


def win_round_counts(
    n: int, strategy_name: str, start: int, count: int, m_max: int, seed: int
) -> np.ndarray:
    """Win-round histogram (length m_max) for trials [start, start+count)."""
    counts = np.zeros(m_max, dtype=np.int64)
    for trial in range(start, start + count):
        stack = RandomStack(seed, trial)
        hidden = _draw_hidden(n, stack)
        rec = play_game(n, hidden, make_strategy(strategy_name, n), m_max, stack)
        if rec.win_round is not None:
            counts[rec.win_round - 1] += 1
    return counts


@dataclass(frozen=True)
class WinCdfRow:
    m: int
    cdf: float
    stderr: float
    bound: float  # p_exact * m
    exceeded: bool  # cdf > bound + 3 * stderr


def estimate_win_cdf(
    n: int,
    strategy_name: str,
    games: int,
    m_max: int,
    seed: int,
    workers: int = 1,
) -> list[WinCdfRow]:
    """Empirical CDF of the win round, with the linear first-round bound."""
    if games < 1:
        raise ValueError("games must be >= 1")
    if m_max < 1:
        return []
    chunks = [
        (n, strategy_name, s, c, m_max, seed) for s, c in chunk_ranges(games)
    ]
    counts = sum(run_chunks(win_round_counts, chunks, workers))
    p = float(p_exact_fraction(n))
    rows = []
    cum = 0
    for m in range(1, m_max + 1):
        cum += int(counts[m - 1])
        cdf = cum / games
        stderr = math.sqrt(cdf * (1.0 - cdf) / games)
        bound = p * m
        rows.append(WinCdfRow(m, cdf, stderr, bound, cdf > bound + 3 * stderr))
    return rows
