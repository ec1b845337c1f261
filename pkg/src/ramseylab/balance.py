"""Color balance of two-colorings and the neighborhood arguments built on it.

Red is color 0, blue is color 1. ``N_R(v)`` and ``N_B(v)`` are the red and
blue neighborhoods of ``v``; all of them are bit masks over the vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .coloring import BLUE, RED, EdgeColoring, find_mono_copy
from .graph import Embedding, Graph, iter_bits

Number = float | Fraction | int


def _fmt(x: Fraction | None) -> str:
    return "inf" if x is None else f"{float(x):.6f}"


def _two_colors(c: EdgeColoring) -> None:
    if c.q != 2:
        raise ValueError(f"balance analysis needs a two-coloring, got q = {c.q}")
    if c.N < 2:
        raise ValueError("balance analysis needs N >= 2")


@dataclass(frozen=True)
class BalanceReport:
    N: int
    densities: tuple[Fraction, Fraction]
    epsilon_star: Fraction
    cherries: int
    cherries_by_pairs: int
    best_pair: tuple[int, int, int]

    @property
    def common_neighborhood_floor(self) -> Fraction:
        """(epsilon/4)(N - 1), the size a best pair is guaranteed to reach."""
        return self.epsilon_star / 4 * (self.N - 1)

    @property
    def averaging_floor(self) -> Fraction:
        return Fraction(self.cherries, self.N * (self.N - 1))

    def lines(self) -> list[str]:
        v, w, size = self.best_pair
        return [
            f"N: {self.N}",
            f"red_density: {_fmt(self.densities[RED])}",
            f"blue_density: {_fmt(self.densities[BLUE])}",
            f"epsilon_star: {_fmt(self.epsilon_star)}",
            f"cherries: {self.cherries}",
            f"cherries_by_pairs: {self.cherries_by_pairs}",
            f"best_pair: {v} {w}",
            f"best_pair_size: {size}",
            f"averaging_floor: {_fmt(self.averaging_floor)}",
            f"guarantee_floor: {_fmt(self.common_neighborhood_floor)}",
        ]


def balance_report(c: EdgeColoring) -> BalanceReport:
    _two_colors(c)
    N = c.N
    red, blue = c.color_rows[RED], c.color_rows[BLUE]
    dens = c.densities()
    eps = min(min(dens), Fraction(1, 2))
    cherries = sum(r.bit_count() * (N - 1 - r.bit_count()) for r in red)
    by_pairs = 0
    best = (-1, -1, -1)
    for v in range(N):
        rv = red[v]
        for w in range(N):
            if v == w:
                continue
            size = (rv & blue[w]).bit_count()
            by_pairs += size
            if size > best[2]:
                best = (v, w, size)
    return BalanceReport(N, (dens[RED], dens[BLUE]), eps, cherries, by_pairs, best)


def reverse_jensen_bound(
    f: Callable[[Number], Number], s: Number, xs: Sequence[Number]
) -> tuple[Number, Number]:
    """Both sides of  sum f(x_i) <= ((N s - x)/s) f(0) + (x/s) f(s)  for convex f on [0, s]."""
    if s <= 0:
        raise ValueError("s must be positive")
    for x in xs:
        if x < 0 or x > s:
            raise ValueError(f"{x} lies outside [0, {s}]")
    total = sum(xs)
    lhs = sum(f(x) for x in xs)
    rhs = (len(xs) * s - total) / s * f(0) + total / s * f(s)
    return lhs, rhs


def es_clique_order(epsilon: float, N: float, a: float) -> float:
    """a / (eps * log2(1/eps)) * log2(N): monochromatic clique size forced in
    a coloring that is not eps-balanced, for the caller's constant ``a``."""
    if not 0 < epsilon <= 0.5:
        raise ValueError("epsilon must lie in (0, 1/2]")
    if N < 2:
        raise ValueError("N must be at least 2")
    if a <= 0:
        raise ValueError("a must be positive")
    return a / (epsilon * math.log2(1 / epsilon)) * math.log2(N)


@dataclass(frozen=True)
class ChaseTrace:
    v: int
    color: int
    S: tuple[int, ...]
    w: int | None
    T: tuple[int, ...]

    def check(self, c: EdgeColoring) -> bool:
        """T inside S, and every t in T joined to v in ``color`` and to w in the other."""
        if not set(self.T) <= set(self.S):
            return False
        other = 1 - self.color
        return all(c.color(self.v, t) == self.color and c.color(self.w, t) == other for t in self.T)

    def degeneracy_claim(self, n: int, d: int) -> tuple[Fraction, bool]:
        """(|S| - n)/d and whether |T| exceeds it, as claimed for pattern-free colorings."""
        bound = Fraction(len(self.S) - n, d)
        return bound, len(self.T) > bound

    def lines(self) -> list[str]:
        name = "red" if self.color == RED else "blue"
        return [
            f"v: {self.v}",
            f"majority_color: {name}",
            f"S_size: {len(self.S)}",
            "S: " + " ".join(map(str, self.S)),
            f"w: {'none' if self.w is None else self.w}",
            f"T_size: {len(self.T)}",
            "T: " + " ".join(map(str, self.T)),
        ]


def chase_trace(c: EdgeColoring) -> ChaseTrace:
    """Follow vertex 0 into its majority neighborhood S, then the vertex w of S
    with most opposite-color neighbors in S; T is that opposite neighborhood."""
    _two_colors(c)
    v = 0
    red_deg = c.color_rows[RED][v].bit_count()
    blue_deg = c.color_rows[BLUE][v].bit_count()
    color = RED if red_deg >= blue_deg else BLUE
    other = 1 - color
    s_mask = c.color_rows[color][v]
    S = tuple(iter_bits(s_mask))
    if not S:
        return ChaseTrace(v, color, S, None, ())
    orows = c.color_rows[other]
    w = max(S, key=lambda x: ((orows[x] & s_mask).bit_count(), -x))
    T = tuple(iter_bits(orows[w] & s_mask))
    return ChaseTrace(v, color, S, w, T)


@dataclass(frozen=True)
class BalancedTrace:
    N: int
    v: int
    w: int
    S: tuple[int, ...]
    red_copy: Embedding | None
    blue_copy: Embedding | None
    epsilon: Fraction

    @property
    def s_free(self) -> bool:
        return self.red_copy is None and self.blue_copy is None

    @property
    def implied_rhs(self) -> Fraction | None:
        """(4/eps)|S| + 2, which bounds N + 1 from above (None when eps = 0)."""
        if self.epsilon == 0:
            return None
        return 4 / self.epsilon * len(self.S) + 2

    @property
    def implied_bound_holds(self) -> bool:
        rhs = self.implied_rhs
        return rhs is None or self.N + 1 <= rhs

    def lines(self) -> list[str]:
        def show(e):
            return "absent" if e is None else "present " + " ".join(map(str, e.mapping))

        out = [
            f"trace_v: {self.v}",
            f"trace_w: {self.w}",
            f"S_size: {len(self.S)}",
            "S: " + " ".join(map(str, self.S)),
            f"S_red_copy: {show(self.red_copy)}",
            f"S_blue_copy: {show(self.blue_copy)}",
            f"S_free: {'yes' if self.s_free else 'no'}",
            f"N_plus_1: {self.N + 1}",
            f"implied_rhs: {_fmt(self.implied_rhs)}",
            f"implied_bound_holds: {'yes' if self.implied_bound_holds else 'no'}",
        ]
        if self.s_free:
            out.append(f"pattern_ramsey_lb: {len(self.S) + 1}")
        return out


def balanced_trace(c: EdgeColoring, pattern: Graph) -> BalancedTrace:
    """Restrict to S = N_R(v) & N_B(w) for the best pair and look for the pattern there."""
    report = balance_report(c)
    v, w, _ = report.best_pair
    S = tuple(iter_bits(c.color_rows[RED][v] & c.color_rows[BLUE][w]))
    sub = c.restrict(S)
    return BalancedTrace(
        c.N,
        v,
        w,
        S,
        find_mono_copy(sub, pattern, RED),
        find_mono_copy(sub, pattern, BLUE),
        report.epsilon_star,
    )
