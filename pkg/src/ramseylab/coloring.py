"""Edge-colorings of complete graphs: construction, file format, and
monochromatic-copy detection.

Colors are integers ``0 .. q-1``. In two-colorings color 0 is called red
and color 1 blue.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Sequence

import numpy as np

from .graph import (
    Embedding,
    Graph,
    connected_components,
    contains_subgraph,
    find_clique,
    iter_bits,
)

RED, BLUE = 0, 1
COLOR_NAMES = {RED: "red", BLUE: "blue"}


class ColoringFormatError(ValueError):
    pass


class PatternError(ValueError):
    pass


def edge_index(n: int, i: int, j: int) -> int:
    """Position of edge {i, j} in lexicographic order over pairs of [0, n)."""
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def lex_edges(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


@dataclass(frozen=True)
class EdgeColoring:
    """A q-coloring of E(K_N), colors stored in lexicographic edge order."""

    N: int
    q: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        if self.q < 1:
            raise ValueError("q must be at least 1")
        if len(self.colors) != comb(self.N, 2):
            raise ValueError(f"expected {comb(self.N, 2)} edge colors, got {len(self.colors)}")
        for c in self.colors:
            if not 0 <= c < self.q:
                raise ValueError(f"color {c} outside [0, {self.q})")

    @classmethod
    def from_function(cls, n: int, q: int, color_of) -> EdgeColoring:
        return cls(n, q, tuple(color_of(i, j) for i, j in combinations(range(n), 2)))

    def color(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("no edge at a single vertex")
        return self.colors[edge_index(self.N, i, j)]

    @cached_property
    def color_rows(self) -> tuple[tuple[int, ...], ...]:
        rows = [[0] * self.N for _ in range(self.q)]
        for (i, j), c in zip(combinations(range(self.N), 2), self.colors):
            rows[c][i] |= 1 << j
            rows[c][j] |= 1 << i
        return tuple(tuple(r) for r in rows)

    def color_graph(self, c: int) -> Graph:
        return Graph(self.N, self.color_rows[c])

    def edge_counts(self) -> list[int]:
        counts = [0] * self.q
        for c in self.colors:
            counts[c] += 1
        return counts

    def densities(self) -> list[Fraction]:
        total = comb(self.N, 2)
        if total == 0:
            raise ValueError("densities need at least one edge")
        return [Fraction(k, total) for k in self.edge_counts()]

    def restrict(self, vertices: Sequence[int]) -> EdgeColoring:
        """Induced coloring on ``vertices``; ``vertices[i]`` becomes vertex ``i``."""
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("restriction vertices must be distinct")
        return EdgeColoring(
            len(vs), self.q, tuple(self.color(vs[a], vs[b]) for a, b in combinations(range(len(vs)), 2))
        )

    def delete_vertex(self, v: int) -> EdgeColoring:
        return self.restrict([u for u in range(self.N) if u != v])

    def permute_colors(self, perm: Sequence[int]) -> EdgeColoring:
        return EdgeColoring(self.N, self.q, tuple(perm[c] for c in self.colors))

    def to_text(self) -> str:
        lines = ["RCOL 1", f"{self.N} {self.q}"]
        pos = 0
        for i in range(self.N - 1):
            width = self.N - 1 - i
            lines.append(" ".join(str(c) for c in self.colors[pos : pos + width]))
            pos += width
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> EdgeColoring:
        lines = text.splitlines()
        while lines and not lines[-1].strip():
            lines.pop()
        if len(lines) < 2 or lines[0].strip() != "RCOL 1":
            raise ColoringFormatError("expected 'RCOL 1' header followed by '<N> <q>'")
        try:
            n, q = (int(tok) for tok in lines[1].split())
        except ValueError:
            raise ColoringFormatError(f"bad size line {lines[1]!r}") from None
        if n < 0 or q < 1:
            raise ColoringFormatError(f"bad size line {lines[1]!r}")
        rows = lines[2:]
        if len(rows) != max(n - 1, 0):
            raise ColoringFormatError(f"expected {max(n - 1, 0)} color rows, got {len(rows)}")
        colors: list[int] = []
        for i, line in enumerate(rows):
            try:
                vals = [int(tok) for tok in line.split()]
            except ValueError:
                raise ColoringFormatError(f"row {i}: non-integer color") from None
            if len(vals) != n - 1 - i:
                raise ColoringFormatError(f"row {i}: expected {n - 1 - i} colors, got {len(vals)}")
            for c in vals:
                if not 0 <= c < q:
                    raise ColoringFormatError(f"row {i}: color {c} outside [0, {q})")
            colors.extend(vals)
        return cls(n, q, tuple(colors))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> EdgeColoring:
        return cls.from_text(Path(path).read_text())


# --- patterns -------------------------------------------------------------

PATTERN_KINDS = ("clique", "hkn", "gkn", "hprime", "path", "cycle", "file")


@dataclass(frozen=True)
class PatternSpec:
    kind: str
    params: tuple[int, ...] = ()
    path: str | None = None

    def __post_init__(self) -> None:
        kind, p = self.kind, self.params
        if kind not in PATTERN_KINDS:
            raise PatternError(f"unknown pattern kind {kind!r}")
        if kind == "file":
            if not self.path:
                raise PatternError("file pattern needs a path")
            return
        want = 2 if kind in ("hkn", "gkn", "hprime") else 1
        if len(p) != want:
            raise PatternError(f"{kind} takes {want} parameter(s), got {len(p)}")
        if kind in ("hkn", "gkn", "hprime"):
            k, n = p
            if k < 1 or n < k:
                raise PatternError(f"{kind} needs 1 <= k <= n, got k={k}, n={n}")
            if kind == "hprime" and n % k:
                raise PatternError(f"hprime needs k | n, got k={k}, n={n}")
        elif kind == "cycle" and p[0] < 3:
            raise PatternError("cycle needs at least 3 vertices")
        elif p[0] < 1:
            raise PatternError(f"{kind} needs a positive size")

    def __str__(self) -> str:
        if self.kind == "file":
            return f"file:{self.path}"
        return f"{self.kind}:" + ",".join(map(str, self.params))


def parse_pattern(text: str) -> PatternSpec:
    """Parse ``kind:params``, e.g. ``gkn:3,6``, ``clique:4``, ``file:g.txt``."""
    kind, sep, rest = text.strip().partition(":")
    if not sep:
        raise PatternError(f"pattern {text!r} is not of the form kind:params")
    if kind == "file":
        return PatternSpec("file", path=rest)
    try:
        params = tuple(int(tok) for tok in rest.split(","))
    except ValueError:
        raise PatternError(f"pattern {text!r} has non-integer parameters") from None
    return PatternSpec(kind, params)


def clique_plus_isolated(k: int, n: int) -> Graph:
    return Graph.complete(k).disjoint_union(Graph.empty(n - k))


def build_pattern(spec: PatternSpec | str) -> Graph:
    if isinstance(spec, str):
        spec = parse_pattern(spec)
    p = spec.params
    if spec.kind == "clique":
        return Graph.complete(p[0])
    if spec.kind == "hkn":
        return clique_plus_isolated(*p)
    if spec.kind == "gkn":
        return clique_plus_isolated(*p).add_apex()
    if spec.kind == "hprime":
        k, n = p
        g = Graph.empty(0)
        for _ in range(n // k):
            g = g.disjoint_union(Graph.complete(k))
        return g
    if spec.kind == "path":
        n = p[0]
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if spec.kind == "cycle":
        n = p[0]
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    try:
        return Graph.from_text(Path(spec.path).read_text())
    except OSError as exc:
        raise PatternError(f"cannot read pattern file {spec.path}: {exc}") from exc


# --- constructions --------------------------------------------------------


def turan_coloring(k: int, n: int) -> EdgeColoring:
    """K_{nk} split into k blocks of n consecutive vertices; red inside blocks, blue across."""
    if k < 2 or n < 1:
        raise ValueError(f"turan coloring needs k >= 2 and n >= 1, got k={k}, n={n}")
    return EdgeColoring.from_function(n * k, 2, lambda i, j: RED if i // n == j // n else BLUE)


def pentagon_coloring() -> EdgeColoring:
    """K_5 with the 5-cycle 0-1-2-3-4 red and its complement (the pentagram) blue."""
    return EdgeColoring.from_function(5, 2, lambda i, j: RED if (j - i) % 5 in (1, 4) else BLUE)


def product_coloring(base: EdgeColoring, n: int) -> EdgeColoring:
    """Blow up each vertex of ``base`` into a block of n vertices.

    Cross-block edges inherit the base color of their blocks; edges inside
    a block get the one new color ``base.q``.
    """
    if n < 1:
        raise ValueError("block size must be positive")
    inner = base.q

    def color_of(i: int, j: int) -> int:
        bi, bj = i // n, j // n
        return inner if bi == bj else base.color(bi, bj)

    return EdgeColoring.from_function(base.N * n, base.q + 1, color_of)


PRNG_NAME = "numpy PCG64 raw 64-bit output, color = (raw * q) >> 64"


def random_coloring(N: int, q: int, seed: int) -> EdgeColoring:
    """Uniform random q-coloring from PCG64 seeded with ``seed``.

    Colors come from the raw 64-bit stream by multiply-shift, which keeps
    the output identical across platforms and numpy versions.
    """
    if q < 2:
        raise ValueError("random colorings need q >= 2")
    m = comb(N, 2)
    raw = np.random.PCG64(seed).random_raw(m) if m else []
    return EdgeColoring(N, q, tuple((int(x) * q) >> 64 for x in raw))


def color_classes_partition(c: EdgeColoring) -> bool:
    """Check the color-class graphs are edge-disjoint and together form K_N."""
    union = [0] * c.N
    for rows in c.color_rows:
        for v, row in enumerate(rows):
            if union[v] & row:
                return False
            union[v] |= row
    return Graph(c.N, tuple(union)) == Graph.complete(c.N)


# --- monochromatic copies -------------------------------------------------


@dataclass(frozen=True)
class FamilyShape:
    """A pattern recognised as H_{k,n}, G_{k,n} or H'_{k,n}, with its vertex roles."""

    kind: str
    k: int
    n: int
    cliques: tuple[tuple[int, ...], ...]
    isolated: tuple[int, ...] = ()
    apex: int | None = None


def _is_clique(g: Graph, vs: frozenset[int]) -> bool:
    return all(g.has_edge(u, v) for u, v in combinations(sorted(vs), 2))


def _clique_shape(g: Graph) -> FamilyShape | None:
    comps = connected_components(g)
    big = [c for c in comps if len(c) > 1]
    isolated = tuple(sorted(v for c in comps if len(c) == 1 for v in c))
    if not all(_is_clique(g, c) for c in big):
        return None
    if not big:
        # edgeless: a single vertex is the K_1
        if g.n == 0:
            return None
        return FamilyShape("hkn", 1, g.n, ((isolated[0],),), isolated[1:])
    if len(big) == 1:
        clique = tuple(sorted(big[0]))
        return FamilyShape("hkn", len(clique), g.n, (clique,), isolated)
    sizes = {len(c) for c in big}
    if len(sizes) == 1 and not isolated:
        k = sizes.pop()
        return FamilyShape("hprime", k, g.n, tuple(tuple(sorted(c)) for c in big))
    return None


def recognize_family(g: Graph) -> FamilyShape | None:
    """Recognise H_{k,n}, H'_{k,n}, or G_{k,n} (tried in that order)."""
    shape = _clique_shape(g)
    if shape is not None:
        return shape
    full = g.all_vertices
    for a in range(g.n):
        if g.rows[a] == full & ~(1 << a):
            rest = [v for v in range(g.n) if v != a]
            inner = _clique_shape(g.induced(rest))
            if inner is None or inner.kind != "hkn":
                return None
            relabel = lambda vs: tuple(rest[v] for v in vs)  # noqa: E731
            return FamilyShape(
                "gkn",
                inner.k,
                g.n - 1,
                (relabel(inner.cliques[0]),),
                relabel(inner.isolated),
                apex=a,
            )
    return None


def _disjoint_cliques(host: Graph, k: int, count: int) -> list[list[int]] | None:
    rows = host.rows

    def search(avail: int, need: int) -> list[list[int]] | None:
        if need == 0:
            return []
        if avail.bit_count() < need * k:
            return None
        u = (avail & -avail).bit_length() - 1
        rest = avail & ~(1 << u)
        # cliques through u, then skip u
        for others in combinations(list(iter_bits(rows[u] & rest)), k - 1):
            if all(rows[a] >> b & 1 for a, b in combinations(others, 2)):
                used = (1 << u) | sum(1 << x for x in others)
                sub = search(avail & ~used, need - 1)
                if sub is not None:
                    return [[u, *others], *sub]
        return search(rest, need)

    return search(host.all_vertices, count)


def _special_copy(host: Graph, shape: FamilyShape, order: int) -> Embedding | None:
    if host.n < order:
        return None
    phi = [-1] * order
    if shape.kind == "hkn":
        clique = find_clique(host, shape.k)
        if clique is None:
            return None
        spare = [x for x in range(host.n) if x not in clique]
        for v, x in zip(shape.cliques[0], clique):
            phi[v] = x
        for v, x in zip(shape.isolated, spare):
            phi[v] = x
        return Embedding(tuple(phi))
    if shape.kind == "gkn":
        for apex in range(host.n):
            nbhd = host.rows[apex]
            if nbhd.bit_count() < shape.n:
                continue
            clique = find_clique(host, shape.k, nbhd)
            if clique is None:
                continue
            phi[shape.apex] = apex
            for v, x in zip(shape.cliques[0], clique):
                phi[v] = x
            spare = [x for x in iter_bits(nbhd) if x not in clique]
            for v, x in zip(shape.isolated, spare):
                phi[v] = x
            return Embedding(tuple(phi))
        return None
    cliques = _disjoint_cliques(host, shape.k, len(shape.cliques))
    if cliques is None:
        return None
    for pat, img in zip(shape.cliques, cliques):
        for v, x in zip(pat, img):
            phi[v] = x
    return Embedding(tuple(phi))


def find_mono_copy(
    c: EdgeColoring, pattern: Graph, color: int, method: str = "auto"
) -> Embedding | None:
    """A copy of ``pattern`` whose edges all have color ``color``, or None.

    ``method`` is "generic" (backtracking subgraph search), "special"
    (structure-aware search for the clique/apex families; raises for other
    patterns) or "auto" (special when the pattern is recognised).
    """
    host = c.color_graph(color)
    if method not in ("auto", "generic", "special"):
        raise ValueError(f"unknown method {method!r}")
    if method != "generic":
        shape = recognize_family(pattern)
        if shape is not None:
            return _special_copy(host, shape, pattern.n)
        if method == "special":
            raise PatternError("pattern is not H_{k,n}, G_{k,n} or H'_{k,n}")
    return contains_subgraph(host, pattern)


@dataclass(frozen=True)
class Verification:
    pattern: Graph
    q: int
    copies: tuple[Embedding | None, ...]

    @property
    def free(self) -> bool:
        return all(e is None for e in self.copies)

    def lines(self) -> list[str]:
        out = []
        for col, emb in enumerate(self.copies):
            name = COLOR_NAMES.get(col, f"color{col}") if self.q == 2 else f"color{col}"
            if emb is None:
                out.append(f"{name}: absent")
            else:
                out.append(f"{name}: present " + " ".join(map(str, emb.mapping)))
        out.append("verdict: " + ("free" if self.free else "not free"))
        return out


def verify_free(c: EdgeColoring, pattern: Graph, method: str = "auto") -> Verification:
    return Verification(
        pattern, c.q, tuple(find_mono_copy(c, pattern, col, method) for col in range(c.q))
    )


@dataclass(frozen=True)
class ColorBalance:
    counts: tuple[int, ...]
    densities: tuple[Fraction, ...] = field(repr=False)


def color_balance(c: EdgeColoring) -> ColorBalance:
    return ColorBalance(tuple(c.edge_counts()), tuple(c.densities()))
