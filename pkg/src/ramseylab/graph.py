"""Simple undirected graphs on bit-row adjacency, and the structural
algorithms the rest of the package is built on.

Vertex ``v``'s neighborhood is stored as an ``int`` whose bit ``u`` is set
when ``uv`` is an edge, so neighborhood intersection is ``&`` and degree is
``int.bit_count``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .config import LimitExceeded, default_limits


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full or row < 0:
                raise ValueError(f"vertex {v} has a neighbor outside [0, {self.n})")
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            for u in iter_bits(row):
                if not self.rows[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @property
    def all_vertices(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.rows]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.rows):
            for v in iter_bits(row >> (u + 1)):
                yield u, u + 1 + v

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def complement(self) -> Graph:
        full = self.all_vertices
        return Graph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.rows)))

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Subgraph induced on ``vertices``; vertex ``vertices[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise ValueError("induced subgraph vertices must be distinct")
        edges = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        return Graph.from_edges(len(vertices), edges)

    def delete_vertex(self, v: int) -> Graph:
        return self.induced([u for u in range(self.n) if u != v])

    def add_apex(self) -> Graph:
        """Add vertex ``n`` adjacent to every existing vertex."""
        n = self.n
        rows = [row | 1 << n for row in self.rows]
        rows.append(self.all_vertices)
        return Graph(n + 1, tuple(rows))

    def disjoint_union(self, other: Graph) -> Graph:
        shift = self.n
        return Graph(self.n + other.n, self.rows + tuple(row << shift for row in other.rows))

    def isolated_vertices(self) -> list[int]:
        return [v for v, row in enumerate(self.rows) if not row]

    def to_text(self) -> str:
        lines = [f"GRAPH {self.n}"]
        for v, row in enumerate(self.rows):
            later = [str(u) for u in iter_bits(row >> (v + 1) << (v + 1))]
            lines.append(f"{v}:" + "".join(" " + u for u in later))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Graph:
        lines = text.splitlines()
        if not lines:
            raise GraphFormatError("empty graph file")
        header = lines[0].split()
        if len(header) != 2 or header[0] != "GRAPH":
            raise GraphFormatError(f"bad header {lines[0]!r}; expected 'GRAPH <n>'")
        try:
            n = int(header[1])
        except ValueError:
            raise GraphFormatError(f"bad vertex count {header[1]!r}") from None
        if n < 0:
            raise GraphFormatError("negative vertex count")
        body = lines[1:]
        while body and not body[-1].strip():
            body.pop()
        if len(body) != n:
            raise GraphFormatError(f"expected {n} vertex lines, got {len(body)}")
        edges = []
        for i, line in enumerate(body):
            label, sep, rest = line.partition(":")
            if not sep or label.strip() != str(i):
                raise GraphFormatError(f"line {i + 2}: expected '{i}: ...'")
            try:
                nbrs = [int(tok) for tok in rest.split()]
            except ValueError:
                raise GraphFormatError(f"line {i + 2}: non-integer neighbor") from None
            prev = i
            for j in nbrs:
                if j == i:
                    raise GraphFormatError(f"line {i + 2}: loop at vertex {i}")
                if j >= n or j < 0:
                    raise GraphFormatError(f"line {i + 2}: neighbor {j} out of range")
                if j < i:
                    raise GraphFormatError(
                        f"line {i + 2}: neighbor {j} < {i}; only later neighbors are listed"
                    )
                if j <= prev:
                    raise GraphFormatError(f"line {i + 2}: neighbors must be strictly ascending")
                prev = j
                edges.append((i, j))
        return cls.from_edges(n, edges)


@dataclass(frozen=True)
class DegeneracyOrder:
    order: tuple[int, ...]
    degeneracy: int

    def back_degrees(self, g: Graph) -> list[int]:
        """Number of neighbors of each vertex that precede it in the order."""
        seen = 0
        back = [0] * g.n
        for v in self.order:
            back[v] = (g.rows[v] & seen).bit_count()
            seen |= 1 << v
        return back


@dataclass(frozen=True)
class Embedding:
    """Injective map from guest vertex ``i`` to host vertex ``mapping[i]``."""

    mapping: tuple[int, ...]

    def is_valid(self, guest: Graph, host: Graph) -> bool:
        m = self.mapping
        if len(m) != guest.n or len(set(m)) != len(m):
            return False
        if any(not 0 <= x < host.n for x in m):
            return False
        return all(host.has_edge(m[u], m[v]) for u, v in guest.edges())


def degeneracy_order(g: Graph) -> DegeneracyOrder:
    """Peel a minimum-degree vertex (lowest index on ties) until none remain.

    The reversed peel sequence is an ordering in which every vertex has at
    most ``degeneracy`` earlier neighbors, and the largest degree seen at
    peel time is the degeneracy itself.
    """
    remaining = g.all_vertices
    peel: list[int] = []
    d = 0
    rows = g.rows
    while remaining:
        best_v, best_deg = -1, g.n + 1
        for v in iter_bits(remaining):
            deg = (rows[v] & remaining).bit_count()
            if deg < best_deg:
                best_v, best_deg = v, deg
        d = max(d, best_deg)
        peel.append(best_v)
        remaining &= ~(1 << best_v)
    return DegeneracyOrder(tuple(reversed(peel)), d)


def min_degree_core(g: Graph, d: int) -> list[int]:
    """Vertices of the largest subgraph with minimum degree >= d (possibly empty)."""
    remaining = g.all_vertices
    changed = True
    while changed:
        changed = False
        for v in iter_bits(remaining):
            if (g.rows[v] & remaining).bit_count() < d:
                remaining &= ~(1 << v)
                changed = True
    return list(iter_bits(remaining))


def connected_components(g: Graph) -> list[frozenset[int]]:
    unseen = g.all_vertices
    comps = []
    while unseen:
        start = unseen & -unseen
        comp = start
        frontier = start
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= g.rows[v]
            frontier = reach & ~comp
            comp |= frontier
        unseen &= ~comp
        comps.append(frozenset(iter_bits(comp)))
    return comps


def _greedy_color_bound(rows: Sequence[int], cand: int) -> tuple[list[int], list[int]]:
    """Sequential greedy coloring of ``cand``; vertices listed by color class."""
    order: list[int] = []
    bounds: list[int] = []
    color = 0
    uncolored = cand
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~rows[v] & ~(1 << v)
            uncolored &= ~(1 << v)
            order.append(v)
            bounds.append(color)
    return order, bounds


def _clique_search(rows: Sequence[int], cand: int, target: int | None) -> list[int]:
    """Maximum clique within ``cand`` (or the first clique of size ``target``)."""
    best: list[int] = []

    def expand(clique: list[int], p: int) -> bool:
        nonlocal best
        order, bounds = _greedy_color_bound(rows, p)
        for idx in range(len(order) - 1, -1, -1):
            reach = len(clique) + bounds[idx]
            if reach <= len(best) or (target is not None and reach < target):
                return False
            v = order[idx]
            clique.append(v)
            sub = p & rows[v]
            if sub:
                if expand(clique, sub):
                    return True
            elif len(clique) > len(best):
                best = clique.copy()
                if target is not None and len(best) >= target:
                    return True
            clique.pop()
            p &= ~(1 << v)
        return False

    if cand:
        expand([], cand)
    return best


def max_clique(g: Graph, limit: int | None = None) -> frozenset[int]:
    """An exact maximum clique, by greedy-coloring branch and bound."""
    limit = default_limits().max_clique_vertices if limit is None else limit
    if g.n > limit:
        raise LimitExceeded(f"max_clique: {g.n} vertices exceeds limit {limit}")
    return frozenset(_clique_search(g.rows, g.all_vertices, None))


def find_clique(g: Graph, k: int, within: int | None = None) -> list[int] | None:
    """Some k-clique inside the vertex mask ``within``, or None."""
    cand = g.all_vertices if within is None else within
    if k <= 0:
        return []
    if cand.bit_count() < k:
        return None
    found = _clique_search(g.rows, cand, k)
    return sorted(found[:k]) if len(found) >= k else None


def _colorable(rows: Sequence[int], n: int, k: int) -> bool:
    colors = [-1] * n

    def pick() -> int:
        # DSATUR: most distinct neighbor colors, then highest degree, then lowest index
        best, key = -1, None
        for v in range(n):
            if colors[v] >= 0:
                continue
            sat = {colors[u] for u in iter_bits(rows[v]) if colors[u] >= 0}
            cand = (len(sat), rows[v].bit_count(), -v)
            if key is None or cand > key:
                best, key = v, cand
        return best

    def solve(colored: int, used: int) -> bool:
        if colored == n:
            return True
        v = pick()
        banned = {colors[u] for u in iter_bits(rows[v])}
        for c in range(min(used + 1, k)):
            if c in banned:
                continue
            colors[v] = c
            if solve(colored + 1, max(used, c + 1)):
                return True
        colors[v] = -1
        return False

    return solve(0, 0)


def chromatic_number(g: Graph, limit: int | None = None) -> int:
    limit = default_limits().chromatic_vertices if limit is None else limit
    if g.n > limit:
        raise LimitExceeded(f"chromatic_number: {g.n} vertices exceeds limit {limit}")
    if g.n == 0:
        return 0
    k = max(1, len(_clique_search(g.rows, g.all_vertices, None)))
    while not _colorable(g.rows, g.n, k):
        k += 1
    return k


def contains_subgraph(host: Graph, pattern: Graph) -> Embedding | None:
    """Backtracking search for a (not necessarily induced) copy of ``pattern``.

    Pattern vertices are placed in degeneracy order; host candidates are
    tried in ascending index order.
    """
    if pattern.n > host.n:
        return None
    order = degeneracy_order(pattern).order
    placed_before = []
    seen = 0
    for v in order:
        placed_before.append([u for u in iter_bits(pattern.rows[v] & seen)])
        seen |= 1 << v
    phi = [-1] * pattern.n
    hrows = host.rows
    full = host.all_vertices

    def place(i: int, used: int) -> bool:
        if i == len(order):
            return True
        cand = full & ~used
        for u in placed_before[i]:
            cand &= hrows[phi[u]]
        v = order[i]
        for x in iter_bits(cand):
            phi[v] = x
            if place(i + 1, used | 1 << x):
                return True
        phi[v] = -1
        return False

    if place(0, 0):
        return Embedding(tuple(phi))
    return None


class EmbeddingPreconditionError(ValueError):
    def __init__(self, message: str, vertex: int | None = None):
        super().__init__(message)
        self.vertex = vertex


def greedy_embed(guest: Graph, host: Graph, d: int) -> Embedding:
    """Embed a d-degenerate guest into a host missing few edges at every vertex.

    Requires every host vertex to have at most ``(N - n) / d`` non-neighbors.
    Guest vertices are placed in degeneracy order, each onto the lowest unused
    host vertex adjacent to the images of its earlier neighbors.
    """
    n, big_n = guest.n, host.n
    if n > big_n:
        raise EmbeddingPreconditionError(f"guest has {n} vertices but host only {big_n}")
    if d < 0:
        raise EmbeddingPreconditionError("d must be nonnegative")
    if d == 0:
        if guest.edge_count:
            raise EmbeddingPreconditionError("d = 0 requires an edgeless guest")
        return Embedding(tuple(range(n)))
    dorder = degeneracy_order(guest)
    if dorder.degeneracy > d:
        back = dorder.back_degrees(guest)
        worst = max(range(n), key=lambda v: back[v])
        raise EmbeddingPreconditionError(
            f"guest has degeneracy {dorder.degeneracy} > d = {d}", vertex=worst
        )
    for x in range(big_n):
        missing = big_n - 1 - host.degree(x)
        if missing * d > big_n - n:
            raise EmbeddingPreconditionError(
                f"host vertex {x} has {missing} non-neighbors > ({big_n} - {n}) / {d}",
                vertex=x,
            )
    phi = [-1] * n
    used = 0
    placed = 0
    for v in dorder.order:
        cand = host.all_vertices & ~used
        for u in iter_bits(guest.rows[v] & placed):
            cand &= host.rows[phi[u]]
        if not cand:
            # unreachable when the preconditions hold
            raise EmbeddingPreconditionError(f"no candidate for guest vertex {v}", vertex=v)
        x = (cand & -cand).bit_length() - 1
        phi[v] = x
        used |= 1 << x
        placed |= 1 << v
    return Embedding(tuple(phi))
