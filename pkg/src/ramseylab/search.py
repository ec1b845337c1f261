"""Exact arrowing decisions and small Ramsey numbers.

Three decision procedures are available:

``pruned``
    depth-first search over the edges of K_N in lexicographic order. A branch
    dies as soon as the newest edge completes a monochromatic copy; colors
    are introduced in ascending order of first use, so edge (0, 1) is always
    color 0. The first surviving leaf is the lexicographically least
    copy-free coloring, used as the canonical witness.
``orderly``
    two-colorings only. Copy-free colorings of K_n are grown one vertex at a
    time and kept up to isomorphism and red/blue swap, which reaches larger
    N than the edge search.
``exhaustive``
    every one of the q^C(N,2) colorings is checked against a precomputed
    list of all copies. Slow, and kept independent of the other two so it
    can serve as their oracle.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from pathlib import Path
from typing import Sequence

import networkx as nx
import numpy as np

from .coloring import EdgeColoring, Verification, lex_edges, random_coloring, verify_free
from .config import LimitExceeded, default_limits
from .graph import Graph, iter_bits

METHODS = ("pruned", "orderly", "exhaustive")
MAX_AUTOMORPHISMS = 20_000


# --- pattern preprocessing ------------------------------------------------


@dataclass(frozen=True)
class _Anchor:
    """Core vertices in placement order, starting with an edge's two ends."""

    order: tuple[int, ...]
    back: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class _Plan:
    order: int  # pattern vertex count, isolated vertices included
    core: Graph
    anchors: tuple[_Anchor, ...]


def _edge_orbit_representatives(g: Graph) -> list[tuple[int, int]]:
    """One oriented edge per orbit of Aut(g); finer orbits if Aut(g) is huge."""
    oriented = [(u, v) for u, v in g.edges()] + [(v, u) for u, v in g.edges()]
    parent = {e: e for e in oriented}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges())
    matcher = nx.algorithms.isomorphism.GraphMatcher(nxg, nxg)
    for count, auto in enumerate(matcher.isomorphisms_iter()):
        if count >= MAX_AUTOMORPHISMS:
            break
        for e in oriented:
            a, b = find(e), find((auto[e[0]], auto[e[1]]))
            if a != b:
                parent[max(a, b)] = min(a, b)
    return sorted({find(e) for e in oriented})


def _anchor_for(core: Graph, u: int, v: int) -> _Anchor:
    placed = [u, v]
    mask = (1 << u) | (1 << v)
    rest = [x for x in range(core.n) if x not in (u, v)]
    while rest:
        # most already-placed neighbors first, then higher degree, then index
        best = max(rest, key=lambda x: ((core.rows[x] & mask).bit_count(), core.degree(x), -x))
        rest.remove(best)
        placed.append(best)
        mask |= 1 << best
    pos = {x: i for i, x in enumerate(placed)}
    back = tuple(
        tuple(pos[y] for y in iter_bits(core.rows[x]) if pos[y] < i) for i, x in enumerate(placed)
    )
    return _Anchor(tuple(placed), back)


@lru_cache(maxsize=256)
def _plan(pattern: Graph) -> _Plan:
    core_vertices = [v for v in range(pattern.n) if pattern.rows[v]]
    core = pattern.induced(core_vertices)
    anchors = tuple(_anchor_for(core, u, v) for u, v in _edge_orbit_representatives(core))
    return _Plan(pattern.n, core, anchors)


def _copy_through(rows: Sequence[int], full: int, anchor: _Anchor, i: int, j: int) -> bool:
    """Is there a copy of the core mapping the anchor edge onto (i, j)?"""
    back = anchor.back
    m = len(back)
    img = [0] * m
    img[0], img[1] = i, j

    def extend(p: int, used: int) -> bool:
        if p == m:
            return True
        cand = full & ~used
        for b in back[p]:
            cand &= rows[img[b]]
        while cand:
            low = cand & -cand
            img[p] = low.bit_length() - 1
            if extend(p + 1, used | low):
                return True
            cand ^= low
        return False

    return extend(2, (1 << i) | (1 << j))


def _completes_copy(plan: _Plan, rows: Sequence[int], full: int, i: int, j: int) -> bool:
    for anchor in plan.anchors:
        if _copy_through(rows, full, anchor, i, j) or _copy_through(rows, full, anchor, j, i):
            return True
    return False


# --- pruned edge search ---------------------------------------------------


class _Budget:
    def __init__(self, max_nodes: int | None):
        self.max_nodes = max_nodes
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise LimitExceeded(f"search exceeded {self.max_nodes} nodes")


def _edge_search(
    N: int,
    q: int,
    pattern: Graph,
    prefix: Sequence[int] = (),
    budget: _Budget | None = None,
    stop_depth: int | None = None,
) -> list[list[int]]:
    """Copy-free colorings in lexicographic order under color symmetry breaking.

    With ``stop_depth`` None, returns at most the first full coloring extending
    ``prefix``. Otherwise returns every surviving partial coloring of the first
    ``stop_depth`` edges (used to split work between processes).
    """
    plan = _plan(pattern)
    budget = budget or _Budget(None)
    edges = lex_edges(N)
    full = (1 << N) - 1
    rows = [[0] * N for _ in range(q)]
    colors: list[int] = []
    target = len(edges) if stop_depth is None else stop_depth
    found: list[list[int]] = []
    has_edges = plan.core.n > 0

    def assign(e: int, c: int) -> bool:
        i, j = edges[e]
        rows[c][i] |= 1 << j
        rows[c][j] |= 1 << i
        colors.append(c)
        return not (has_edges and _completes_copy(plan, rows[c], full, i, j))

    def undo(e: int, c: int) -> None:
        i, j = edges[e]
        rows[c][i] &= ~(1 << j)
        rows[c][j] &= ~(1 << i)
        colors.pop()

    max_used = -1
    for e, c in enumerate(prefix):
        if c > max_used + 1:
            return []
        max_used = max(max_used, c)
        if not assign(e, c):
            return []

    def dfs(e: int, max_used: int) -> bool:
        if e == target:
            found.append(colors.copy())
            return stop_depth is None
        for c in range(min(q, max_used + 2)):
            budget.tick()
            ok = assign(e, c)
            if ok and dfs(e + 1, max(max_used, c)):
                return True
            undo(e, c)
        return False

    dfs(len(prefix), max_used)
    return found


def _subtree_worker(args) -> list[int] | None:
    N, q, pattern, prefix, max_nodes = args
    found = _edge_search(N, q, pattern, prefix, _Budget(max_nodes))
    return found[0] if found else None


def _parallel_decision(N: int, q: int, pattern: Graph, workers: int, max_nodes: int | None) -> bool:
    """True if some copy-free coloring exists, exploring subtrees in processes."""
    total = len(lex_edges(N))
    depth = 1
    while True:
        prefixes = _edge_search(N, q, pattern, budget=_Budget(max_nodes), stop_depth=depth)
        if not prefixes:
            return False
        if depth == total:
            return True
        if len(prefixes) >= 4 * workers:
            break
        depth += 1
    jobs = [(N, q, pattern, tuple(p), max_nodes) for p in prefixes]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_subtree_worker, job) for job in jobs]
        try:
            for fut in futures:
                if fut.result() is not None:
                    return True
        finally:
            for fut in futures:
                fut.cancel()
    return False


# --- exhaustive oracle ----------------------------------------------------


def all_copy_masks(N: int, pattern: Graph) -> list[int]:
    """Edge sets (bit e = e-th lexicographic edge of K_N) of every copy of pattern."""
    index = {e: k for k, e in enumerate(lex_edges(N))}
    pedges = list(pattern.edges())
    masks = set()
    for phi in permutations(range(N), pattern.n):
        m = 0
        for u, v in pedges:
            a, b = phi[u], phi[v]
            m |= 1 << index[(a, b) if a < b else (b, a)]
        masks.add(m)
    return sorted(masks)


EXHAUSTIVE_LIMIT = 1 << 22


def arrows_exhaustive(N: int, pattern: Graph, q: int) -> tuple[bool, EdgeColoring | None]:
    """Check every coloring, in lexicographic order of its color sequence."""
    E = math.comb(N, 2)
    total = q**E
    if total > EXHAUSTIVE_LIMIT:
        raise LimitExceeded(f"exhaustive search over {q}^{E} colorings is too large")
    if pattern.n > N:
        return False, EdgeColoring(N, q, (0,) * E)
    masks = np.array(all_copy_masks(N, pattern), dtype=np.int64)
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, E), dtype=np.int64)
    for e in range(E):
        digits[:, e] = (idx // q ** (E - 1 - e)) % q
    weights = np.int64(1) << np.arange(E, dtype=np.int64)
    hit = np.zeros(total, dtype=bool)
    for c in range(q):
        cmask = ((digits == c).astype(np.int64) * weights).sum(axis=1)
        for m in masks:
            hit |= (cmask & m) == m
    free = np.flatnonzero(~hit)
    if free.size == 0:
        return True, None
    first = int(free[0])
    return False, EdgeColoring(N, q, tuple(int(x) for x in digits[first]))


# --- orderly vertex extension (two colors) ---------------------------------


def _invariant(rows: Sequence[int], n: int) -> tuple:
    deg = [r.bit_count() for r in rows]
    tri = [sum((rows[v] & rows[u]).bit_count() for u in iter_bits(rows[v])) // 2 for v in range(n)]
    return tuple(
        sorted((deg[v], tri[v], tuple(sorted(deg[u] for u in iter_bits(rows[v])))) for v in range(n))
    )


def _to_nx(rows: Sequence[int], n: int) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for v in range(n):
        for u in iter_bits(rows[v] >> (v + 1)):
            g.add_edge(v, v + 1 + u)
    return g


class _IsoStore:
    """Red graphs kept up to isomorphism and complementation."""

    def __init__(self, n: int):
        self.n = n
        self.full = (1 << n) - 1
        self.buckets: dict[tuple, list[tuple[tuple[int, ...], nx.Graph]]] = {}
        self.items: list[tuple[int, ...]] = []

    def add(self, rows: tuple[int, ...]) -> None:
        comp = tuple(self.full & ~r & ~(1 << v) for v, r in enumerate(rows))
        ki, kc = _invariant(rows, self.n), _invariant(comp, self.n)
        if kc < ki:
            rows, comp, ki = comp, rows, kc
        bucket = self.buckets.setdefault(ki, [])
        g = _to_nx(rows, self.n)
        alt = _to_nx(comp, self.n) if _invariant(comp, self.n) == ki else None
        for _, other in bucket:
            if nx.is_isomorphic(g, other) or (alt is not None and nx.is_isomorphic(alt, other)):
                return
        bucket.append((rows, g))
        self.items.append(rows)


def _orderly_levels(pattern: Graph, upto: int, budget: _Budget):
    """Yield (n, two-colorings of K_n free of the pattern's non-isolated part,
    up to isomorphism and color swap) for n = 1, 2, ... until a level is empty.
    """
    plan = _plan(pattern)
    has_edges = plan.core.n > 0
    level: list[tuple[int, ...]] = [(0,)]
    yield 1, level
    for n in range(2, upto + 1):
        store = _IsoStore(n)
        full = (1 << n) - 1
        new = n - 1
        old_full = (1 << new) - 1
        for red in level:
            rows = [
                [*red, 0],
                [old_full & ~r & ~(1 << v) for v, r in enumerate(red)] + [0],
            ]

            def extend(j: int) -> None:
                if j == new:
                    store.add(tuple(rows[0]))
                    return
                for c in (0, 1):
                    budget.tick()
                    rows[c][new] |= 1 << j
                    rows[c][j] |= 1 << new
                    if not (has_edges and _completes_copy(plan, rows[c], full, j, new)):
                        extend(j + 1)
                    rows[c][new] &= ~(1 << j)
                    rows[c][j] &= ~(1 << new)

            extend(0)
        level = store.items
        yield n, level
        if not level:
            return


def _red_rows_to_coloring(rows: Sequence[int], n: int) -> EdgeColoring:
    return EdgeColoring.from_function(n, 2, lambda i, j: 0 if rows[i] >> j & 1 else 1)


# --- public API -------------------------------------------------------------


@dataclass(frozen=True)
class ArrowResult:
    arrows: bool
    witness: EdgeColoring | None
    method: str


def _check_limits(N: int, limit: int | None) -> None:
    limit = default_limits().search_n if limit is None else limit
    if N > limit:
        raise LimitExceeded(f"N = {N} exceeds the search limit {limit}")


def canonical_witness(
    N: int, pattern: Graph, q: int, max_nodes: int | None = None
) -> EdgeColoring | None:
    """Lexicographically least copy-free q-coloring of K_N, if any."""
    if pattern.n > N:
        return EdgeColoring(N, q, (0,) * math.comb(N, 2))
    found = _edge_search(N, q, pattern, budget=_Budget(max_nodes))
    return EdgeColoring(N, q, tuple(found[0])) if found else None


def arrows(
    N: int,
    pattern: Graph,
    q: int = 2,
    *,
    method: str = "pruned",
    limit: int | None = None,
    max_nodes: int | None = None,
    workers: int = 1,
) -> ArrowResult:
    """Decide whether every q-coloring of K_N has a monochromatic copy of ``pattern``.

    When it does not, the result carries the canonical (lexicographically
    least) copy-free coloring, always computed by a single-threaded pass.
    """
    if q < 1:
        raise ValueError("q must be positive")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    _check_limits(N, limit)
    if pattern.n > N:
        return ArrowResult(False, canonical_witness(N, pattern, q), method)
    if pattern.edge_count == 0 or N < 2:
        return ArrowResult(True, None, method)
    if method == "exhaustive":
        result, witness = arrows_exhaustive(N, pattern, q)
        return ArrowResult(result, witness, method)
    if method == "orderly":
        if q != 2:
            raise ValueError("orderly search handles two colors only")
        budget = _Budget(max_nodes)
        for n, level in _orderly_levels(pattern, N, budget):
            if not level:
                return ArrowResult(True, None, method)
        return ArrowResult(False, canonical_witness(N, pattern, q, max_nodes), method)
    if workers > 1:
        if not _parallel_decision(N, q, pattern, workers, max_nodes):
            return ArrowResult(True, None, method)
    witness = canonical_witness(N, pattern, q, max_nodes)
    return ArrowResult(witness is None, witness, method)


@dataclass(frozen=True)
class RamseyCertificate:
    pattern: Graph
    q: int
    value: int
    witness: EdgeColoring
    method: str
    transcript: Verification

    def check(self, rerun_arrows: bool = True, **kwargs) -> bool:
        """Re-verify the witness and, optionally, re-prove arrowing at ``value``."""
        if self.witness.N != self.value - 1 or self.witness.q != self.q:
            return False
        if not verify_free(self.witness, self.pattern).free:
            return False
        if rerun_arrows:
            return arrows(self.value, self.pattern, self.q, method=self.method, **kwargs).arrows
        return True


def ramsey_number(
    pattern: Graph,
    q: int = 2,
    *,
    method: str = "pruned",
    limit: int | None = None,
    max_nodes: int | None = None,
    workers: int = 1,
) -> RamseyCertificate:
    """Least N such that K_N arrows ``pattern`` in q colors, with a witness on N - 1.

    The scan starts at N = |V(pattern)|. The default edge search yields the
    canonical witness; ``method="orderly"`` reaches further for two colors.
    """
    if pattern.n == 0:
        raise ValueError("pattern must have at least one vertex")
    limit = default_limits().search_n if limit is None else limit
    if method == "orderly":
        if q != 2:
            raise ValueError("orderly search handles two colors only")
        # isolated vertices only raise the answer to |V(pattern)|:
        # r(core + isolated) = max(r(core), |V|)
        core_value, core_witness = pattern.n, None
        if pattern.edge_count:
            core_value = None
            prev: list[tuple[int, ...]] = []
            for n, level in _orderly_levels(pattern, limit, _Budget(max_nodes)):
                if not level:
                    core_value = n
                    core_witness = _red_rows_to_coloring(prev[0], n - 1)
                    break
                prev = level
            if core_value is None:
                raise LimitExceeded(f"no arrowing found up to N = {limit}")
        value = max(core_value, pattern.n)
        if value == core_value and core_witness is not None:
            witness = core_witness
        else:
            witness = canonical_witness(value - 1, pattern, q)
    else:
        value = None
        witness = None
        for N in range(pattern.n, limit + 1):
            res = arrows(N, pattern, q, method=method, limit=limit, max_nodes=max_nodes, workers=workers)
            if res.arrows:
                value = N
                break
            witness = res.witness
        if value is None:
            raise LimitExceeded(f"no arrowing found up to N = {limit}")
        if witness is None:
            witness = canonical_witness(value - 1, pattern, q)
    transcript = verify_free(witness, pattern)
    return RamseyCertificate(pattern, q, value, witness, method, transcript)


# --- certificates on disk ---------------------------------------------------

CERT_FORMAT = "ramseylab-certificate 1"


def write_certificate(cert: RamseyCertificate, directory: str | Path, label: str = "") -> Path:
    """Write ``cert.json``, ``pattern.graph`` and ``witness.rcol`` into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    (out / "pattern.graph").write_text(cert.pattern.to_text())
    cert.witness.save(out / "witness.rcol")
    meta = {
        "format": CERT_FORMAT,
        "pattern": label,
        "pattern_file": "pattern.graph",
        "q": cert.q,
        "value": cert.value,
        "method": cert.method,
        "witness_file": "witness.rcol",
        "witness_vertices": cert.witness.N,
        "witness_free": cert.transcript.free,
    }
    (out / "cert.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return out


def read_certificate(directory: str | Path) -> RamseyCertificate:
    """Load a certificate; the witness transcript is recomputed, not trusted."""
    base = Path(directory)
    meta = json.loads((base / "cert.json").read_text())
    if meta.get("format") != CERT_FORMAT:
        raise ValueError(f"{base / 'cert.json'}: unknown certificate format")
    pattern = Graph.from_text((base / meta["pattern_file"]).read_text())
    witness = EdgeColoring.load(base / meta["witness_file"])
    return RamseyCertificate(
        pattern, int(meta["q"]), int(meta["value"]), witness, meta["method"], verify_free(witness, pattern)
    )


# --- probabilistic lower bound ----------------------------------------------


@dataclass(frozen=True)
class ExpectedCopyBound:
    """k! * C(N, k) * 2^(1 - dk/2), held exactly as ``coefficient * sqrt(2)**odd``."""

    k: int
    d: int
    N: int
    coefficient: Fraction
    times_sqrt2: bool

    def __float__(self) -> float:
        return float(self.coefficient) * (math.sqrt(2) if self.times_sqrt2 else 1.0)

    def less_than(self, bound: Fraction | int) -> bool:
        bound = Fraction(bound)
        if not self.times_sqrt2:
            return self.coefficient < bound
        if bound <= 0:
            return False
        return 2 * self.coefficient**2 < bound**2

    def upper_rational(self, denominator: int = 10**12) -> Fraction:
        """Smallest multiple of 1/denominator that is at least the exact value."""
        if not self.times_sqrt2:
            return self.coefficient
        square = 2 * self.coefficient**2 * denominator**2
        p, r = square.numerator, square.denominator
        root = math.isqrt(p // r)
        while root * root * r < p:
            root += 1
        return Fraction(root, denominator)


def expected_mono_copies(k: int, d: int, N: int) -> ExpectedCopyBound:
    """Expected labeled monochromatic copies of a k-vertex, dk/2-edge graph in a random K_N."""
    if k < 2 or d < 1 or N < 0:
        raise ValueError("need k >= 2, d >= 1, N >= 0")
    base = Fraction(math.factorial(k) * math.comb(N, k))
    exponent2 = 2 - d * k  # twice the exponent of 2
    coefficient = base * Fraction(2) ** (exponent2 // 2)
    return ExpectedCopyBound(k, d, N, coefficient, bool(exponent2 % 2))


def mono_copies(c: EdgeColoring, pattern: Graph, limit: int | None = None) -> list[tuple[int, tuple[int, ...]]]:
    """Distinct monochromatic copies as (color, sorted vertex images).

    Two embeddings are the same copy when they use the same edge set in the
    same color. Stops after ``limit`` copies.
    """
    found: list[tuple[int, tuple[int, ...]]] = []
    if pattern.n > c.N:
        return found
    seen: set = set()
    edges = list(pattern.edges())
    for col in range(c.q):
        for phi in _all_embeddings(pattern, c.color_rows[col], c.N):
            key = (col, frozenset(frozenset((phi[u], phi[v])) for u, v in edges))
            if key in seen:
                continue
            seen.add(key)
            found.append((col, tuple(sorted(phi))))
            if limit is not None and len(found) >= limit:
                return found
    return found


def count_labeled_mono_copies(c: EdgeColoring, pattern: Graph) -> int:
    """Injective maps of ``pattern`` into a single color class, summed over colors."""
    if pattern.n > c.N:
        return 0
    return sum(sum(1 for _ in _all_embeddings(pattern, c.color_rows[col], c.N)) for col in range(c.q))


def _all_embeddings(pattern: Graph, rows: Sequence[int], N: int):
    order = list(range(pattern.n))
    phi = [-1] * pattern.n
    full = (1 << N) - 1

    def rec(p: int, used: int):
        if p == len(order):
            yield tuple(phi)
            return
        v = order[p]
        cand = full & ~used
        for u in iter_bits(pattern.rows[v] & ((1 << v) - 1)):
            cand &= rows[phi[u]]
        for x in iter_bits(cand):
            phi[v] = x
            yield from rec(p + 1, used | 1 << x)
        phi[v] = -1

    yield from rec(0, 0)


def random_lb_witness(
    pattern_core: Graph, d: int, attempts: int | None = None, seed: int = 0
) -> EdgeColoring | None:
    """Random two-colorings of K_N, N = ceil(2^(d/2)), with at most one copy,
    minus one vertex of that copy.

    Attempt ``t`` uses seed ``seed + t``. Returns a copy-free coloring of
    K_{N-1}, or None if every attempt had two or more copies.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if pattern_core.min_degree() < d:
        raise ValueError(f"pattern core has minimum degree {pattern_core.min_degree()} < d = {d}")
    attempts = default_limits().random_attempts if attempts is None else attempts
    N = math.isqrt(2**d)
    if N * N < 2**d:
        N += 1
    for t in range(attempts):
        c = random_coloring(N, 2, seed + t)
        copies = mono_copies(c, pattern_core, limit=2)
        if len(copies) >= 2:
            continue
        drop = copies[0][1][0] if copies else N - 1
        return c.delete_vertex(drop)
    return None
