import itertools
import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramseylab.coloring import (
    BLUE,
    RED,
    ColoringFormatError,
    EdgeColoring,
    PatternError,
    build_pattern,
    color_classes_partition,
    find_mono_copy,
    parse_pattern,
    pentagon_coloring,
    product_coloring,
    random_coloring,
    recognize_family,
    turan_coloring,
    verify_free,
)
from ramseylab.graph import Graph, connected_components


@st.composite
def colorings(draw, max_n=9, max_q=4):
    n = draw(st.integers(0, max_n))
    q = draw(st.integers(2, max_q))
    cols = draw(st.lists(st.integers(0, q - 1), min_size=comb(n, 2), max_size=comb(n, 2)))
    return EdgeColoring(n, q, tuple(cols))


def mono(n, q=2, color=0):
    return EdgeColoring(n, q, (color,) * comb(n, 2))


# --- patterns ---------------------------------------------------------------


@pytest.mark.parametrize(
    "spec, n, m",
    [
        ("hkn:3,6", 6, 3),
        ("gkn:2,3", 4, 4),
        ("hprime:2,4", 4, 2),
        ("gkn:3,6", 7, 9),
        ("hprime:3,9", 9, 9),
        ("clique:4", 4, 6),
        ("path:4", 4, 3),
        ("cycle:5", 5, 5),
    ],
)
def test_pattern_sizes(spec, n, m):
    g = build_pattern(spec)
    assert (g.n, g.edge_count) == (n, m)


@pytest.mark.parametrize("k, n", [(k, n) for k in range(1, 5) for n in range(k, 8)])
def test_family_edge_counts(k, n):
    assert build_pattern(f"hkn:{k},{n}").edge_count == comb(k, 2)
    assert build_pattern(f"gkn:{k},{n}").edge_count == comb(k, 2) + n
    if n % k == 0:
        assert build_pattern(f"hprime:{k},{n}").edge_count == n // k * comb(k, 2)


def test_gkn_shape():
    g = build_pattern("gkn:2,3")
    # triangle 0-1-apex plus pendant 2-apex
    assert g.degrees() == [2, 2, 1, 3]
    assert recognize_family(g).kind == "gkn"
    assert recognize_family(build_pattern("hprime:2,4")).kind == "hprime"
    assert recognize_family(build_pattern("path:4")) is None


@pytest.mark.parametrize(
    "text", ["hkn:3,2", "hkn:0,3", "hprime:2,5", "gkn:3", "clique", "blob:3", "hkn:a,b"]
)
def test_pattern_rejects(text):
    with pytest.raises(PatternError):
        build_pattern(parse_pattern(text))


def test_pattern_from_file(tmp_path):
    g = build_pattern("cycle:4")
    path = tmp_path / "c4.graph"
    path.write_text(g.to_text())
    assert build_pattern(f"file:{path}") == g
    with pytest.raises(PatternError):
        build_pattern(f"file:{tmp_path / 'missing'}")


# --- constructions ------------------------------------------------------------


def test_turan_examples():
    c = turan_coloring(2, 3)
    assert (c.N, c.edge_counts()) == (6, [6, 9])
    c = turan_coloring(3, 6)
    assert c.N == 18
    assert sorted(map(sorted, connected_components(c.color_graph(RED)))) == [
        list(range(0, 6)), list(range(6, 12)), list(range(12, 18))
    ]
    assert turan_coloring(2, 1).edge_counts() == [0, 1]
    with pytest.raises(ValueError):
        turan_coloring(1, 3)


def test_pentagon_is_triangle_free_in_both_colors():
    c = pentagon_coloring()
    for a, b, d in itertools.combinations(range(5), 3):
        assert len({c.color(a, b), c.color(a, d), c.color(b, d)}) == 2
    assert c.edge_counts() == [5, 5]


def test_product_examples():
    c = product_coloring(pentagon_coloring(), 3)
    assert (c.N, c.q) == (15, 3)
    comps = [comp for comp in connected_components(c.color_graph(2)) if len(comp) > 1]
    assert sorted(map(sorted, comps)) == [list(range(3 * b, 3 * b + 3)) for b in range(5)]
    assert c.edge_counts()[2] == 15

    c = product_coloring(mono(2, q=1), 2)
    assert (c.N, c.q) == (4, 2)
    assert sorted(c.color_graph(1).edges()) == [(0, 1), (2, 3)]
    assert c.edge_counts() == [4, 2]

    c = product_coloring(EdgeColoring(1, 1, ()), 5)
    assert c.N == 5 and set(c.colors) == {1}


def test_random_examples():
    assert random_coloring(5, 2, 7) == random_coloring(5, 2, 7)
    assert random_coloring(5, 2, 7) != random_coloring(5, 2, 8)
    c = random_coloring(3, 3, 1)
    assert len(c.colors) == 3 and set(c.colors) <= {0, 1, 2}
    mean = sum(random_coloring(40, 2, s).densities()[RED] for s in range(100)) / 100
    assert abs(mean - Fraction(1, 2)) < Fraction(1, 20)


def test_random_is_pinned():
    # frozen output guards against silent changes of the generator
    assert random_coloring(5, 2, 0).colors == (1, 0, 0, 0, 1, 1, 1, 1, 1, 1)
    assert "".join(map(str, random_coloring(6, 3, 42).colors)) == "212202220112121"


# --- serialization ------------------------------------------------------------------


def test_rcol_exact_bytes():
    assert turan_coloring(2, 2).to_text() == "RCOL 1\n4 2\n0 1 1\n1 1\n0\n"
    assert EdgeColoring(1, 2, ()).to_text() == "RCOL 1\n1 2\n"


def test_rcol_round_trip_200():
    rng = random.Random(200)
    for t in range(200):
        c = random_coloring(rng.randint(0, 14), rng.randint(2, 5), t)
        assert EdgeColoring.from_text(c.to_text()) == c


@given(colorings())
def test_rcol_round_trip_property(c):
    assert EdgeColoring.from_text(c.to_text()) == c


@pytest.mark.parametrize(
    "text",
    [
        "RCOL 2\n3 2\n0 1\n1\n",
        "RCOL 1\n3 2\n0 1\n",  # missing row
        "RCOL 1\n3 2\n0 1 1\n1\n",  # row too long
        "RCOL 1\n3 2\n0 2\n1\n",  # color out of range
        "RCOL 1\n3 x\n0 1\n1\n",
        "RCOL 1\n3 2\n0 1\n1\n0\n",  # extra row
    ],
)
def test_rcol_rejects(text):
    with pytest.raises(ColoringFormatError):
        EdgeColoring.from_text(text)


def test_save_load(tmp_path):
    c = product_coloring(pentagon_coloring(), 2)
    c.save(tmp_path / "p.rcol")
    assert EdgeColoring.load(tmp_path / "p.rcol") == c


# --- partition and densities ----------------------------------------------------------


@given(colorings(max_n=10))
def test_densities_and_partition(c):
    assert color_classes_partition(c)
    assert sum(c.edge_counts()) == comb(c.N, 2)
    if c.N >= 2:
        assert sum(c.densities()) == 1


def test_restrict_and_permute():
    c = turan_coloring(2, 3)
    sub = c.restrict([0, 3, 1])
    assert sub.colors == (BLUE, RED, BLUE)
    assert c.permute_colors([1, 0]).edge_counts() == [9, 6]
    assert c.delete_vertex(0).N == 5


# --- monochromatic copies ---------------------------------------------------------------


def test_find_mono_copy_examples():
    t = turan_coloring(2, 3)
    g23 = build_pattern("gkn:2,3")
    for method in ("special", "generic"):
        assert find_mono_copy(t, g23, RED, method) is None
        assert find_mono_copy(t, g23, BLUE, method) is None
    h23 = build_pattern("hkn:2,3")
    rng = random.Random(3)
    for _ in range(20):
        c = random_coloring(6, 2, rng.randrange(1 << 30))
        for col in (RED, BLUE):
            if c.edge_counts()[col]:
                emb = find_mono_copy(c, h23, col)
                assert emb is not None and emb.is_valid(h23, c.color_graph(col))


def test_special_rejects_unknown_shape():
    with pytest.raises(PatternError):
        find_mono_copy(mono(5), build_pattern("path:4"), 0, "special")
    with pytest.raises(ValueError):
        find_mono_copy(mono(5), build_pattern("path:4"), 0, "fast")


FAMILY_SPECS = [
    "hkn:1,3", "hkn:2,3", "hkn:2,5", "hkn:3,4", "hkn:3,6", "hkn:4,5",
    "gkn:1,2", "gkn:2,2", "gkn:2,3", "gkn:2,5", "gkn:3,3", "gkn:3,5",
    "hprime:2,4", "hprime:2,6", "hprime:3,6", "hprime:1,3",
]


def test_special_agrees_with_generic_on_100_random_colorings():
    rng = random.Random(100)
    patterns = [build_pattern(s) for s in FAMILY_SPECS]
    for t in range(100):
        c = random_coloring(rng.randint(3, 12), rng.choice([2, 2, 3]), t)
        for g in patterns:
            for col in range(c.q):
                fast = find_mono_copy(c, g, col, "special")
                slow = find_mono_copy(c, g, col, "generic")
                assert (fast is None) == (slow is None), (t, g, col)
                if fast is not None:
                    assert fast.is_valid(g, c.color_graph(col))


def test_special_agrees_on_permuted_patterns():
    # recognition must not depend on vertex labels
    rng = random.Random(9)
    for spec in FAMILY_SPECS:
        g = build_pattern(spec)
        perm = list(range(g.n))
        rng.shuffle(perm)
        h = Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])
        assert recognize_family(h).kind == recognize_family(g).kind
        c = random_coloring(9, 2, 5)
        for col in (RED, BLUE):
            assert (find_mono_copy(c, h, col, "special") is None) == (
                find_mono_copy(c, h, col, "generic") is None
            )


@pytest.mark.parametrize("k, n", [(k, n) for k in (2, 3, 4) for n in range(max(k, 2), 7)])
def test_turan_free_of_gkn(k, n):
    c = turan_coloring(k, n)
    g = build_pattern(f"gkn:{k},{n}")
    assert verify_free(c, g, "special").free
    assert verify_free(c, g, "generic").free


@pytest.mark.parametrize("n", [2, 3, 4])
def test_product_pentagon_free_of_g2n(n):
    c = product_coloring(pentagon_coloring(), n)
    g = build_pattern(f"gkn:2,{n}")
    for method in ("special", "generic"):
        v = verify_free(c, g, method)
        assert v.free and len(v.copies) == 3


def test_verify_transcripts():
    v = verify_free(turan_coloring(3, 6), build_pattern("gkn:3,6"))
    assert v.lines() == ["red: absent", "blue: absent", "verdict: free"]
    v = verify_free(mono(5), build_pattern("clique:3"))
    assert not v.free
    assert v.lines()[0].startswith("red: present ")
    assert v.lines()[-1] == "verdict: not free"
    v = verify_free(product_coloring(pentagon_coloring(), 3), build_pattern("gkn:2,3"))
    assert v.lines()[:3] == ["color0: absent", "color1: absent", "color2: absent"]


@given(colorings(max_n=7, max_q=3), st.sampled_from(["clique:3", "gkn:2,2", "path:3", "hprime:2,4"]))
def test_verdict_invariant_under_color_permutation(c, spec):
    g = build_pattern(spec)
    perm = list(range(c.q))[::-1]
    assert verify_free(c, g).free == verify_free(c.permute_colors(perm), g).free
