import json
import subprocess
import sys

import pytest

from ramseylab.cli import reproduce_main, run
from ramseylab.coloring import EdgeColoring, turan_coloring
from ramseylab.graph import Graph


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out.splitlines(), err


def test_construct_turan_and_verify(tmp_path, capsys):
    path = tmp_path / "t.rcol"
    code, out, _ = call(capsys, "construct", "turan", "--k", 3, "--n", 6, "-o", path)
    assert code == 0 and "N: 18" in out
    c = EdgeColoring.load(path)
    assert (c.N, c.q) == (18, 2)
    code, out, _ = call(capsys, "verify", "--coloring", path, "--pattern", "gkn:3,6")
    assert code == 0 and out[-1] == "verdict: free"
    code, out, _ = call(capsys, "verify", "--coloring", path, "--pattern", "clique:3")
    assert code == 1 and out[-1] == "verdict: not free"


def test_construct_product_from_file(tmp_path, capsys):
    base = tmp_path / "pent.rcol"
    assert call(capsys, "construct", "pentagon", "-o", base)[0] == 0
    out_path = tmp_path / "p.rcol"
    code, out, _ = call(capsys, "construct", "product", "--base", base, "--n", 3, "-o", out_path)
    assert code == 0 and out[:2] == ["N: 15", "q: 3"]
    code, out, _ = call(capsys, "verify", "--coloring", out_path, "--pattern", "gkn:2,3")
    assert code == 0 and out == ["color0: absent", "color1: absent", "color2: absent", "verdict: free"]


def test_construct_random_is_reproducible(tmp_path, capsys):
    for name in ("a", "b"):
        call(capsys, "construct", "random", "--n", 12, "--q", 3, "--seed", 9, "-o", tmp_path / name)
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_arrow(tmp_path, capsys):
    code, out, _ = call(capsys, "arrow", "--pattern", "clique:3", "--n", 6)
    assert code == 0 and "arrows: yes" in out
    w = tmp_path / "w.rcol"
    code, out, _ = call(capsys, "arrow", "--pattern", "clique:3", "--n", 5, "-o", w)
    assert code == 1 and "arrows: no" in out
    assert EdgeColoring.load(w).colors == (0, 0, 1, 1, 1, 0, 1, 1, 0, 0)
    code, out, _ = call(capsys, "arrow", "--pattern", "hkn:2,3", "--n", 3, "--q", 3, "--method", "exhaustive")
    assert code == 0


def test_ramsey_writes_certificate(tmp_path, capsys):
    cert = tmp_path / "cert"
    code, out, _ = call(capsys, "ramsey", "--pattern", "clique:3", "--q", 2, "-o", cert)
    assert code == 0 and out[0] == "value: 6"
    meta = json.loads((cert / "cert.json").read_text())
    assert meta["value"] == 6 and meta["witness_vertices"] == 5
    assert EdgeColoring.load(cert / "witness.rcol").N == 5


def test_ramsey_limit_exit_code(tmp_path, capsys):
    code, _, err = call(capsys, "ramsey", "--pattern", "clique:3", "--max-n", 5, "-o", tmp_path / "c")
    assert code == 3 and err.startswith("error:")


def test_env_limit(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RAMSEYLAB_MAX_N", "5")
    code, _, err = call(capsys, "arrow", "--pattern", "clique:3", "--n", 6)
    assert code == 3 and "limit" in err
    monkeypatch.setenv("RAMSEYLAB_MAX_N", "lots")
    code, _, err = call(capsys, "arrow", "--pattern", "clique:3", "--n", 6)
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "turan", "--k", "x", "--n", "2"],
        ["construct", "turan", "--k", "1", "--n", "2"],
        ["verify", "--coloring", "missing.rcol", "--pattern", "clique:3"],
        ["arrow", "--pattern", "blob:3", "--n", "4"],
        ["arrow", "--pattern", "clique:3", "--n", "4", "--bogus"],
        ["frobnicate"],
        [],
    ],
)
def test_input_errors(argv, capsys):
    code, _, err = call(capsys, *argv)
    assert code == 2
    assert err.startswith("error:") and err.count("\n") == 1


def test_bad_coloring_file(tmp_path, capsys):
    bad = tmp_path / "bad.rcol"
    bad.write_text("RCOL 1\n3 2\n0 5\n1\n")
    code, _, err = call(capsys, "analyze", "--coloring", bad)
    assert code == 2 and err.startswith("error:")


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert "usage: ramseylab" in capsys.readouterr().out
    assert run(["ramsey", "--help"]) == 0
    assert "gkn:K,N" in capsys.readouterr().out


def test_analyze_and_chase(tmp_path, capsys):
    path = tmp_path / "t.rcol"
    turan_coloring(2, 3).save(path)
    code, out, _ = call(capsys, "analyze", "--coloring", path, "--pattern", "hkn:2,3")
    assert code == 0
    assert "epsilon_star: 0.400000" in out and "best_pair_size: 2" in out
    assert "S_free: yes" in out
    turan_coloring(3, 6).save(path)
    code, out, _ = call(capsys, "chase", "--coloring", path, "--claim-n", 7, "--claim-d", 3)
    assert code == 0
    assert "T_size: 5" in out and "invariants: ok" in out and "claim_holds: yes" in out


def test_lb_random(tmp_path, capsys):
    w = tmp_path / "w.rcol"
    code, out, _ = call(capsys, "lb-random", "--pattern", "clique:7", "--seed", 1, "-o", w)
    assert code == 0 and "d: 6" in out and "ramsey_lb: 8" in out
    assert EdgeColoring.load(w).N == 7
    code, _, _ = call(capsys, "lb-random", "--pattern", "hkn:1,3", "--seed", 1)
    assert code == 2


def test_lb_random_uses_core(capsys):
    code, out, _ = call(capsys, "lb-random", "--pattern", "gkn:3,6", "--seed", 0)
    # G_{3,6} is 3-degenerate with 3-core K_4
    assert code == 0 and out[:3] == ["d: 3", "core_vertices: 4", "core_edges: 6"]
    assert "ramsey_lb: 3" in out


def test_embed(tmp_path, capsys):
    host = tmp_path / "h.graph"
    host.write_text(Graph.complete(6).to_text())
    code, out, _ = call(capsys, "embed", "--guest", "cycle:4", "--host", host)
    assert code == 0 and out[-1] == "valid: yes"
    code, _, err = call(capsys, "embed", "--guest", "clique:3", "--host", "cycle:6", "--d", 2)
    assert code == 2 and "error:" in err


def test_reproduce_default(tmp_path, capsys):
    code, out, _ = call(capsys, "reproduce", "--workdir", tmp_path / "r")
    assert code == 0
    assert "r_H: 6" in out and "r_G_lb: 19" in out
    assert "gap: r(G) >= 19 > 18 = 3*r(H)" in out
    assert out[-1] == "ratio_lb: 3.1667"
    for name in ("ramsey_H/cert.json", "turan.rcol", "pattern_G.graph", "lower_verification.txt"):
        assert (tmp_path / "r" / name).exists()


def test_reproduce_small_and_multicolor(tmp_path):
    code, lines = reproduce_main(tmp_path / "a", k=2, n=3)
    assert code == 0 and "r_H: 3" in lines and "gap: r(G) >= 7 > 6 = 2*r(H)" in lines
    code, lines = reproduce_main(tmp_path / "b", multicolor=True)
    assert code == 0
    assert "r_H: 3" in lines and "r_G_lb: 16" in lines
    assert "gap: r(G;3) >= 16 > 15 = 5*r(H;3)" in lines
    assert lines[-1] == "ratio_lb: 5.3333"


def test_reproduce_reads_from_disk(tmp_path, monkeypatch):
    # a lower coloring that is tampered with on disk must be caught
    from ramseylab import cli

    real_save = EdgeColoring.save

    def bad_save(self, path):
        if str(path).endswith("turan.rcol"):
            self = EdgeColoring(self.N, 2, (0,) * len(self.colors))
        real_save(self, path)

    monkeypatch.setattr(EdgeColoring, "save", bad_save)
    code, lines = cli.reproduce_main(tmp_path, k=2, n=3)
    assert code == 1 and lines[-1].startswith("error:")


def test_reproduce_is_deterministic(tmp_path):
    runs = [reproduce_main(tmp_path / d, k=2, n=3, workers=w) for d, w in (("a", 1), ("b", 4))]
    assert runs[0][1] == [line.replace(str(tmp_path / "b"), str(tmp_path / "a")) for line in runs[1][1]]
    for name in ("ramsey_H/cert.json", "ramsey_H/witness.rcol", "turan.rcol", "lower_verification.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "ramseylab", "arrow", "--pattern", "clique:3", "--n", "6"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "arrows: yes" in proc.stdout
