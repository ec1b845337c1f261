"""Command line entry point: ``ramseylab <subcommand> ...``.

Exit codes: 0 success (coloring free, pattern arrowed, witness found),
1 negative search outcome, 2 usage or input error, 3 search limit exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .balance import balance_report, balanced_trace, chase_trace
from .coloring import (
    ColoringFormatError,
    EdgeColoring,
    PatternError,
    build_pattern,
    parse_pattern,
    pentagon_coloring,
    product_coloring,
    random_coloring,
    turan_coloring,
    verify_free,
)
from .config import LimitExceeded, Limits, default_limits
from .graph import (
    EmbeddingPreconditionError,
    Graph,
    GraphFormatError,
    degeneracy_order,
    greedy_embed,
    min_degree_core,
)
from .search import METHODS, arrows, random_lb_witness, ramsey_number, read_certificate, write_certificate

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

PATTERN_HELP = (
    "pattern spec kind:params, one of clique:K, hkn:K,N (K_K plus N-K isolated vertices), "
    "gkn:K,N (hkn plus an apex), hprime:K,N (N/K disjoint K_K), path:N, cycle:N, file:PATH "
    "(GRAPH text format)"
)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # one greppable line instead of argparse's usage dump
        raise InputError(message)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    pattern: str | None
    inputs: tuple[str, ...]
    output: str | None
    seed: int | None
    limits: Limits
    workers: int
    max_nodes: int | None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ramseylab", description="Ramsey colorings, arrowing and vertex-deletion gaps.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    con = sub.add_parser("construct", help="build a witness coloring")
    con_sub = con.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    t = con_sub.add_parser("turan", help="k blocks of n vertices, red inside, blue across")
    t.add_argument("--k", type=_positive, required=True)
    t.add_argument("--n", type=_positive, required=True)
    pr = con_sub.add_parser("product", help="blow up a base coloring, new color inside blocks")
    pr.add_argument("--base", required=True, help="RCOL file, or 'pentagon'")
    pr.add_argument("--n", type=_positive, required=True)
    r = con_sub.add_parser("random", help="uniform random coloring (PCG64)")
    r.add_argument("--n", type=_nonnegative, required=True)
    r.add_argument("--q", type=_positive, default=2)
    r.add_argument("--seed", type=_nonnegative, required=True)
    pent = con_sub.add_parser("pentagon", help="K_5 with a red 5-cycle and blue pentagram")
    for cp in (t, pr, r, pent):
        cp.add_argument("-o", "--output", help="write the coloring (RCOL format) here")

    v = sub.add_parser("verify", help="check a coloring for monochromatic copies")
    v.add_argument("--coloring", required=True)
    v.add_argument("--pattern", required=True, help=PATTERN_HELP)
    v.add_argument("--method", choices=("auto", "generic", "special"), default="auto")

    a = sub.add_parser("arrow", help="decide whether K_N arrows the pattern in q colors")
    a.add_argument("--pattern", required=True, help=PATTERN_HELP)
    a.add_argument("--n", type=_nonnegative, required=True)
    a.add_argument("--q", type=_positive, default=2)
    a.add_argument("--method", choices=METHODS, default="pruned")
    a.add_argument("-o", "--output", help="write the witness coloring here when not arrowing")

    rm = sub.add_parser("ramsey", help="exact Ramsey number with certificate")
    rm.add_argument("--pattern", required=True, help=PATTERN_HELP)
    rm.add_argument("--q", type=_positive, default=2)
    rm.add_argument("--max-n", type=_positive, help="search limit (default RAMSEYLAB_MAX_N or 12)")
    rm.add_argument("--method", choices=("pruned", "orderly"), default="pruned")
    rm.add_argument("-o", "--output", default="ramsey_cert", help="certificate directory")

    lb = sub.add_parser("lb-random", help="random lower-bound witness from the d-core")
    lb.add_argument("--pattern", required=True, help=PATTERN_HELP)
    lb.add_argument("--d", type=_positive, help="degree threshold (default: degeneracy)")
    lb.add_argument("--seed", type=_nonnegative, required=True)
    lb.add_argument("--attempts", type=_positive)
    lb.add_argument("-o", "--output")

    an = sub.add_parser("analyze", help="balance report of a two-coloring")
    an.add_argument("--coloring", required=True)
    an.add_argument("--pattern", help="also run the common-neighborhood trace for this pattern")

    ch = sub.add_parser("chase", help="majority-neighborhood chase from vertex 0")
    ch.add_argument("--coloring", required=True)
    ch.add_argument("--claim-n", type=_nonnegative, help="pattern order n for the |T| > (|S|-n)/d check")
    ch.add_argument("--claim-d", type=_positive, help="degeneracy d for the same check")

    em = sub.add_parser("embed", help="greedy embedding of a degenerate guest")
    em.add_argument("--guest", required=True, help=PATTERN_HELP)
    em.add_argument("--host", required=True, help="host graph file (GRAPH format) or pattern spec")
    em.add_argument("--d", type=_nonnegative, help="degeneracy bound (default: guest degeneracy)")

    rp = sub.add_parser("reproduce", help="certified desk-scale vertex-deletion gap")
    rp.add_argument("--k", type=_positive, default=None)
    rp.add_argument("--n", type=_positive, default=None)
    rp.add_argument("--multicolor", action="store_true", help="three-color product construction")
    rp.add_argument("--base", help="base coloring for --multicolor (default: pentagon)")
    rp.add_argument("--workdir", default="reproduce_out")

    for sp in (a, rm, rp):
        sp.add_argument("--workers", type=_positive, default=1)
        sp.add_argument("--max-nodes", type=_positive)
    return p


def _config(args: argparse.Namespace) -> RunConfig:
    limits = default_limits()
    if getattr(args, "max_n", None):
        limits = Limits(search_n=args.max_n)
    inputs = tuple(
        str(getattr(args, name))
        for name in ("coloring", "base", "host")
        if getattr(args, name, None) is not None
    )
    return RunConfig(
        subcommand=args.command,
        pattern=getattr(args, "pattern", None),
        inputs=inputs,
        output=getattr(args, "output", None),
        seed=getattr(args, "seed", None),
        limits=limits,
        workers=getattr(args, "workers", 1),
        max_nodes=getattr(args, "max_nodes", None),
    )


def _pattern(spec: str) -> Graph:
    return build_pattern(parse_pattern(spec))


def _load_coloring(path: str) -> EdgeColoring:
    try:
        return EdgeColoring.load(path)
    except OSError as exc:
        raise InputError(f"cannot read coloring {path}: {exc.strerror}") from exc


def _emit(lines: Sequence[str]) -> None:
    for line in lines:
        print(line)


def _summary(c: EdgeColoring) -> list[str]:
    return [f"N: {c.N}", f"q: {c.q}", "edge_counts: " + " ".join(map(str, c.edge_counts()))]


def _save(c: EdgeColoring, output: str | None) -> list[str]:
    if output is None:
        return []
    c.save(output)
    return [f"written: {output}"]


def cmd_construct(args, cfg: RunConfig) -> int:
    if args.kind == "turan":
        if args.k < 2:
            raise InputError("turan coloring needs --k >= 2")
        c = turan_coloring(args.k, args.n)
    elif args.kind == "product":
        base = pentagon_coloring() if args.base == "pentagon" else _load_coloring(args.base)
        c = product_coloring(base, args.n)
    elif args.kind == "random":
        if args.q < 2:
            raise InputError("random colorings need --q >= 2")
        c = random_coloring(args.n, args.q, args.seed)
    else:
        c = pentagon_coloring()
    _emit(_summary(c) + _save(c, cfg.output))
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    c = _load_coloring(args.coloring)
    result = verify_free(c, _pattern(args.pattern), args.method)
    _emit(result.lines())
    return EXIT_OK if result.free else EXIT_NEGATIVE


def cmd_arrow(args, cfg: RunConfig) -> int:
    res = arrows(
        args.n,
        _pattern(args.pattern),
        args.q,
        method=args.method,
        limit=cfg.limits.search_n,
        max_nodes=cfg.max_nodes,
        workers=cfg.workers,
    )
    lines = [f"N: {args.n}", f"q: {args.q}", f"arrows: {'yes' if res.arrows else 'no'}"]
    if res.witness is not None:
        lines.append("witness: " + " ".join(map(str, res.witness.colors)))
        lines += _save(res.witness, cfg.output)
    _emit(lines)
    return EXIT_OK if res.arrows else EXIT_NEGATIVE


def cmd_ramsey(args, cfg: RunConfig) -> int:
    cert = ramsey_number(
        _pattern(args.pattern),
        args.q,
        method=args.method,
        limit=cfg.limits.search_n,
        max_nodes=cfg.max_nodes,
        workers=cfg.workers,
    )
    write_certificate(cert, cfg.output, label=args.pattern)
    _emit(
        [
            f"value: {cert.value}",
            f"q: {cert.q}",
            f"method: {cert.method}",
            f"witness_vertices: {cert.witness.N}",
            f"witness_free: {'yes' if cert.transcript.free else 'no'}",
            f"certificate: {cfg.output}",
        ]
    )
    return EXIT_OK


def cmd_lb_random(args, cfg: RunConfig) -> int:
    g = _pattern(args.pattern)
    d = args.d if args.d is not None else degeneracy_order(g).degeneracy
    if d < 1:
        raise InputError("pattern has no edges; d must be at least 1")
    core_vertices = min_degree_core(g, d)
    if not core_vertices:
        raise InputError(f"pattern has no subgraph of minimum degree {d}")
    core = g.induced(core_vertices)
    attempts = args.attempts or cfg.limits.random_attempts
    c = random_lb_witness(core, d, attempts, args.seed)
    lines = [f"d: {d}", f"core_vertices: {core.n}", f"core_edges: {core.edge_count}"]
    if c is None:
        _emit(lines + ["witness: none"])
        return EXIT_NEGATIVE
    lines += [f"witness_vertices: {c.N}", f"ramsey_lb: {c.N + 1}"] + _save(c, cfg.output)
    _emit(lines)
    return EXIT_OK


def cmd_analyze(args, cfg: RunConfig) -> int:
    c = _load_coloring(args.coloring)
    if c.q != 2:
        raise InputError("analyze needs a two-coloring")
    lines = balance_report(c).lines()
    if args.pattern:
        lines += balanced_trace(c, _pattern(args.pattern)).lines()
    _emit(lines)
    return EXIT_OK


def cmd_chase(args, cfg: RunConfig) -> int:
    c = _load_coloring(args.coloring)
    if c.q != 2:
        raise InputError("chase needs a two-coloring")
    trace = chase_trace(c)
    lines = trace.lines() + [f"invariants: {'ok' if trace.check(c) else 'violated'}"]
    if (args.claim_n is None) != (args.claim_d is None):
        raise InputError("--claim-n and --claim-d go together")
    if args.claim_n is not None:
        bound, holds = trace.degeneracy_claim(args.claim_n, args.claim_d)
        lines += [f"claim_bound: {float(bound):.6f}", f"claim_holds: {'yes' if holds else 'no'}"]
    _emit(lines)
    return EXIT_OK


def cmd_embed(args, cfg: RunConfig) -> int:
    guest = _pattern(args.guest)
    if ":" in args.host and not Path(args.host).exists():
        host = _pattern(args.host)
    else:
        try:
            host = Graph.from_text(Path(args.host).read_text())
        except OSError as exc:
            raise InputError(f"cannot read host {args.host}: {exc.strerror}") from exc
    d = args.d if args.d is not None else degeneracy_order(guest).degeneracy
    emb = greedy_embed(guest, host, d)
    _emit([f"d: {d}", "embedding: " + " ".join(map(str, emb.mapping)), "valid: yes"])
    return EXIT_OK


def _ratio(num: int, den: int) -> str:
    return f"{float(Fraction(num, den)):.4f}"


def reproduce_main(
    workdir: str | Path,
    k: int | None = None,
    n: int | None = None,
    multicolor: bool = False,
    base: EdgeColoring | None = None,
    workers: int = 1,
    max_nodes: int | None = None,
    limit: int | None = None,
) -> tuple[int, list[str]]:
    """Certify r(G_{k,n}; q) > N and r(H_{k,n}; q) exactly, then report the gap.

    Every inequality in the report is recomputed from the files written into
    ``workdir``, not from the in-memory results.
    """
    out = Path(workdir)
    out.mkdir(parents=True, exist_ok=True)
    if multicolor:
        k = 2 if k is None else k
        n = 3 if n is None else n
        base = pentagon_coloring() if base is None else base
        if not verify_free(base, Graph.complete(k + 1)).free:
            raise InputError(f"base coloring contains a monochromatic K_{k + 1}")
        q = base.q + 1
        lower = product_coloring(base, n)
        lower_name = "product.rcol"
    else:
        k = 3 if k is None else k
        n = 6 if n is None else n
        if k < 2:
            raise InputError("two-color reproduction needs k >= 2")
        q = 2
        lower = turan_coloring(k, n)
        lower_name = "turan.rcol"
    if n < k:
        raise InputError("need n >= k")
    h_spec, g_spec = f"hkn:{k},{n}", f"gkn:{k},{n}"
    H, G = _pattern(h_spec), _pattern(g_spec)

    cert = ramsey_number(H, q, limit=limit, max_nodes=max_nodes, workers=workers)
    write_certificate(cert, out / "ramsey_H", label=h_spec)
    lower.save(out / lower_name)
    (out / "pattern_G.graph").write_text(G.to_text())

    # everything below reads back from disk
    disk_cert = read_certificate(out / "ramsey_H")
    if not disk_cert.check(rerun_arrows=True, limit=limit, max_nodes=max_nodes):
        return EXIT_NEGATIVE, ["error: certificate for r(H) failed re-verification"]
    disk_lower = EdgeColoring.load(out / lower_name)
    disk_G = Graph.from_text((out / "pattern_G.graph").read_text())
    check = verify_free(disk_lower, disk_G)
    (out / "lower_verification.txt").write_text("\n".join(check.lines()) + "\n")
    r_h = disk_cert.value
    r_g_lb = disk_lower.N + 1
    lines = [
        f"pattern_H: {h_spec}",
        f"pattern_G: {g_spec}",
        f"q: {q}",
        f"r_H: {r_h}",
        f"r_H_certificate: {out / 'ramsey_H'}",
        f"lower_coloring: {out / lower_name}",
        f"lower_N: {disk_lower.N}",
    ]
    lines += [f"lower_{line}" for line in check.lines()]
    if not check.free:
        return EXIT_NEGATIVE, lines + ["error: lower-bound coloring contains a copy of G"]
    lines.append(f"r_G_lb: {r_g_lb}")
    blocks = disk_lower.N // n
    tag = "" if q == 2 else f";{q}"
    if r_g_lb > blocks * r_h:
        lines.append(f"gap: r(G{tag}) >= {r_g_lb} > {blocks * r_h} = {blocks}*r(H{tag})")
    else:
        lines.append(f"gap: none, {r_g_lb} <= {blocks}*r(H{tag}) = {blocks * r_h}")
    lines.append(f"ratio_lb: {_ratio(r_g_lb, r_h)}")
    return EXIT_OK, lines


def cmd_reproduce(args, cfg: RunConfig) -> int:
    base = _load_coloring(args.base) if args.base else None
    code, lines = reproduce_main(
        args.workdir,
        args.k,
        args.n,
        multicolor=args.multicolor,
        base=base,
        workers=cfg.workers,
        max_nodes=cfg.max_nodes,
        limit=cfg.limits.search_n,
    )
    out = [line for line in lines if not line.startswith("error:")]
    _emit(out)
    for line in lines:
        if line.startswith("error:"):
            print(line, file=sys.stderr)
    return code


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "arrow": cmd_arrow,
    "ramsey": cmd_ramsey,
    "lb-random": cmd_lb_random,
    "analyze": cmd_analyze,
    "chase": cmd_chase,
    "embed": cmd_embed,
    "reproduce": cmd_reproduce,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except LimitExceeded as exc:
        print(f"error: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (
        InputError,
        PatternError,
        GraphFormatError,
        ColoringFormatError,
        EmbeddingPreconditionError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
