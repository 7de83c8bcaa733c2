"""Command line front end.

Exit status: 0 yes/solvable, 1 no/unsolvable, 2 usage or parse error,
3 budget exceeded.  Results go to stdout in the text formats of ``textio``.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import dimension as dim
from . import mpgame, oracles, reductions
from .core import INF, BudgetExceeded, TropicalSystem, TropkitError, TwoSidedSystem, canonicalize_inf, normalize
from .maxatom import MaxAtomSystem, to_binary_form
from .textio import ParseError, emit, emit_vector, parse, parse_vector_arg

YES, NO, USAGE, BUDGET = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Usage(f"{path}: {exc.strerror}") from None


def _load(path: str, *kinds):
    obj = parse(_read(path))
    if kinds and not isinstance(obj, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise _Usage(f"{path}: expected {names}, got {type(obj).__name__}")
    return obj


def _out(text: str):
    sys.stdout.write(text)


def _answer(x) -> int:
    if x is None:
        _out("unsolvable\n")
        return NO
    _out(emit_vector(x))
    return YES


# -- subcommands -------------------------------------------------------------------------


def cmd_solve(a) -> int:
    A = _load(a.file, TropicalSystem)
    if a.oracle:
        x = oracles.brute_tropsolv_inf(A) if A.has_inf else oracles.brute_tropsolv(A)
    else:
        x = reductions.solve_tropical(A, via=a.via)
    return _answer(x)


def cmd_minplus_solve(a) -> int:
    S = _load(a.file, TwoSidedSystem)
    x = oracles.brute_minplus(S) if a.oracle else reductions.solve_minplus(S)
    return _answer(x)


def cmd_dim(a) -> int:
    system = _load(a.file, TropicalSystem, TwoSidedSystem)
    affine = not a.projective
    offset = 1 if affine else 0
    if a.at is not None:
        x = parse_vector_arg(a.at)
        size, form = dim.local_form(system, x)
        cert = dim.DimensionCertificate(x, form, size - 1)
    else:
        w = dim.global_witness(system)
        if w is None:
            _out("unsolvable\n")
            return NO
        cert = dim.DimensionCertificate(w.point, w.form, w.dimension)
    d = cert.claimed_k
    _out(f"{d + offset}\n")
    if a.emit_cert:
        with open(a.emit_cert, "w", encoding="utf-8") as fh:
            fh.write(emit(cert))
    if a.at_least is not None:
        return YES if d + offset >= a.at_least else NO
    return YES


def cmd_certify(a) -> int:
    system = _load(a.file, TropicalSystem, TwoSidedSystem)
    cert = _load(a.cert, dim.DimensionCertificate)
    ok = dim.verify_certificate(system, cert)
    _out("valid\n" if ok else "invalid\n")
    return YES if ok else NO


def _single_row(obj, path: str):
    if obj.m != 1:
        raise _Usage(f"{path}: expected exactly one row")
    if isinstance(obj, TropicalSystem):
        return obj.rows[0]
    return (obj.lhs[0], obj.rhs[0])


def cmd_implies(a) -> int:
    system = _load(a.sysfile, TropicalSystem, TwoSidedSystem)
    row_sys = _load(a.rowfile, type(system))
    if row_sys.ncols != system.ncols:
        raise _Usage("row and system have different numbers of columns")
    row = _single_row(row_sys, a.rowfile)
    if isinstance(system, TwoSidedSystem):
        fn = oracles.brute_minplus_implies if a.oracle else reductions.minplus_implies
        ok = fn(system, row)
    elif system.has_inf or any(v is INF for v in row):
        ok = oracles.brute_implies_inf(system, row) if a.oracle else reductions.implies_inf(system, row)
    else:
        ok = oracles.brute_implies(system, row) if a.oracle else reductions.implies(system, row)
    _out("implied\n" if ok else "not implied\n")
    return YES if ok else NO


def cmd_equiv(a) -> int:
    A = _load(a.file1, TropicalSystem)
    B = _load(a.file2, TropicalSystem)
    ok = reductions.equivalent(A, B)
    _out("equivalent\n" if ok else "not equivalent\n")
    return YES if ok else NO


def _finite_form(A: TropicalSystem) -> TropicalSystem:
    """One integer system solvable iff A is."""
    if not A.has_inf:
        return normalize(A)[0]
    reduced, witness = canonicalize_inf(A)
    if witness is not None:
        return TropicalSystem.of([], 1)
    return reductions.combine_or([reductions.inf_elimination(reduced, i) for i in range(reduced.ncols)])


def cmd_reduce(a) -> int:
    obj = _load(a.file)
    if a.to == "map":
        if isinstance(obj, TropicalSystem):
            out = reductions.tropical_to_maxatom(obj)[0]
        elif isinstance(obj, TwoSidedSystem):
            out = reductions.minplus_to_maxatom(obj)[0]
        else:
            raise _Usage("--to map needs a tropical or min-plus file")
    elif a.to == "minplus":
        if not isinstance(obj, TropicalSystem):
            raise _Usage("--to minplus needs a tropical file")
        out = reductions.tropical_to_minplus(obj)
    elif a.to == "tropical-of-map":
        if not isinstance(obj, MaxAtomSystem):
            raise _Usage("--to tropical-of-map needs a map file")
        out = reductions.maxatom_to_tropical(to_binary_form(obj))[0]
    else:
        if not isinstance(obj, TropicalSystem):
            raise _Usage("--to finite needs a tropical file")
        out = _finite_form(obj)
    _out(emit(out))
    return YES


def cmd_gen(a) -> int:
    G = _load(a.graph, dim.Graph)
    _out(emit(dim.vc_to_minplus(G) if a.minplus else dim.vc_to_tropical(G)))
    return YES


def cmd_mpg(a) -> int:
    games = [_load(p, mpgame.MeanPayoffGame) for p in a.files]
    if a.action == "combine":
        _out(emit(mpgame.combine_and(games)))
        return YES
    if len(games) != 1:
        raise _Usage(f"mpg {a.action} takes exactly one file")
    g = games[0]
    if a.action == "negate":
        _out(emit(mpgame.negate(g)))
        return YES
    win = mpgame.decide(g)
    _out("player 1 wins\n" if win else "player 1 loses\n")
    return YES if win else NO


def cmd_rank(a) -> int:
    A = _load(a.file, TropicalSystem)
    if A.has_inf:
        raise _Usage("rank works over Z")
    _out(f"{dim.tropical_rank(A)}\n")
    return YES


# -- argument parsing ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropkit", description="Exact tropical linear algebra.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a tropical system")
    s.add_argument("file")
    s.add_argument("--oracle", action="store_true", help="use the brute-force scan")
    s.add_argument("--via", choices=["map", "infelim"], default="map")
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("minplus-solve", help="solve a two-sided min-plus system")
    s.add_argument("file")
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(fn=cmd_minplus_solve)

    s = sub.add_parser("dim", help="local or global dimension of the solution set")
    s.add_argument("file")
    where = s.add_mutually_exclusive_group(required=True)
    where.add_argument("--at", metavar="X", help="comma separated solution, e.g. 0,1,inf")
    where.add_argument("--global", dest="global_", action="store_true")
    conv = s.add_mutually_exclusive_group()
    conv.add_argument("--affine", action="store_true", help="(default)")
    conv.add_argument("--projective", action="store_true")
    s.add_argument("--at-least", type=int, metavar="K")
    s.add_argument("--emit-cert", metavar="PATH")
    s.set_defaults(fn=cmd_dim)

    s = sub.add_parser("certify", help="check a dimension certificate")
    s.add_argument("file")
    s.add_argument("cert")
    s.set_defaults(fn=cmd_certify)

    s = sub.add_parser("implies", help="does every solution satisfy one more row")
    s.add_argument("sysfile")
    s.add_argument("rowfile")
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(fn=cmd_implies)

    s = sub.add_parser("equiv", help="do two systems have the same solutions")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(fn=cmd_equiv)

    s = sub.add_parser("reduce", help="translate an instance")
    s.add_argument("file")
    s.add_argument("--to", required=True, choices=["map", "minplus", "tropical-of-map", "finite"])
    s.set_defaults(fn=cmd_reduce)

    s = sub.add_parser("gen", help="generate instances")
    gsub = s.add_subparsers(dest="generator", required=True)
    g = gsub.add_parser("vc", help="dimension instance from a connected graph")
    g.add_argument("graph")
    g.add_argument("--minplus", action="store_true")
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("mpg", help="mean payoff games")
    s.add_argument("action", choices=["solve", "negate", "combine"])
    s.add_argument("files", nargs="+")
    s.set_defaults(fn=cmd_mpg)

    s = sub.add_parser("rank", help="tropical rank of a matrix")
    s.add_argument("file")
    s.set_defaults(fn=cmd_rank)
    return p


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else YES
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"tropkit: budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except ParseError as exc:
        print(f"tropkit: parse error: {exc}", file=sys.stderr)
        return USAGE
    except (_Usage, TropkitError, ValueError) as exc:
        print(f"tropkit: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
