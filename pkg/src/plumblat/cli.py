"""Command-line interface: ``plumblat <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Sequence

from . import __version__
from .alexander import h_from_alexander, parse_alexander
from .algebra_core import fmt_q
from .errors import ComparisonMismatchError, ParseError, PlumblatError
from .homology_engine import DEFAULT_FLOOR, h_function, homology, is_lspace_link
from .lattice_complex import TruncationBox, build_truncated_complex, model
from .pipeline import presentation_for_graph
from .plumbing import PlumbingGraph, parse_graph, spinc_classes
from .resolution import compare_gn, free_resolution, verify_exact

log = logging.getLogger("plumblat")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _graph(path: str) -> PlumbingGraph:
    g = parse_graph(_read(path))
    g.require_nonsingular()
    return g


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _parse_point(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad point {text!r}; expected comma-separated rationals") from None


def _with_cache(g: PlumbingGraph):
    m = model(g)
    m.load_cache()
    return m


# ---------------------------------------------------------------------------
# commands


def cmd_homology(args) -> int:
    g = _graph(args.graph)
    m = _with_cache(g)
    radius = Fraction(args.box if args.box is not None else 2)
    box = TruncationBox.symmetric(g.ell, radius, args.floor)
    classes = range(len(spinc_classes(g))) if args.spinc == "all" else [int(args.spinc)]
    pieces = []
    for sp in classes:
        cx = build_truncated_complex(g, sp, box)
        pieces.extend(homology(cx))
    m.save_cache()
    lines = []
    for p in pieces:
        tors = "".join(f" + F[U]/U^{o} ({fmt_q(gr)})" for o, gr in p.torsion)
        tops = " + ".join(f"F[U]({fmt_q(t)})" for t in p.free_tops) or "0"
        A = ", ".join(fmt_q(a) for a in p.alexander)
        lines.append(f"spinc {p.spinc}  A=({A})  {tops}{tors}   [certified gr >= {fmt_q(p.certified_from)}]")
    _emit(args, {"pieces": [p.to_json() for p in pieces]}, "\n".join(lines))
    return 0


def cmd_hfunction(args) -> int:
    g = _graph(args.graph)
    m = _with_cache(g)
    radius = Fraction(args.box if args.box is not None else 3)
    H = h_function(g, TruncationBox.symmetric(g.ell, radius, args.floor), int(args.spinc), args.jobs)
    m.save_cache()
    _emit(args, H.to_json(), H.table())
    return 0


def cmd_present(args) -> int:
    g = _graph(args.graph)
    pres, _ = presentation_for_graph(g, int(args.spinc), args.floor, radius=args.box or 2, jobs=args.jobs)
    _emit(args, pres.to_json(), pres.to_text())
    return 0


def cmd_resolve(args) -> int:
    g = _graph(args.graph)
    box = args.box if args.box is not None else 6
    pres, _ = presentation_for_graph(g, int(args.spinc), args.floor, jobs=args.jobs)
    res = free_resolution(pres, box)
    rep = verify_exact(res, pres, raise_on_failure=True)
    payload = res.to_json()
    payload["exact"] = rep.ok
    _emit(args, payload, res.to_text())
    return 0


def cmd_compare_gn(args) -> int:
    g = _graph(args.graph)
    box = args.box if args.box is not None else 6
    pres, _ = presentation_for_graph(g, int(args.spinc), args.floor, jobs=args.jobs)
    res = free_resolution(pres, box)
    ok, diffs = compare_gn(pres, res, box)
    text = "koszul = mod-V: agree" if ok else f"koszul = mod-V: DISAGREE in {len(diffs)} degrees"
    _emit(args, {"agree": ok, "differences": [[list(k[0]), k[1], a, b] for k, a, b in diffs]}, text)
    if not ok:
        raise ComparisonMismatchError(text)
    return 0


def cmd_h_from_alexander(args) -> int:
    data = parse_alexander(_read(args.alexander))
    if args.at:
        pts = [_parse_point(p) for p in args.at]
    else:
        r = args.box if args.box is not None else 2
        axes = []
        for row in data.linking:
            sh = sum(row, Fraction(0)) / 2
            base = sh - int(sh)
            axes.append([base + k for k in range(-r, r + 1)])
        pts = list(product(*axes))
    vals = [(s, h_from_alexander(data, s)) for s in pts]
    text = "\n".join(f"H({', '.join(fmt_q(x) for x in s)}) = {fmt_q(v)}" for s, v in vals)
    _emit(args, {"points": [{"s": [fmt_q(x) for x in s], "H": fmt_q(v)} for s, v in vals]}, text)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(seed=args.seed)
    print(f"seed {args.seed}")
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


def cmd_lspace(args) -> int:
    g = _graph(args.graph)
    radius = Fraction(args.box if args.box is not None else 2)
    ok, witness = is_lspace_link(g, TruncationBox.symmetric(g.ell, radius, args.floor))
    text = "L-space link in the box" if ok else f"not an L-space link: witness {witness}"
    _emit(args, {"lspace": ok, "witness": None if ok else str(witness)}, text)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--floor", type=int, default=DEFAULT_FLOOR, help="lowest gr_w kept in the truncation")
    common.add_argument("--box", type=int, default=None, help="box size (Alexander radius or resolution weight)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--spinc", default="0", help="Spin^c class index (or 'all' for homology)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="plumblat", description="Lattice link homology of plumbing trees.")
    p.add_argument("--version", action="version", version=f"plumblat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, arg, helptext in (
        ("homology", cmd_homology, "graph", "homology of the truncated link lattice complex"),
        ("hfunction", cmd_hfunction, "graph", "H-function table"),
        ("present", cmd_present, "graph", "generators and relations"),
        ("resolve", cmd_resolve, "graph", "minimal free resolution and Betti numbers"),
        ("compare-gn", cmd_compare_gn, "graph", "Koszul model against the resolution mod V"),
        ("lspace", cmd_lspace, "graph", "torsion check in the box"),
        ("h-from-alexander", cmd_h_from_alexander, "alexander", "H-function from Alexander polynomials"),
    ):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument(arg)
        if name == "h-from-alexander":
            sp.add_argument("--at", action="append", help="point s1,s2,... (repeatable)")
        sp.set_defaults(func=fn)
    st = sub.add_parser("selftest", parents=[common], help="run the built-in fixture checks")
    st.set_defaults(func=cmd_selftest)
    return p


def _glue_points(argv: Sequence[str]) -> list[str]:
    # argparse reads "--at -1/2,-1/2" as two options; bind the value explicitly
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--at":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--at={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_points(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.jobs < 1 or (args.box is not None and args.box <= 0):
        print("error: --jobs and --box must be positive", file=sys.stderr)
        return 2
    random.seed(args.seed)
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except PlumblatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    log.info("%s finished in %.2fs", args.command, time.perf_counter() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
