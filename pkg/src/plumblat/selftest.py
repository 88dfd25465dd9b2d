"""Quick fixture checks behind ``plumblat selftest``."""

from __future__ import annotations

import random
import time
from fractions import Fraction

from .alexander import h_from_alexander, torus_alexander
from .fixtures import GRAPHS, complex_C, complex_D, torus_fixture_resolution
from .homology_engine import h_function
from .lattice_complex import TruncationBox
from .pipeline import presentation_for_graph
from .plumbing import parse_graph
from .presentation import presentations_equivalent, torus_presentation
from .resolution import free_resolution, verify_exact

HOPF_GRID = {
    (Fraction(1, 2), Fraction(1, 2)): 0,
    (Fraction(-1, 2), Fraction(-1, 2)): 1,
    (Fraction(-5, 2), Fraction(-5, 2)): 5,
}


def run_selftest(seed: int = 0) -> list[tuple[str, bool, str]]:
    rng = random.Random(seed)
    out = []

    def check(name, fn):
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, ok, f"{detail} ({time.perf_counter() - t:.2f}s)"))

    hopf = parse_graph(GRAPHS["hopf"])

    def hopf_h():
        H = h_function(hopf, TruncationBox.symmetric(2, Fraction(5, 2), -8))
        d = torus_alexander(2)
        bad = [s for s in H.points() if H(s) != h_from_alexander(d, s)]
        ok = not bad and all(H(s) == v for s, v in HOPF_GRID.items())
        return ok, f"{len(H.points())} points"

    def hopf_present():
        p, _ = presentation_for_graph(hopf)
        eq, why = presentations_equivalent(p, torus_presentation(2))
        return eq and len(p.relations) == 2, why

    def t33():
        p = torus_presentation(3)
        r = free_resolution(p, 6)
        return r.betti == (3, 8, 6, 1) and verify_exact(r, p).ok, f"Betti {r.betti}"

    def t33_fixture():
        r = torus_fixture_resolution(3, 6)
        return verify_exact(r, torus_presentation(3)).ok, "hand-entered maps"

    def nonformal():
        a, b = complex_C().total_rank_mod_all(), complex_D().total_rank_mod_all()
        return (a, b) == (5, 3), f"ranks {a} vs {b}"

    def random_torus_h():
        n = rng.choice((2, 3))
        d = torus_alexander(n)
        from .presentation import torus_h

        half = Fraction(n - 1, 2) - int(Fraction(n - 1, 2))
        pts = [tuple(half + rng.randint(-3, 3) for _ in range(n)) for _ in range(20)]
        bad = [s for s in pts if torus_h(n, s) != h_from_alexander(d, s)]
        return not bad, f"T({n},{n}) at 20 random points"

    check("Hopf H-function, lattice vs Alexander", hopf_h)
    check("Hopf presentation", hopf_present)
    check("T(3,3) resolution", t33)
    check("T(3,3) fixture exactness", t33_fixture)
    check("non-formal pair mod (U,V)", nonformal)
    check("closed-form torus H vs Alexander", random_torus_h)
    return out
