"""End-to-end helpers: graph -> H-function -> presentation -> resolution."""

from __future__ import annotations

from fractions import Fraction

from .errors import InsufficientBoxError
from .homology_engine import DEFAULT_FLOOR, HFunction, h_function
from .lattice_complex import TruncationBox
from .plumbing import PlumbingGraph
from .presentation import ModulePresentation, minimal_generators, presentation_from_h
from .resolution import FreeResolution, free_resolution

RADIUS_CAP = 12


def presentation_for_graph(
    g: PlumbingGraph,
    spinc: int = 0,
    floor: int = DEFAULT_FLOOR,
    radius: int = 2,
    cap: int = RADIUS_CAP,
    jobs: int = 1,
    confirm: bool = True,
) -> tuple[ModulePresentation, HFunction]:
    """Grow the Alexander box until the generator set is interior and stable."""
    r = radius
    prev = None
    while True:
        if r > cap:
            raise InsufficientBoxError(f"generators not stable within radius {cap}")
        H = h_function(g, TruncationBox.symmetric(g.ell, Fraction(2 * r + 1, 2), floor), spinc, jobs)
        try:
            gens = minimal_generators(H)
        except InsufficientBoxError:
            r += 1
            continue
        key = [(x.alexander, x.maslov_w) for x in gens]
        if gens and (not confirm or key == prev):
            return presentation_from_h(H), H
        prev = key
        r += 1


def resolution_for_graph(
    g: PlumbingGraph, box: int, spinc: int = 0, floor: int = DEFAULT_FLOOR, jobs: int = 1
) -> tuple[FreeResolution, ModulePresentation]:
    pres, _ = presentation_for_graph(g, spinc, floor, jobs=jobs)
    return free_resolution(pres, box), pres
