"""Homology of truncated lattice complexes and the H-function."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra_core import F2Span, fmt_q, fu_module_decompose
from .errors import InsufficientBoxError, NotLSpaceError
from .lattice_complex import (
    ComplexGroup,
    GradedComplex,
    LatticeGenerator,
    TruncationBox,
    alexander_points,
    build_group,
    model,
)
from .plumbing import PlumbingGraph, Vertex, parse_graph, spinc_classes

DEFAULT_FLOOR = -8
FLOOR_CAP = -4096


@dataclass(frozen=True)
class HomologyPiece:
    spinc: int
    alexander: tuple[Fraction, ...]
    integral_alexander: tuple[Fraction, ...]
    free_rank: int
    top_grading: Fraction | None
    free_tops: tuple[Fraction, ...]
    torsion: tuple[tuple[int, Fraction], ...]
    floor: Fraction

    @property
    def certified_from(self) -> Fraction:
        return self.floor + 2

    def to_json(self) -> dict:
        return {
            "spinc": self.spinc,
            "alexander": [fmt_q(a) for a in self.alexander],
            "integral_alexander": [fmt_q(a) for a in self.integral_alexander],
            "free_rank": self.free_rank,
            "top_grading": None if self.top_grading is None else fmt_q(self.top_grading),
            "torsion": [{"order": o, "grading": fmt_q(gr)} for o, gr in self.torsion],
            "certified_from": fmt_q(self.certified_from),
        }


def piece_of_group(g: PlumbingGraph, grp: ComplexGroup) -> HomologyPiece:
    h = fu_module_decompose(grp.fu_complex())
    cut = grp.floor + 2
    tops = tuple(t for t in h.free_tops if t >= cut)
    tors = tuple((o, gr) for o, gr in h.torsion if gr >= cut)
    return HomologyPiece(
        grp.spinc,
        grp.alexander,
        model(g).integral_alexander(grp.alexander),
        len(tops),
        tops[0] if tops else None,
        tops,
        tors,
        grp.floor,
    )


def homology(cx: GradedComplex) -> list[HomologyPiece]:
    """One piece per Alexander degree of the complex, certified above floor + 2."""
    return [piece_of_group(cx.graph, cx.groups[A]) for A in sorted(cx.groups)]


def piece_at(g: PlumbingGraph, spinc, A: Sequence[Fraction], floor=DEFAULT_FLOOR, cap=FLOOR_CAP) -> HomologyPiece:
    """Homology at one degree, lowering the floor until a free tower is certified."""
    if isinstance(spinc, int):
        spinc = spinc_classes(g)[spinc]
    F = Fraction(min(floor, -2))
    while True:
        grp = build_group(g, spinc, A, F)
        if grp is None:
            raise ValueError(f"{tuple(A)} is not an Alexander degree of this Spin^c class")
        p = piece_of_group(g, grp)
        if p.free_rank:
            return p
        if F <= cap:
            raise InsufficientBoxError(f"no free tower above floor {F} at {tuple(map(str, A))}")
        F = 2 * F - 2


# ---------------------------------------------------------------------------
# H-function


@dataclass
class HFunction:
    """H values on the lattice points of a box in one Spin^c class."""

    ell: int
    spinc: int
    values: dict[tuple[Fraction, ...], Fraction]
    shift: tuple[Fraction, ...]
    bounds: tuple[tuple[Fraction, Fraction], ...]
    certified: set = field(default_factory=set)
    pieces: dict = field(default_factory=dict)

    def __call__(self, s: Sequence) -> Fraction:
        return self.values[tuple(Fraction(x) for x in s)]

    def __contains__(self, s) -> bool:
        return tuple(Fraction(x) for x in s) in self.values

    def points(self) -> list[tuple[Fraction, ...]]:
        return sorted(self.values)

    def integral(self, s: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(Fraction(x) - d for x, d in zip(s, self.shift))

    def to_json(self) -> dict:
        return {
            "spinc": self.spinc,
            "points": [
                {
                    "s": [fmt_q(x) for x in s],
                    "integral_s": [fmt_q(x) for x in self.integral(s)],
                    "H": fmt_q(self.values[s]),
                    "certified": s in self.certified,
                }
                for s in self.points()
            ],
        }

    def table(self) -> str:
        """Grid layout for two components (s2 decreasing downwards), else a list."""
        pts = self.points()
        if self.ell != 2:
            return "\n".join(f"H({', '.join(fmt_q(x) for x in s)}) = {fmt_q(self.values[s])}" for s in pts)
        xs = sorted({s[0] for s in pts})
        ys = sorted({s[1] for s in pts}, reverse=True)
        width = max(4, max(len(fmt_q(x)) for x in xs) + 1)
        lines = []
        for y in ys:
            cells = [fmt_q(self.values[(x, y)]) if (x, y) in self.values else "." for x in xs]
            lines.append(f"{fmt_q(y):>6} |" + "".join(c.rjust(width) for c in cells))
        lines.append(" " * 7 + "+" + "-" * (width * len(xs)))
        lines.append(" " * 8 + "".join(fmt_q(x).rjust(width) for x in xs))
        return "\n".join(lines)


def _graph_payload(g: PlumbingGraph) -> tuple:
    return (
        [(v.id, v.weight, v.arrow) for v in g.vertices],
        [(g.ids[i], g.ids[j]) for i, j in g.edges],
        g.allow_forest,
    )


def _graph_from_payload(p) -> PlumbingGraph:
    verts, edges, forest = p
    return PlumbingGraph([Vertex(*v) for v in verts], edges, allow_forest=forest)


def _pieces_worker(args):
    payload, spinc_idx, points, floor = args
    g = _graph_from_payload(payload)
    sp = spinc_classes(g)[spinc_idx]
    return [piece_at(g, sp, A, floor) for A in points]


def h_function(
    g: PlumbingGraph,
    box: TruncationBox,
    spinc: int = 0,
    jobs: int = 1,
    require_lspace: bool = True,
) -> HFunction:
    """H = -top/2 at every lattice point of the Alexander box."""
    sp = spinc_classes(g)[spinc]
    pts = alexander_points(g, sp, box.alexander)
    floor = box.floor
    if jobs > 1 and len(pts) > 1:
        chunks = [pts[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_pieces_worker, [(_graph_payload(g), spinc, c, floor) for c in chunks]))
        pieces = {}
        for c, res in zip(chunks, results):
            for A, p in zip(c, res):
                pieces[A] = p
    else:
        pieces = {A: piece_at(g, sp, A, floor) for A in pts}
    values = {}
    for A in sorted(pieces):
        p = pieces[A]
        if require_lspace and (p.free_rank != 1 or p.torsion):
            raise NotLSpaceError(
                f"not an L-space link in the certified region: degree {tuple(map(str, A))} "
                f"has free rank {p.free_rank} and torsion {[(o, str(gr)) for o, gr in p.torsion]}"
            )
        values[A] = -p.top_grading / 2
    shift = model(g).integral_alexander((Fraction(0),) * g.ell)
    return HFunction(
        g.ell,
        spinc,
        values,
        tuple(-x for x in shift),
        box.alexander,
        set(values),
        pieces,
    )


def d_from_g(g: PlumbingGraph, K: Sequence[int], E) -> int:
    """2 g(K, E) for an arrowless graph."""
    if g.ell:
        raise ValueError("d_from_g expects a graph without arrow vertices")
    from .lattice_complex import as_mask

    return 2 * model(g).g_value(tuple(K), as_mask(g, E))


def is_lspace_link(g: PlumbingGraph, box: TruncationBox, spinc: int | None = None):
    """(True, None) or (False, witness) with witness = (spinc, degree, torsion)."""
    classes = spinc_classes(g) if spinc is None else [spinc_classes(g)[spinc]]
    for sp in classes:
        for A in alexander_points(g, sp, box.alexander):
            p = piece_at(g, sp, A, box.floor)
            if p.torsion or p.free_rank != 1:
                return False, (sp.index, A, p.torsion)
    return True, None


def is_torsion_free(h) -> tuple[bool, object]:
    """Witness-returning check on a precomputed F2[U] decomposition."""
    tors = h.torsion
    return (not tors, tors[0] if tors else None)


# ---------------------------------------------------------------------------
# sublinks of arrowless graphs


def sublink_graph(g: PlumbingGraph, E) -> PlumbingGraph:
    """All vertices of E turned into arrows framed by their weights (a forest)."""
    from .lattice_complex import as_mask

    mask = as_mask(g, E)
    keep = [i for i in range(len(g.vertices)) if mask >> i & 1]
    verts = [Vertex(g.ids[i], g.vertices[i].weight, True) for i in keep]
    edges = [(g.ids[i], g.ids[j]) for i, j in g.edges if mask >> i & 1 and mask >> j & 1]
    return PlumbingGraph(verts, edges, allow_forest=True)


def phi_sublink(g: PlumbingGraph, K: Sequence[int], E) -> tuple[Fraction, ...]:
    """Lattice point of the sublink E attached to K (pairings taken inside E)."""
    from .lattice_complex import as_mask

    mask = as_mask(g, E)
    keep = [i for i in range(len(g.vertices)) if mask >> i & 1]
    return tuple(Fraction(K[i] + sum(g.Q[j][i] for j in keep), 2) for i in keep)


# ---------------------------------------------------------------------------
# vector-space level helpers used for action cross-checks


def _slice(grp: ComplexGroup, G: Fraction) -> list[tuple[int, int]]:
    out = []
    for j, gr in enumerate(grp.grading):
        d = gr - G
        if d >= 0 and d % 2 == 0:
            out.append((j, int(d // 2)))
    return out


def _boundary_vectors(grp: ComplexGroup, src, tgt) -> list[int]:
    pos = {b: k for k, b in enumerate(tgt)}
    bycol: dict[int, list[tuple[int, int]]] = {}
    for c, r, e in grp.entries:
        bycol.setdefault(c, []).append((r, e))
    vecs = []
    for j, i in src:
        v = 0
        for r, e in bycol.get(j, []):
            k = pos.get((r, i + e))
            if k is not None:
                v ^= 1 << k
        vecs.append(v)
    return vecs


def homology_class_space(grp: ComplexGroup, G: Fraction):
    """(basis of grading-G chains, cycle vectors, boundary span) over F2."""
    here = _slice(grp, G)
    up = _slice(grp, G + 1)
    down = _slice(grp, G - 1)
    dv = _boundary_vectors(grp, here, down)
    from .kernels import f2_reduce

    reduced, combos = f2_reduce(dv)
    cycles = [c for v, c in zip(reduced, combos) if not v]
    bspan = F2Span(_boundary_vectors(grp, up, here))
    return here, cycles, bspan


def top_cycle(grp: ComplexGroup, G: Fraction) -> list[LatticeGenerator] | None:
    """A cycle at grading G representing a nonzero class, as U-power terms."""
    here, cycles, bspan = homology_class_space(grp, G)
    for c in cycles:
        if c not in bspan:
            return [grp.gens[j].times_u(i) for k, (j, i) in enumerate(here) if c >> k & 1]
    return None


def is_nonzero_class(grp: ComplexGroup, chain: Sequence[LatticeGenerator], G: Fraction) -> bool:
    here, _, bspan = homology_class_space(grp, G)
    pos = {b: k for k, b in enumerate(here)}
    v = 0
    for x in chain:
        j = grp.index.get((x.K, x.E))
        if j is None or (j, x.u_power) not in pos:
            raise InsufficientBoxError("chain leaves the truncated window")
        v ^= 1 << pos[(j, x.u_power)]
    return v not in bspan
