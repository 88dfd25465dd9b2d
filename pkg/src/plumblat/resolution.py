"""Minimal multigraded free resolutions, computed one degree at a time.

Degrees are visited in increasing weight.  At each degree the relations of
that degree that are not already implied become stage-1 generators, then
for every later stage the kernel of the previous map, modulo the image of
the generators found so far, supplies the new generators.  Every piece is
a finite F2 space, so the result is exact in all degrees up to the box.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra_core import F2Span, MultiDegree, degree_weight, fmt_q, key_degree, sub_degree
from .errors import InexactResolutionError, InsufficientBoxError, NotAComplexError
from .freemodule import Element, FreeMap, FreeModule, scale, span_at
from .kernels import f2_reduce
from .presentation import ModulePresentation

Degree = tuple[int, ...]


def _render_key(key: Sequence[int]) -> str:
    ell = len(key) // 2
    parts = []
    for k in range(ell):
        for name, e in (("U", key[k]), ("V", key[ell + k])):
            if e == 1:
                parts.append(f"{name}{k + 1}")
            elif e > 1:
                parts.append(f"{name}{k + 1}^{e}")
    return "".join(parts)


def render_element(elem: Element, labels: Sequence[str]) -> str:
    if not elem:
        return "0"
    terms = sorted(elem, key=lambda t: (t[0], tuple(-x for x in t[1])))
    out = []
    for g, m in terms:
        mono = _render_key(m)
        out.append(f"{mono} {labels[g]}" if mono else labels[g])
    return " + ".join(out)


@dataclass
class FreeResolution:
    """Stages F_0 <- F_1 <- ... with ``maps[k]`` the map F_{k+1} -> F_k."""

    ell: int
    stages: list[FreeModule]
    maps: list[FreeMap]
    box: int
    presentation: ModulePresentation | None = None
    max_weights: list[int] = field(default_factory=list)

    @property
    def betti(self) -> tuple[int, ...]:
        out = [len(s) for s in self.stages]
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return tuple(out)

    @property
    def length(self) -> int:
        return len(self.betti) - 1

    def multidegree(self, D: Degree) -> MultiDegree | None:
        return None if self.presentation is None else self.presentation.multidegree(D)

    def is_minimal(self) -> bool:
        """No map entry is a unit."""
        zero = (0,) * (2 * self.ell)
        return all(m != zero for f in self.maps for img in f.images for _, m in img)

    def d_squared_failures(self) -> list[tuple[int, str]]:
        """Symbolic composites d_k d_{k+1} that do not vanish, as (k, message)."""
        out = []
        for k in range(1, len(self.maps)):
            outer, inner = self.maps[k - 1], self.maps[k]
            for g, img in enumerate(inner.images):
                res = outer.apply(img)
                if res:
                    out.append((k, f"d{k} d{k + 1} {inner.source.labels[g]} = {render_element(res, outer.target.labels)}"))
        return out

    def check_d_squared(self) -> None:
        bad = self.d_squared_failures()
        if bad:
            raise NotAComplexError(bad[0][1])

    def euler_characteristic(self) -> dict[tuple[Fraction, ...], int]:
        """Sum of (-1)^(gr_w + stage) t^A over all generators."""
        out: dict = {}
        for k, st in enumerate(self.stages):
            for D in st.degrees:
                md = self.multidegree(D)
                sign = -1 if (md.maslov_w + k) % 2 else 1
                out[md.alexander] = out.get(md.alexander, 0) + sign
        return {a: c for a, c in out.items() if c}

    def to_complex(self) -> "FreeComplex":
        gens = []
        offsets = []
        for k, st in enumerate(self.stages):
            offsets.append(len(gens))
            gens.extend((lab, d, k) for lab, d in zip(st.labels, st.degrees))
        diffs: list[Element] = []
        for k, st in enumerate(self.stages):
            for g in range(len(st)):
                if k == 0:
                    diffs.append(frozenset())
                else:
                    img = self.maps[k - 1].images[g]
                    diffs.append(frozenset((offsets[k - 1] + h, m) for h, m in img))
        return FreeComplex(self.ell, [g[0] for g in gens], [g[1] for g in gens], [g[2] for g in gens], diffs)

    def to_json(self) -> dict:
        def gen(st: FreeModule, g: int) -> dict:
            d = {"label": st.labels[g], "int_degree": list(st.degrees[g])}
            md = self.multidegree(st.degrees[g])
            if md is not None:
                d.update(md.to_json())
            return d

        maps = []
        for k, f in enumerate(self.maps):
            entries = []
            for col, img in enumerate(f.images):
                for row, m in sorted(img):
                    entries.append({"row": row, "col": col, "u": list(m[: self.ell]), "v": list(m[self.ell :])})
            maps.append({"from": k + 1, "to": k, "entries": entries})
        return {
            "ell": self.ell,
            "box": self.box,
            "betti": list(self.betti),
            "stages": [{"generators": [gen(st, g) for g in range(len(st))]} for st in self.stages],
            "maps": maps,
        }

    def to_text(self) -> str:
        lines = [f"Betti numbers: {self.betti}"]
        for k, f in enumerate(self.maps):
            for g, img in enumerate(f.images):
                lines.append(f"d{k + 1} {f.source.labels[g]} = {render_element(img, f.target.labels)}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# construction


def resolve(
    F0: FreeModule,
    relations: Sequence[Element],
    box: int,
    presentation: ModulePresentation | None = None,
    max_length: int | None = None,
) -> FreeResolution:
    """Minimal resolution of F0 / <relations> in all degrees of weight <= box."""
    ell = F0.ell
    max_length = 2 * ell if max_length is None else max_length
    rel_deg: dict[Degree, list[Element]] = {}
    for r in relations:
        if r:
            rel_deg.setdefault(F0.degree_of(r), []).append(r)
    stages = [F0]
    maps: list[FreeMap] = []
    degrees = F0.reachable_degrees(box)
    maxw = [max((degree_weight(d) for d in F0.degrees), default=0)]
    for D in degrees:
        for k in range(1, max_length + 2):
            if k == len(stages):
                stages.append(FreeModule(ell, [], []))
                maps.append(FreeMap(stages[k], stages[k - 1], []))
                maxw.append(-1)
            src, tgt = stages[k], stages[k - 1]
            dmap = maps[k - 1]
            image = F2Span(dmap.columns(D))
            if tgt.dim(D) == 0:
                break
            if k == 1:
                new = [r for r in rel_deg.get(D, []) if image.add(tgt.vector(r, D))]
            else:
                _, kernel = maps[k - 2].rank_and_kernel(D)
                new = [tgt.element(v, D) for v in kernel if image.add(v)]
            for img in new:
                if degree_weight(D) >= box:
                    raise InsufficientBoxError(
                        f"stage-{k} generator at degree {D} reaches the box boundary (weight {box}); enlarge the box"
                    )
                if k > max_length:
                    raise InexactResolutionError(f"resolution longer than {max_length} at degree {D}")
                src.add_generator(D, f"x{k}_{len(src) + 1}")
                dmap.images.append(img)
                maxw[k] = max(maxw[k], degree_weight(D))
    while len(stages) > 1 and not len(stages[-1]):
        stages.pop()
        maps.pop()
        maxw.pop()
    return FreeResolution(ell, stages, maps, box, presentation, maxw)


def free_resolution(p: ModulePresentation, box: int) -> FreeResolution:
    F0 = p.module()
    rels = p.relation_elements("pruned") + p.relation_elements("full")
    return resolve(F0, rels, box, p)


def resolution_from_maps(
    F0: FreeModule,
    stages: Sequence[tuple[Sequence[str], Sequence[Element]]],
    box: int,
    presentation: ModulePresentation | None = None,
) -> FreeResolution:
    """Assemble a resolution from hand-entered maps; degrees are read off the images."""
    mods = [F0]
    maps = []
    for labels, images in stages:
        prev = mods[-1]
        degs = [prev.degree_of(img) for img in images]
        st = FreeModule(F0.ell, degs, labels)
        maps.append(FreeMap(st, prev, images))
        mods.append(st)
    return FreeResolution(F0.ell, mods, maps, box, presentation, [max((degree_weight(d) for d in m.degrees), default=-1) for m in mods])


# ---------------------------------------------------------------------------
# verification


@dataclass
class ExactnessReport:
    ok: bool
    failures: list[tuple[int, Degree, str]]
    degrees_checked: int

    def __bool__(self) -> bool:
        return self.ok


def verify_exact(
    r: FreeResolution,
    p: ModulePresentation | None = None,
    box: int | None = None,
    raise_on_failure: bool = False,
) -> ExactnessReport:
    """Degreewise dim ker d_k = rank d_{k+1}, injective last map, matching cokernel."""
    box = r.box if box is None else box
    failures = []
    failures.extend((k, (), msg) for k, msg in r.d_squared_failures())
    F0 = r.stages[0]
    rel_elems = rel_degs = None
    if p is not None:
        rel_elems = p.relation_elements()
        rel_degs = [F0.degree_of(e) for e in rel_elems]
    degrees = F0.reachable_degrees(box)
    for D in degrees:
        ranks = [f.rank_and_kernel(D) for f in r.maps]
        for k in range(len(r.maps)):
            dim_src = r.stages[k + 1].dim(D)
            rank_k = ranks[k][0]
            ker = dim_src - rank_k
            img_next = ranks[k + 1][0] if k + 1 < len(r.maps) else 0
            if ker != img_next:
                failures.append((k + 1, D, f"dim ker d{k + 1} = {ker} but rank d{k + 2} = {img_next}"))
        if p is not None:
            coker = F0.dim(D) - (ranks[0][0] if ranks else 0)
            expect = F0.dim(D) - span_at(F0, rel_elems, rel_degs, D).dim
            if coker != expect:
                failures.append((0, D, f"cokernel dimension {coker}, module dimension {expect}"))
    rep = ExactnessReport(not failures, failures, len(degrees))
    if raise_on_failure and failures:
        k, D, msg = failures[0]
        raise InexactResolutionError(f"stage {k}, degree {D}: {msg}")
    return rep


# ---------------------------------------------------------------------------
# complexes and their reductions


@dataclass
class FreeComplex:
    """Free complex over F2[U_i, V_i] with homological degrees dropping by one under d."""

    ell: int
    labels: list[str]
    degrees: list[Degree]
    hdeg: list[int]
    diffs: list[Element]

    def __post_init__(self) -> None:
        self.module = FreeModule(self.ell, self.degrees, self.labels)

    def validate(self) -> None:
        for g, img in enumerate(self.diffs):
            for h, m in img:
                if self.hdeg[h] != self.hdeg[g] - 1:
                    raise NotAComplexError(f"d {self.labels[g]} hits {self.labels[h]} outside homological degree - 1")
                d = tuple(x + y for x, y in zip(self.degrees[h], key_degree(m)))
                if d != self.degrees[g]:
                    raise NotAComplexError(f"d {self.labels[g]} is not homogeneous")
            acc: set = set()
            for h, m in img:
                acc ^= set(scale(m, self.diffs[h]))
            if acc:
                raise NotAComplexError(f"d^2 {self.labels[g]} = {render_element(frozenset(acc), self.labels)}")

    def _basis(self, D: Degree, h: int, killed: frozenset) -> list:
        return [(g, m) for g, m in self.module.basis(D) if self.hdeg[g] == h and not any(m[i] for i in killed)]

    def homology(self, max_weight: int, killed: Sequence[int] = ()) -> dict[tuple[Degree, int], int]:
        """Graded dimensions of H(C / (killed variables)) in weights <= max_weight.

        ``killed`` lists positions in the monomial key (U_i at i, V_i at l + i).
        """
        killed = frozenset(killed)
        out = {}
        hs = sorted(set(self.hdeg))
        for D in self.module.reachable_degrees(max_weight):
            bases = {h: self._basis(D, h, killed) for h in hs}
            bases[hs[0] - 1] = []
            ranks = {}
            for h in hs:
                tgt = {t: k for k, t in enumerate(bases[h - 1])}
                cols = []
                for g, m in bases[h]:
                    v = 0
                    for t in scale(m, self.diffs[g]):
                        if not any(t[1][i] for i in killed):
                            v ^= 1 << tgt[t]
                    cols.append(v)
                reduced, _ = f2_reduce(cols)
                ranks[h] = sum(1 for v in reduced if v)
            for h in hs:
                dim = len(bases[h]) - ranks[h] - ranks.get(h + 1, 0)
                if dim:
                    out[(D, h)] = dim
        return out

    def total_rank_mod_all(self) -> int:
        """Rank of H(C / (all U_i, V_i)), finite for a finitely generated complex."""
        allvars = range(2 * self.ell)
        weights = [degree_weight(d) for d in self.degrees]
        return sum(self.homology(max(weights, default=0), allvars).values())


def mod_v_homology(r: FreeResolution | FreeComplex, box: int | None = None) -> dict[tuple[Degree, int], int]:
    """Homology of the resolution with every V_i set to zero."""
    cx = r.to_complex() if isinstance(r, FreeResolution) else r
    if box is None:
        box = r.box
    return cx.homology(box, killed=range(cx.ell, 2 * cx.ell))


def koszul_homology(p: ModulePresentation, box: int) -> dict[tuple[Degree, int], int]:
    """Homology of M tensor Lambda(xi_1..xi_l) with d xi_i = V_i, per (degree, cube degree)."""
    F0 = p.module()
    ell = p.ell
    rels = p.relation_elements()
    rdeg = [F0.degree_of(e) for e in rels]
    subsets = {h: list(combinations(range(ell), h)) for h in range(ell + 1)}

    def shift(S) -> Degree:
        return tuple(1 if i in S else 0 for i in range(ell)) + (0,)

    span_cache: dict[Degree, F2Span] = {}

    def nspan(D: Degree) -> F2Span:
        sp = span_cache.get(D)
        if sp is None:
            sp = span_cache[D] = span_at(F0, rels, rdeg, D)
        return sp

    def vkey(i: int) -> tuple[int, ...]:
        return tuple(1 if k == ell + i else 0 for k in range(2 * ell))

    degrees = set()
    for D in F0.reachable_degrees(box):
        for h in range(ell + 1):
            for S in subsets[h]:
                E = tuple(x + y for x, y in zip(D, shift(S)))
                if degree_weight(E) <= box:
                    degrees.add(E)
    out = {}
    for D in sorted(degrees, key=lambda d: (degree_weight(d), d)):
        # chain group in cube degree h: sum over |S| = h of M at D - deg(V_S)
        blocks: dict[int, list[tuple[tuple, Degree, int]]] = {}
        for h in range(ell + 1):
            off = 0
            blk = []
            for S in subsets[h]:
                Dp = sub_degree(D, shift(S))
                blk.append((S, Dp, off))
                off += F0.dim(Dp)
            blocks[h] = blk

        def block_total(h: int) -> int:
            return sum(F0.dim(Dp) for _, Dp, _ in blocks[h])

        def rel_vectors(h: int) -> list[int]:
            vecs = []
            for S, Dp, off in blocks[h]:
                vecs.extend(v << off for v in nspan(Dp)._owner.values())
            return vecs

        dims = {}
        ranks = {}
        for h in range(ell + 1):
            nsp = rel_vectors(h)
            dims[h] = block_total(h) - len(nsp)
        for h in range(1, ell + 1):
            tgt_pos = {S: (Dp, off) for S, Dp, off in blocks[h - 1]}
            nt = rel_vectors(h - 1)
            sp = F2Span(nt)
            base = sp.dim
            for S, Dp, off in blocks[h]:
                for g, m in F0.basis(Dp):
                    v = 0
                    for i in S:
                        T = tuple(x for x in S if x != i)
                        Dq, toff = tgt_pos[T]
                        elem = frozenset([(g, tuple(a + b for a, b in zip(m, vkey(i))))])
                        v ^= F0.vector(elem, Dq) << toff
                    sp.add(v)
            ranks[h] = sp.dim - base
        for h in range(ell + 1):
            dim = dims[h] - ranks.get(h, 0) - ranks.get(h + 1, 0)
            if dim:
                out[(D, h)] = dim
    return out


def compare_gn(p: ModulePresentation, r: FreeResolution, box: int) -> tuple[bool, list]:
    """Degreewise comparison of the Koszul model with the resolution mod V."""
    kz = koszul_homology(p, box)
    mv = mod_v_homology(r, box)
    diffs = [(k, kz.get(k, 0), mv.get(k, 0)) for k in sorted(set(kz) | set(mv)) if kz.get(k, 0) != mv.get(k, 0)]
    return not diffs, diffs


def regenerate(r: FreeResolution, box: int | None = None) -> FreeResolution:
    """Resolve the cokernel of the first map again from scratch."""
    box = r.box if box is None else box
    F0 = FreeModule(r.ell, list(r.stages[0].degrees), list(r.stages[0].labels))
    rels = r.maps[0].images if r.maps else []
    return resolve(F0, rels, box, r.presentation)


def format_degree(r: FreeResolution, D: Degree) -> str:
    md = r.multidegree(D)
    if md is None:
        return str(D)
    return f"A=({', '.join(fmt_q(x) for x in md.alexander)}) gr_w={fmt_q(md.maslov_w)}"
