"""Generators and relations of link Floer homology for L-space links.

The module is determined by the H-function: it is one-dimensional over F2
in each Alexander degree s and each Maslov grading gr <= -2H(s) of the
right parity.  Minimal generators sit where H drops by one towards every
lower neighbour and is flat towards every upper one; relations are the
binomials between generators plus the diagonal ``(U_iV_i + U_jV_j) X``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Mapping, Sequence

from .algebra_core import Monomial, MultiDegree, degree_weight, fmt_q
from .errors import InsufficientBoxError
from .freemodule import Element, FreeModule, minimal_subset, span_at

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class Generator:
    label: str
    alexander: Point
    maslov_w: Fraction
    integral_alexander: Point | None = None

    @property
    def degree(self) -> MultiDegree:
        return MultiDegree(self.alexander, self.maslov_w)


@dataclass(frozen=True)
class Relation:
    """``sum coeff * X_gen = 0`` with ``terms`` a tuple of (Monomial, generator index)."""

    kind: str  # "r1" binomial between generators, "r2" diagonal
    terms: tuple[tuple[Monomial, int], ...]

    def element(self) -> Element:
        return frozenset((g, m.key) for m, g in self.terms)

    def render(self, labels: Sequence[str]) -> str:
        def one(m: Monomial, g: int) -> str:
            return labels[g] if m.is_one() else f"{m} {labels[g]}"

        (m1, g1), (m2, g2) = self.terms
        return f"{one(m1, g1)} = {one(m2, g2)}"


@dataclass
class ModulePresentation:
    ell: int
    generators: list[Generator]
    relations: list[Relation]
    full_relations: list[Relation] = field(default_factory=list)

    # integer-degree frame: reference generator with maximal gr_w - sum(A)
    def _ref(self) -> Generator:
        return max(self.generators, key=lambda x: (x.maslov_w - sum(x.alexander), x.alexander))

    def int_degree(self, g: Generator) -> tuple[int, ...]:
        ref = self._ref()
        a = [x - y for x, y in zip(g.alexander, ref.alexander)]
        n = (ref.maslov_w - g.maslov_w) / 2
        if any(x.denominator != 1 for x in a) or n.denominator != 1:
            raise ValueError(f"generator {g.label} is not in the Spin^c sector of {ref.label}")
        return tuple(int(x) for x in a) + (int(n),)

    def multidegree(self, D: Sequence[int]) -> MultiDegree:
        ref = self._ref()
        A = tuple(r + x for r, x in zip(ref.alexander, D[:-1]))
        return MultiDegree(A, ref.maslov_w - 2 * D[-1])

    def int_degree_of(self, A: Sequence[Fraction], gr: Fraction) -> tuple[int, ...]:
        ref = self._ref()
        a = [Fraction(x) - y for x, y in zip(A, ref.alexander)]
        n = (ref.maslov_w - Fraction(gr)) / 2
        return tuple(int(x) for x in a) + (int(n),)

    @property
    def labels(self) -> list[str]:
        return [g.label for g in self.generators]

    def module(self) -> FreeModule:
        return FreeModule(self.ell, [self.int_degree(g) for g in self.generators], self.labels)

    def relation_elements(self, which: str = "pruned") -> list[Element]:
        rels = self.relations if which == "pruned" else self.full_relations
        return [r.element() for r in rels]

    def to_json(self) -> dict:
        def rel(r: Relation) -> dict:
            return {
                "kind": r.kind,
                "terms": [
                    {"generator": self.generators[g].label, "u": list(m.u_exps), "v": list(m.v_exps)}
                    for m, g in r.terms
                ],
            }

        gens = []
        for g in self.generators:
            d = {"label": g.label, **g.degree.to_json()}
            if g.integral_alexander is not None:
                d["integral_alexander"] = [fmt_q(x) for x in g.integral_alexander]
            gens.append(d)
        return {
            "ell": self.ell,
            "generators": gens,
            "relations": [rel(r) for r in self.relations],
            "full_relations": [rel(r) for r in self.full_relations],
        }

    def to_text(self) -> str:
        lines = ["generators:"]
        for g in self.generators:
            A = ", ".join(fmt_q(x) for x in g.alexander)
            extra = ""
            if g.integral_alexander is not None:
                extra = "  integral A = (" + ", ".join(fmt_q(x) for x in g.integral_alexander) + ")"
            lines.append(f"  {g.label}: A = ({A}), gr_w = {fmt_q(g.maslov_w)}{extra}")
        lines.append(f"relations ({len(self.relations)} of {len(self.full_relations) or len(self.relations)}):")
        for r in self.relations:
            lines.append("  " + r.render(self.labels))
        return "\n".join(lines)


def presentation_from_json(doc: dict | str) -> ModulePresentation:
    if isinstance(doc, str):
        doc = json.loads(doc)
    gens = []
    for g in doc["generators"]:
        ia = g.get("integral_alexander")
        gens.append(
            Generator(
                g["label"],
                tuple(Fraction(x) for x in g["alexander"]),
                Fraction(g["gr_w"]),
                None if ia is None else tuple(Fraction(x) for x in ia),
            )
        )
    pos = {g.label: k for k, g in enumerate(gens)}

    def rel(d) -> Relation:
        return Relation(
            d["kind"], tuple((Monomial(tuple(t["u"]), tuple(t["v"])), pos[t["generator"]]) for t in d["terms"])
        )

    return ModulePresentation(
        doc["ell"], gens, [rel(r) for r in doc["relations"]], [rel(r) for r in doc.get("full_relations", [])]
    )


# ---------------------------------------------------------------------------
# from the H-function


def _h_view(H) -> tuple[Callable, set, Point | None]:
    if isinstance(H, Mapping):
        vals = {tuple(Fraction(x) for x in k): Fraction(v) for k, v in H.items()}
        return vals.__getitem__, set(vals), None
    shift = getattr(H, "shift", None)
    return H, set(H.values), shift


def minimal_generators(H) -> list[Generator]:
    """Points where H(s - e_i) - H(s) = 1 and H(s) - H(s + e_i) = 0 for every i."""
    h, pts, shift = _h_view(H)
    found = []
    for s in sorted(pts):
        ell = len(s)
        ok = True
        complete = True
        for i in range(ell):
            lo = tuple(x - (k == i) for k, x in enumerate(s))
            hi = tuple(x + (k == i) for k, x in enumerate(s))
            if lo in pts:
                ok &= h(lo) - h(s) == 1
            else:
                complete = False
            if hi in pts:
                ok &= h(s) - h(hi) == 0
            else:
                complete = False
            if not ok:
                break
        if not ok:
            continue
        if not complete:
            raise InsufficientBoxError(
                f"inconclusive, enlarge box: candidate generator at {tuple(map(fmt_q, s))} lies on the boundary"
            )
        found.append(s)
    found.sort(key=lambda s: (-sum(s), tuple(-x for x in s)))
    gens = []
    for k, s in enumerate(found, 1):
        integral = None if shift is None else tuple(x - d for x, d in zip(s, shift))
        gens.append(Generator(f"X{k}", s, -2 * h(s), integral))
    return gens


def _binomials(ell: int, g1: int, a: Generator, g2: int, b: Generator) -> list[Relation]:
    out = []
    delta = [y - x for x, y in zip(a.alexander, b.alexander)]
    if any(d.denominator != 1 for d in delta):
        return out
    delta = [int(d) for d in delta]
    ranges = [range(abs(d) + 1) for d in delta]
    for split in product(*ranges):
        pu, pv, qu, qv = [0] * ell, [0] * ell, [0] * ell, [0] * ell
        for k, (d, i) in enumerate(zip(delta, split)):
            j = abs(d) - i
            if d > 0:
                pv[k], qu[k] = i, j
            elif d < 0:
                pu[k], qv[k] = i, j
        P = Monomial(tuple(pu), tuple(pv))
        Q = Monomial(tuple(qu), tuple(qv))
        if a.maslov_w + P.gr_w == b.maslov_w + Q.gr_w:
            out.append(Relation("r1", ((P, g1), (Q, g2))))
    return out


def _diagonals(ell: int, g: int) -> list[Relation]:
    out = []
    for i, j in combinations(range(ell), 2):
        ui = Monomial.U(i, ell) * Monomial.V(i, ell)
        uj = Monomial.U(j, ell) * Monomial.V(j, ell)
        out.append(Relation("r2", ((ui, g), (uj, g))))
    return out


def relations(H, gens: Sequence[Generator]) -> list[Relation]:
    """Full relation list: every binomial between generator pairs, then the diagonals."""
    if not gens:
        return []
    ell = len(gens[0].alexander)
    out = []
    for (i, a), (j, b) in combinations(enumerate(gens), 2):
        out.extend(_binomials(ell, i, a, j, b))
    for g in range(len(gens)):
        out.extend(_diagonals(ell, g))
    return out


def prune_relations(pres: ModulePresentation, rels: Sequence[Relation]) -> list[Relation]:
    """Drop relations lying in the span of earlier ones at their degree.

    Order: relation degree weight, binomials before diagonals, generator
    indices, then exponents.
    """
    module = pres.module()
    elems = [r.element() for r in rels]

    def key(i: int):
        r = rels[i]
        D = module.degree_of(elems[i])
        return (
            degree_weight(D),
            r.kind != "r1",
            tuple(g for _, g in r.terms),
            tuple(tuple(-x for x in m.key) for m, _ in r.terms),
        )

    order = sorted(range(len(rels)), key=key)
    kept = minimal_subset(module, elems, order)
    return [rels[i] for i in kept]


def presentation_from_h(H) -> ModulePresentation:
    gens = minimal_generators(H)
    if not gens:
        raise InsufficientBoxError("no generators found in the box")
    ell = len(gens[0].alexander)
    full = relations(H, gens)
    pres = ModulePresentation(ell, gens, full, full)
    pres.relations = prune_relations(pres, full)
    return pres


# ---------------------------------------------------------------------------
# T(n, n) closed forms


def _h1(x: Fraction) -> Fraction:
    return (abs(x) - x) / 2


def torus_h(n: int, s: Sequence) -> Fraction:
    s = sorted(Fraction(x) for x in s)
    if len(s) != n:
        raise ValueError("need one coordinate per component")
    half = Fraction(n - 1, 2)
    return sum((_h1(x - half + k) for k, x in enumerate(s)), Fraction(0))


def torus_presentation(n: int) -> ModulePresentation:
    """Generators X_k on the diagonal at (n+1)/2 - k with staircase and diagonal relations."""
    if n < 2:
        raise ValueError("n must be at least 2")
    gens = [
        Generator(f"X{k}", (Fraction(n + 1, 2) - k,) * n, Fraction(-k * (k - 1)), (Fraction(1 - k),) * n)
        for k in range(1, n + 1)
    ]
    rels = []
    for k in range(1, n):
        for I in combinations(range(n), k):
            u = tuple(int(i in I) for i in range(n))
            v = tuple(1 - x for x in u)
            rels.append(
                Relation(
                    "r1",
                    (
                        (Monomial(u, (0,) * n), k - 1),
                        (Monomial((0,) * n, v), k),
                    ),
                )
            )
    for g in range(n):
        rels.extend(_diagonals(n, g))
    return ModulePresentation(n, gens, rels, list(rels))


def torus_hfunction_table(n: int, radius: int) -> dict[Point, Fraction]:
    """torus_h on the cube of half-width ``radius`` around the origin."""
    base = Fraction(n - 1, 2) - int(Fraction(n - 1, 2))
    axis = [base + k for k in range(-radius, radius + 1)]
    return {s: torus_h(n, s) for s in product(axis, repeat=n)}


# ---------------------------------------------------------------------------
# comparison and graded dimensions


def presentations_equivalent(p: ModulePresentation, q: ModulePresentation) -> tuple[bool, str]:
    """Same generator degrees and the same relation submodule, up to relabeling."""
    if p.ell != q.ell or len(p.generators) != len(q.generators):
        return False, "different number of components or generators"
    qpos = {}
    for k, g in enumerate(q.generators):
        key = (g.alexander, g.maslov_w)
        if key in qpos:
            raise ValueError("two generators share a degree; matching is ambiguous")
        qpos[key] = k
    remap = {}
    for k, g in enumerate(p.generators):
        j = qpos.get((g.alexander, g.maslov_w))
        if j is None:
            return False, f"generator {g.label} has no partner of degree {g.degree}"
        remap[k] = j
    module = q.module()
    p_elems = [frozenset((remap[g], m) for g, m in e) for e in p.relation_elements()]
    q_elems = q.relation_elements()
    for src, dst, name in ((p_elems, q_elems, "first"), (q_elems, p_elems, "second")):
        dst_deg = [module.degree_of(e) for e in dst]
        for e in src:
            D = module.degree_of(e)
            if module.vector(e, D) not in span_at(module, dst, dst_deg, D):
                return False, f"a relation of the {name} presentation is not implied in degree {D}"
    return True, "equivalent"


def quotient_dims(pres: ModulePresentation, max_weight: int) -> dict[tuple[int, ...], int]:
    """dim of (F0 / relations) in every degree of weight <= max_weight."""
    module = pres.module()
    elems = pres.relation_elements()
    degs = [module.degree_of(e) for e in elems]
    out = {}
    for D in module.reachable_degrees(max_weight):
        out[D] = module.dim(D) - span_at(module, elems, degs, D).dim
    return out


def tower_dims_agree(pres: ModulePresentation, H, max_weight: int) -> tuple[bool, list]:
    """Compare quotient dims with the towers predicted by H wherever H is known."""
    h, pts, _ = _h_view(H)
    bad = []
    for D, dim in quotient_dims(pres, max_weight).items():
        md = pres.multidegree(D)
        if md.alexander not in pts:
            continue
        expect = int(md.maslov_w <= -2 * h(md.alexander))
        if dim != expect:
            bad.append((D, dim, expect))
    return not bad, bad


def degree_piece(pres: ModulePresentation, D) -> tuple[list, list]:
    """Basis of F0 at D and the relation span's basis, for inspection."""
    module = pres.module()
    elems = pres.relation_elements()
    degs = [module.degree_of(e) for e in elems]
    span = span_at(module, elems, degs, tuple(D))
    return list(module.basis(tuple(D))), [module.element(v, tuple(D)) for v in span._owner.values()]


__all__ = [
    "Generator",
    "Relation",
    "ModulePresentation",
    "minimal_generators",
    "relations",
    "prune_relations",
    "presentation_from_h",
    "presentation_from_json",
    "torus_h",
    "torus_presentation",
    "torus_hfunction_table",
    "presentations_equivalent",
    "quotient_dims",
    "tower_dims_agree",
]
