"""Reference graphs, Alexander data and hand-entered resolutions.

The T(3,3) and T(4,4) resolutions are transcribed term by term; generator
degrees are read off from the images, so a transcription error shows up as
an inhomogeneous element or as a failed exactness check.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .algebra_core import parse_monomial
from .freemodule import Element, FreeModule
from .presentation import ModulePresentation, torus_presentation
from .resolution import FreeComplex, FreeResolution, resolution_from_maps

GRAPHS = {
    "s3": "# S^3 as the boundary of a (-1)-disk bundle\nvertex v -1\n",
    "e8": "".join(
        ["# Poincare sphere: negative E8 plumbing\n"]
        + [f"vertex v{i} -2\n" for i in range(1, 9)]
        + [f"edge v{i} v{i + 1}\n" for i in range(1, 7)]
        + ["edge v3 v8\n"]
    ),
    "unknot": "vertex v -1\narrow a1\nedge v a1\n",
    "hopf": "# T(2,2): two fibres of the (-1)-sphere\nvertex v -1\narrow a1\narrow a2\nedge v a1\nedge v a2\n",
    "t24": "vertex w -2\nvertex v -1\nedge v w\narrow a1\narrow a2\nedge v a1\nedge v a2\n",
    "t33": "vertex v -1\n" + "".join(f"arrow a{i}\nedge v a{i}\n" for i in (1, 2, 3)),
    "t44": "vertex v -1\n" + "".join(f"arrow a{i}\nedge v a{i}\n" for i in (1, 2, 3, 4)),
}

BAD_GRAPH = "vertex v -1\nvertex w\nedge v w\n"


class _Builder:
    """Collects ``monomial * label`` terms, expanding aliases and cancelling mod 2."""

    def __init__(self, ell: int, labels: Sequence[str], aliases: dict[str, Sequence[str]] | None = None) -> None:
        self.ell = ell
        self.pos = {lab: k for k, lab in enumerate(labels)}
        self.aliases = aliases or {}

    def __call__(self, terms: Iterable[tuple[str, str]]) -> Element:
        acc: set = set()
        for mono, label in terms:
            key = parse_monomial(mono, self.ell).key
            for lab in self.aliases.get(label, (label,)):
                acc ^= {(self.pos[lab], key)}
        return frozenset(acc)


def _prod(letter: str, idx: Iterable[int]) -> str:
    return "".join(f"{letter}{i}" for i in idx) or "1"


# ---------------------------------------------------------------------------
# T(3,3)


def t33_maps(drop: tuple[str, int] | None = None) -> list[tuple[list[str], list[Element]]]:
    """Stages of the T(3,3) resolution.  ``drop=(label, k)`` deletes term k of that image."""
    ell = 3
    X = _Builder(ell, ["X1", "X2", "X3"])
    c1 = ["b1", "b2", "b3", "B1", "B2", "B3", "Z1", "Z2"]
    d1: dict[str, list] = {}
    for i in (1, 2, 3):
        rest = [j for j in (1, 2, 3) if j != i]
        d1[f"b{i}"] = [(f"U{i}", "X1"), (_prod("V", rest), "X2")]
        d1[f"B{i}"] = [(f"V{i}", "X3"), (_prod("U", rest), "X2")]
    d1["Z1"] = [("U2V2", "X2"), ("U3V3", "X2")]
    d1["Z2"] = [("U1V1", "X2"), ("U3V3", "X2")]

    c2 = ["c1", "c2", "c3", "d1", "d2", "d3"]
    d2: dict[str, list] = {}
    for k in (1, 2, 3):
        i, j = [x for x in (1, 2, 3) if x != k]
        d2[f"c{k}"] = [(f"U{i}", f"b{j}"), (f"U{j}", f"b{i}"), (f"V{k}", f"Z{k}")]
        d2[f"d{k}"] = [(f"V{i}", f"B{j}"), (f"V{j}", f"B{i}"), (f"U{k}", f"Z{k}")]
    d3 = {"e": [(f"U{k}", f"c{k}") for k in (1, 2, 3)] + [(f"V{k}", f"d{k}") for k in (1, 2, 3)]}

    stages = [(c1, d1, X), (c2, d2, _Builder(ell, c1, {"Z3": ("Z1", "Z2")})), (["e"], d3, _Builder(ell, c2))]
    return _assemble(stages, drop)


def _assemble(stages, drop) -> list[tuple[list[str], list[Element]]]:
    out = []
    for labels, images, build in stages:
        elems = []
        for lab in labels:
            terms = list(images[lab])
            if drop is not None and drop[0] == lab:
                del terms[drop[1]]
            elems.append(build(terms))
        out.append((labels, elems))
    return out


# ---------------------------------------------------------------------------
# T(4,4)

_C_GENS = {
    frozenset({1, 2, 3}): ((1, (2, 3)), (2, (1, 3)), (3, (1, 2))),
    frozenset({1, 2, 4}): ((1, (2, 4)), (4, (1, 2)), (2, (1, 4))),
    frozenset({1, 3, 4}): ((1, (3, 4)), (3, (1, 4)), (4, (1, 3))),
    frozenset({2, 3, 4}): ((2, (3, 4)), (3, (2, 4)), (4, (2, 3))),
}
_c_GENS = {1: ((2, 3), (3, 4)), 2: ((1, 3), (3, 4)), 3: ((1, 2), (2, 4)), 4: ((1, 2), (2, 3))}


def _clab(k: int, i: int, j: int) -> str:
    return f"c{i}{j}_{k}"


def _Clab(k: int, i: int, j: int) -> str:
    return f"C{k}_{i}{j}"


def t44_maps() -> list[tuple[list[str], list[Element]]]:
    ell = 4
    N = (1, 2, 3, 4)

    def comp(*idx):
        return [x for x in N if x not in idx]

    # stage 1
    c1: list[str] = []
    d1: dict[str, list] = {}
    for k in (2, 3):
        for i in (1, 2, 3):
            lab = f"Z{k}_{i}{i + 1}"
            c1.append(lab)
            d1[lab] = [(f"U{i}V{i}", f"X{k}"), (f"U{i + 1}V{i + 1}", f"X{k}")]
    for i in N:
        c1.append(f"a{i}")
        d1[f"a{i}"] = [(f"U{i}", "X1"), (_prod("V", comp(i)), "X2")]
    for i, j in combinations(N, 2):
        lab = f"B{i}{j}"
        c1.append(lab)
        d1[lab] = [(f"U{i}U{j}", "X2"), (_prod("V", comp(i, j)), "X3")]
    for i in N:
        c1.append(f"A{i}")
        d1[f"A{i}"] = [(_prod("U", comp(i)), "X3"), (f"V{i}", "X4")]

    al1: dict[str, tuple[str, ...]] = {}
    for k in (2, 3):
        for i, j in combinations(N, 2):
            al1[f"Z{k}_{i}{j}"] = tuple(f"Z{k}_{m}{m + 1}" for m in range(i, j))
    for i, j in combinations(N, 2):
        al1[f"B{j}{i}"] = (f"B{i}{j}",)

    # stage 2
    c2: list[str] = []
    d2: dict[str, list] = {}
    for i, j in combinations(N, 2):
        c2.append(f"a{i}{j}")
        d2[f"a{i}{j}"] = [(f"U{j}", f"a{i}"), (f"U{i}", f"a{j}"), (_prod("V", comp(i, j)), f"Z2_{i}{j}")]
    for i, j in combinations(N, 2):
        c2.append(f"A{i}{j}")
        d2[f"A{i}{j}"] = [(f"V{j}", f"A{i}"), (f"V{i}", f"A{j}"), (_prod("U", comp(i, j)), f"Z3_{i}{j}")]
    c_images: dict[str, list] = {}
    C_images: dict[str, list] = {}
    for k in N:
        for i, j in combinations(comp(k), 2):
            (l,) = comp(i, j, k)
            C_images[_Clab(k, i, j)] = [(f"U{j}", f"B{i}{k}"), (f"U{i}", f"B{j}{k}"), (f"V{l}", f"Z3_{i}{j}")]
            c_images[_clab(k, i, j)] = [(f"V{i}", f"B{i}{k}"), (f"V{j}", f"B{j}{k}"), (f"U{k}", f"Z2_{i}{j}")]
    al2: dict[str, tuple[str, ...]] = {}
    for k, pairs in _c_GENS.items():
        for i, j in pairs:
            c2.append(_clab(k, i, j))
            d2[_clab(k, i, j)] = c_images[_clab(k, i, j)]
        (i, j), = [p for p in combinations(comp(k), 2) if p not in pairs]
        al2[_clab(k, i, j)] = tuple(_clab(k, *p) for p in pairs)
    for triple in _C_GENS.values():
        gens, dep = triple[:2], triple[2]
        for k, (i, j) in gens:
            c2.append(_Clab(k, i, j))
            d2[_Clab(k, i, j)] = C_images[_Clab(k, i, j)]
        al2[_Clab(dep[0], *dep[1])] = tuple(_Clab(k, i, j) for k, (i, j) in gens)

    # stage 3
    c3: list[str] = []
    d3: dict[str, list] = {}
    for i, j, k in combinations(N, 3):
        (l,) = comp(i, j, k)
        c3.append(f"a{i}{j}{k}")
        d3[f"a{i}{j}{k}"] = [
            (f"U{i}", f"a{j}{k}"),
            (f"U{j}", f"a{i}{k}"),
            (f"U{k}", f"a{i}{j}"),
            (f"V{l}V{i}", _clab(i, j, k)),
            (f"V{l}V{j}", _clab(j, i, k)),
            (f"V{l}V{k}", _clab(k, i, j)),
        ]
    for i, j, k in combinations(N, 3):
        (l,) = comp(i, j, k)
        c3.append(f"A{i}{j}{k}")
        d3[f"A{i}{j}{k}"] = [
            (f"V{i}", f"A{j}{k}"),
            (f"V{j}", f"A{i}{k}"),
            (f"V{k}", f"A{i}{j}"),
            (f"U{l}U{i}", _Clab(l, j, k)),
            (f"U{l}U{j}", _Clab(l, i, k)),
            (f"U{l}U{k}", _Clab(l, i, j)),
        ]
    for i, j in combinations(N, 2):
        k, l = comp(i, j)
        c3.append(f"Bp{i}{j}")
        d3[f"Bp{i}{j}"] = [
            (f"V{k}", _Clab(k, i, j)),
            (f"V{l}", _Clab(l, i, j)),
            (f"U{i}", _clab(j, k, l)),
            (f"U{j}", _clab(i, k, l)),
        ]

    # stage 4
    d4: dict[str, list] = {"d1234": [], "D1234": []}
    for i in N:
        j, k, l = comp(i)
        d4["d1234"].append((f"U{i}", f"a{j}{k}{l}"))
        d4["D1234"].append((f"V{i}", f"A{j}{k}{l}"))
    for i, j in combinations(N, 2):
        k, l = comp(i, j)
        d4["d1234"].append((f"V{i}V{j}", f"Bp{i}{j}"))
        d4["D1234"].append((f"U{i}U{j}", f"Bp{k}{l}"))

    stages = [
        (c1, d1, _Builder(ell, ["X1", "X2", "X3", "X4"])),
        (c2, d2, _Builder(ell, c1, al1)),
        (c3, d3, _Builder(ell, c2, al2)),
        (["d1234", "D1234"], d4, _Builder(ell, c3)),
    ]
    return _assemble(stages, None)


def torus_fixture_resolution(n: int, box: int, drop: tuple[str, int] | None = None) -> FreeResolution:
    """Hand-entered resolution of the T(n,n) module (n = 3 or 4) on torus_presentation(n)."""
    pres = torus_presentation(n)
    F0 = pres.module()
    if n == 3:
        maps = t33_maps(drop)
    elif n == 4:
        if drop is not None:
            raise ValueError("mutations are only provided for T(3,3)")
        maps = t44_maps()
    else:
        raise ValueError("fixtures exist for n = 3 and n = 4")
    return resolution_from_maps(F0, maps, box, pres)


def fixture_presentation(n: int) -> ModulePresentation:
    return torus_presentation(n)


# ---------------------------------------------------------------------------
# the two complexes over F2[U, V] with isomorphic homology


def complex_C() -> FreeComplex:
    """u plus the square w -> (x, y) -> z with edges labelled U and V."""
    labels = ["z", "x", "y", "w", "u"]
    degrees = [(0, 0), (1, 0), (-1, 1), (0, 1), (0, 1)]
    hdeg = [0, 1, 1, 2, 1]
    U, V = (1, 0), (0, 1)
    diffs = [
        frozenset(),
        frozenset({(0, V)}),
        frozenset({(0, U)}),
        frozenset({(1, U), (2, V)}),
        frozenset(),
    ]
    return FreeComplex(1, labels, degrees, hdeg, diffs)


def complex_D() -> FreeComplex:
    """a -> b by V and c -> b by U."""
    labels = ["b", "a", "c"]
    degrees = [(0, 0), (1, 0), (-1, 1)]
    hdeg = [0, 1, 1]
    U, V = (1, 0), (0, 1)
    diffs = [frozenset(), frozenset({(0, V)}), frozenset({(0, U)})]
    return FreeComplex(1, labels, degrees, hdeg, diffs)


def module_F0(n: int) -> FreeModule:
    return torus_presentation(n).module()


__all__ = [
    "GRAPHS",
    "BAD_GRAPH",
    "t33_maps",
    "t44_maps",
    "torus_fixture_resolution",
    "fixture_presentation",
    "complex_C",
    "complex_D",
    "module_F0",
]
