"""Finitely generated multigraded free modules over F2[U_1, V_1, ..., U_l, V_l].

Degrees are the integer tuples of :mod:`plumblat.algebra_core`:
``(a_1, ..., a_l, n)`` with weight ``2n + sum(a)``.  An element is a
frozenset of ``(generator, monomial key)`` terms; addition is symmetric
difference.  Every degree piece is a finite F2 vector space, so all
module questions reduce to bitset linear algebra one degree at a time.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .algebra_core import (
    F2Span,
    degree_weight,
    key_degree,
    key_mul,
    monomials_of_degree,
    sub_degree,
)
from .kernels import f2_reduce

Key = tuple[int, ...]
Degree = tuple[int, ...]
Element = frozenset  # of (int, Key)


def scale(key: Key, elem: Element) -> Element:
    return frozenset((g, key_mul(key, m)) for g, m in elem)


def element_degree(elem: Element, degrees: Sequence[Degree]) -> Degree:
    """Common degree of all terms; raises on an inhomogeneous element."""
    out = None
    for g, m in elem:
        d = tuple(x + y for x, y in zip(degrees[g], key_degree(m)))
        if out is None:
            out = d
        elif d != out:
            raise ValueError(f"inhomogeneous element: degrees {out} and {d}")
    if out is None:
        raise ValueError("the zero element has no degree")
    return out


class FreeModule:
    """Free module with generators in the given integer degrees."""

    def __init__(self, ell: int, degrees: Sequence[Degree], labels: Sequence[str] | None = None) -> None:
        self.ell = ell
        self.degrees = [tuple(d) for d in degrees]
        self.labels = list(labels) if labels is not None else [f"g{i}" for i in range(len(self.degrees))]
        self._basis: dict[Degree, tuple] = {}
        self._index: dict[Degree, dict] = {}

    def __len__(self) -> int:
        return len(self.degrees)

    def add_generator(self, degree: Degree, label: str) -> int:
        self.degrees.append(tuple(degree))
        self.labels.append(label)
        self._basis.clear()
        self._index.clear()
        return len(self.degrees) - 1

    def basis(self, D: Degree) -> tuple:
        b = self._basis.get(D)
        if b is None:
            out = []
            for g, dg in enumerate(self.degrees):
                for m in monomials_of_degree(sub_degree(D, dg)):
                    out.append((g, m))
            b = self._basis[D] = tuple(out)
            self._index[D] = {t: k for k, t in enumerate(b)}
        return b

    def dim(self, D: Degree) -> int:
        return len(self.basis(D))

    def vector(self, elem: Iterable, D: Degree) -> int:
        self.basis(D)
        idx = self._index[D]
        v = 0
        for t in elem:
            v ^= 1 << idx[t]
        return v

    def element(self, vec: int, D: Degree) -> Element:
        b = self.basis(D)
        out = []
        k = 0
        while vec:
            if vec & 1:
                out.append(b[k])
            vec >>= 1
            k += 1
        return frozenset(out)

    def degree_of(self, elem: Element) -> Degree:
        return element_degree(elem, self.degrees)

    def reachable_degrees(self, max_weight: int) -> list[Degree]:
        """Degrees of weight <= max_weight with a nonzero piece, by weight then lexicographically."""
        seen = set()
        for dg in self.degrees:
            w0 = degree_weight(dg)
            for m in _monomials_by_weight(self.ell, max_weight - w0):
                seen.add(tuple(x + y for x, y in zip(dg, key_degree(m))))
        return sorted(seen, key=lambda d: (degree_weight(d), d))


def _monomials_by_weight(ell: int, w: int):
    from .algebra_core import monomials_up_to

    if w < 0:
        return ()
    return monomials_up_to(w, ell)


class FreeMap:
    """Module map sending generator g of ``source`` to ``images[g]`` in ``target``."""

    def __init__(self, source: FreeModule, target: FreeModule, images: Sequence[Element]) -> None:
        self.source = source
        self.target = target
        self.images = list(images)
        for g, img in enumerate(self.images):
            if img and target.degree_of(img) != source.degrees[g]:
                raise ValueError(f"image of {source.labels[g]} is not in the generator's degree")

    def columns(self, D: Degree) -> list[int]:
        out = []
        for g, m in self.source.basis(D):
            out.append(self.target.vector(scale(m, self.images[g]), D))
        return out

    def apply(self, elem: Element) -> Element:
        acc: set = set()
        for g, m in elem:
            acc ^= set(scale(m, self.images[g]))
        return frozenset(acc)

    def rank_and_kernel(self, D: Degree) -> tuple[int, list[int]]:
        reduced, combos = f2_reduce(self.columns(D))
        rank = sum(1 for v in reduced if v)
        return rank, [c for v, c in zip(reduced, combos) if not v]


def span_at(module: FreeModule, elements: Sequence[Element], degrees: Sequence[Degree], D: Degree) -> F2Span:
    """F2-span at degree D of the submodule generated by ``elements``."""
    sp = F2Span()
    for e, de in zip(elements, degrees):
        for m in monomials_of_degree(sub_degree(D, de)):
            sp.add(module.vector(scale(m, e), D))
    return sp


def minimal_subset(module: FreeModule, candidates: Sequence[Element], order: Sequence[int] | None = None) -> list[int]:
    """Indices of a minimal generating subset of the submodule spanned by ``candidates``.

    Candidates are visited by degree weight and then in the given order; one
    is kept when it is not in the span of the kept ones at its degree.
    """
    order = list(range(len(candidates))) if order is None else list(order)
    degs = {i: module.degree_of(candidates[i]) for i in order}
    order.sort(key=lambda i: degree_weight(degs[i]))
    kept: list[int] = []
    by_degree: dict[Degree, list[int]] = {}
    for i in order:
        by_degree.setdefault(degs[i], []).append(i)
    for D in sorted(by_degree, key=lambda d: (degree_weight(d), d)):
        sp = span_at(module, [candidates[k] for k in kept], [degs[k] for k in kept], D)
        for i in by_degree[D]:
            if sp.add(module.vector(candidates[i], D)):
                kept.append(i)
    kept.sort(key=lambda i: order.index(i))
    return kept
