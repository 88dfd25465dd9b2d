"""The link lattice complex of an arrow-decorated plumbing tree.

Generators are pairs ``[K, E]`` with K characteristic on all vertices and
E a vertex set containing every arrow vertex; vertex sets are stored as
bitmasks over the graph's vertex order.  The complex splits over Spin^c
classes and Alexander degrees; each piece is truncated below a w-grading
floor and then closed under the differential, which gives an honest
subcomplex whose homology agrees with the full one in gradings at or above
the floor.
"""

from __future__ import annotations

import hashlib
import os
import pickle
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Iterable, Sequence

from .algebra_core import FUComplex, MultiDegree
from .errors import InsufficientBoxError
from .kernels import subset_min
from .plumbing import PlumbingGraph, SpincClass, mat_vec, spinc_classes, spinc_index

CACHE_VERSION = 1


@dataclass(frozen=True, order=True)
class LatticeGenerator:
    """``U^u_power ⊗ [K, E]``; ``E`` is a bitmask over vertex indices."""

    K: tuple[int, ...]
    E: int
    u_power: int = 0

    def vertex_set(self) -> frozenset[int]:
        return frozenset(i for i in range(len(self.K)) if self.E >> i & 1)

    def bare(self) -> "LatticeGenerator":
        return LatticeGenerator(self.K, self.E, 0) if self.u_power else self

    def times_u(self, k: int) -> "LatticeGenerator":
        return LatticeGenerator(self.K, self.E, self.u_power + k)


def as_mask(g: PlumbingGraph, vertices) -> int:
    """Accept a bitmask, or an iterable of vertex indices or ids."""
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << (g.index[v] if isinstance(v, str) else v)
    return m


class LatticeModel:
    """Per-graph caches: g-values, grading constants, lifts."""

    def __init__(self, g: PlumbingGraph) -> None:
        self.g = g
        self.Q = g.Q
        self.n = len(g.vertices)
        self.arrow_mask = as_mask(g, g.arrows)
        self.solid_mask = as_mask(g, g.solid)
        self._gmemo: dict[tuple, int] = {}

    # -- f and g -------------------------------------------------------------

    def f_value(self, K: Sequence[int], I: int) -> int:
        idx = [v for v in range(self.n) if I >> v & 1]
        two_f = sum(K[v] for v in idx) + sum(self.Q[a][b] for a in idx for b in idx)
        if two_f % 2:
            raise ValueError("K is not characteristic on I")
        return two_f // 2

    def _restricted(self, K: Sequence[int], E: int) -> tuple[list[int], list[int]]:
        idx = [v for v in range(self.n) if E >> v & 1]
        return idx, [K[v] for v in idx]

    def g_value(self, K: Sequence[int], E: int) -> int:
        idx, kv = self._restricted(K, E)
        key = (E, tuple(kv))
        val = self._gmemo.get(key)
        if val is None:
            q = [[self.Q[a][b] for b in idx] for a in idx]
            val = subset_min(kv, q, 0) // 2
            self._gmemo[key] = val
        return val

    def b_value(self, K: Sequence[int], E: int, v: int) -> int:
        """min f(K, I) over v ∈ I ⊆ E."""
        idx, kv = self._restricted(K, E)
        key = (E, tuple(kv), v)
        val = self._gmemo.get(key)
        if val is None:
            q = [[self.Q[a][b] for b in idx] for a in idx]
            val = subset_min(kv, q, 1 << idx.index(v)) // 2
            self._gmemo[key] = val
        return val

    # -- structure maps --------------------------------------------------------

    def shift(self, K: Sequence[int], v: int, sign: int = 1) -> tuple[int, ...]:
        """K + 2 sign v*."""
        row = self.Q[v]
        return tuple(k + 2 * sign * q for k, q in zip(K, row))

    def differential(self, x: LatticeGenerator) -> list[LatticeGenerator]:
        K, E = x.K, x.E
        out = []
        if E & self.arrow_mask != self.arrow_mask:
            raise ValueError("generator does not contain every arrow vertex")
        gE = self.g_value(K, E)
        for v in self.g.solid:
            if not E >> v & 1:
                continue
            Ev = E & ~(1 << v)
            a = self.g_value(K, Ev) - gE
            b = self.b_value(K, E, v) - gE
            out.append(LatticeGenerator(K, Ev, x.u_power + a))
            out.append(LatticeGenerator(self.shift(K, v), Ev, x.u_power + b))
        return out

    def uv_action(self, i: int, x: LatticeGenerator, which: str) -> LatticeGenerator:
        a = self.g.arrows[i]
        K = list(x.K)
        if which == "U":
            K[a] -= 2
            K = tuple(K)
            e = self.g_value(K, x.E) - self.g_value(x.K, x.E) + 1
        elif which == "V":
            K[a] += 2
            K = tuple(K)
            e = self.g_value(K, x.E) - self.g_value(x.K, x.E)
        else:
            raise ValueError("which must be 'U' or 'V'")
        return LatticeGenerator(K, x.E, x.u_power + e)

    def j_map(self, x: LatticeGenerator) -> LatticeGenerator:
        K = [-k for k in x.K]
        for v in range(self.n):
            if x.E >> v & 1:
                row = self.Q[v]
                for j in range(self.n):
                    K[j] -= 2 * row[j]
        return LatticeGenerator(tuple(K), x.E, x.u_power)

    # -- gradings ----------------------------------------------------------------

    @property
    def _grading_data(self):
        d = self.__dict__.get("_gd")
        if d is None:
            g = self.g
            g.require_nonsingular()
            lifts = g.lifts
            sigma = []
            for i, a in enumerate(g.arrows):
                s = Fraction(0)
                for v in g.arrows:
                    s += self.Q[v][a] - sum((c * self.Q[v][w] for c, w in zip(lifts[i], g.solid)), Fraction(0))
                sigma.append(s)
            shift = []
            for i in range(g.ell):
                shift.append(sum(g.linking[i], Fraction(0)) / 2)
            const = Fraction(-3 * g.signature - 2 * g.n_solid, 4)
            d = (lifts, tuple(sigma), tuple(shift), const)
            self.__dict__["_gd"] = d
        return d

    def k_square(self, K: Sequence[int]) -> Fraction:
        kg = [K[w] for w in self.g.solid]
        inv = self.g.QG_inv
        return sum((x * y for x, y in zip(kg, mat_vec(inv, kg))), Fraction(0))

    def grading_constant(self, K: Sequence[int]) -> Fraction:
        return self.k_square(K) / 4 + self._grading_data[3]

    def gr_w(self, x: LatticeGenerator) -> Fraction:
        s = bin(x.E & self.solid_mask).count("1")
        return 2 * self.g_value(x.K, x.E) + s + self.grading_constant(x.K) - 2 * x.u_power

    def alexander(self, K: Sequence[int]) -> tuple[Fraction, ...]:
        lifts, sigma, _, _ = self._grading_data
        out = []
        for i, a in enumerate(self.g.arrows):
            khat = sum((c * K[w] for c, w in zip(lifts[i], self.g.solid)), Fraction(0))
            out.append((K[a] - khat + sigma[i]) / 2)
        return tuple(out)

    def integral_alexander(self, A: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Alexander grading minus half the linking with the other components."""
        shift = self._grading_data[2]
        return tuple(a - s for a, s in zip(A, shift))

    def gradings(self, x: LatticeGenerator) -> MultiDegree:
        return MultiDegree(self.alexander(x.K), self.gr_w(x))

    def char_for(self, spinc: SpincClass, A: Sequence[Fraction]) -> tuple[int, ...] | None:
        """A characteristic vector in the given class and Alexander degree, if any."""
        g = self.g
        lifts, sigma, _, _ = self._grading_data
        K = [0] * self.n
        for w, k in zip(g.solid, spinc.rep):
            K[w] = k
        for i, a in enumerate(g.arrows):
            khat = sum((c * K[w] for c, w in zip(lifts[i], g.solid)), Fraction(0))
            val = 2 * Fraction(A[i]) + khat - sigma[i]
            if val.denominator != 1 or (val.numerator - self.Q[a][a]) % 2:
                return None
            K[a] = val.numerator
        return tuple(K)

    def alexander_coset(self, spinc: SpincClass) -> tuple[Fraction, ...]:
        """Fractional parts of Alexander gradings in this Spin^c class."""
        g = self.g
        K = [0] * self.n
        for w, k in zip(g.solid, spinc.rep):
            K[w] = k
        for a in g.arrows:
            K[a] = self.Q[a][a] % 2
        return tuple(x - (x.numerator // x.denominator) for x in self.alexander(K))

    # -- g-value persistence -----------------------------------------------------

    def cache_key(self) -> str:
        return hashlib.sha256(self.g.to_text().encode() + repr(self.g.framings).encode()).hexdigest()[:20]

    def load_cache(self, directory: str | None = None) -> bool:
        directory = directory or os.environ.get("PLUMBLAT_CACHE_DIR")
        if not directory:
            return False
        path = os.path.join(directory, f"g-{self.cache_key()}.bin")
        try:
            with open(path, "rb") as fh:
                payload = pickle.load(fh)
        except (OSError, pickle.UnpicklingError, EOFError):
            return False
        if payload.get("version") != CACHE_VERSION or payload.get("graph") != self.cache_key():
            return False
        self._gmemo.update(payload["table"])
        return True

    def save_cache(self, directory: str | None = None) -> bool:
        directory = directory or os.environ.get("PLUMBLAT_CACHE_DIR")
        if not directory:
            return False
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, f"g-{self.cache_key()}.bin")
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            pickle.dump({"version": CACHE_VERSION, "graph": self.cache_key(), "table": self._gmemo}, fh)
        os.replace(tmp, path)
        return True


def model(g: PlumbingGraph) -> LatticeModel:
    m = g.__dict__.get("_lattice_model")
    if m is None:
        m = LatticeModel(g)
        g.__dict__["_lattice_model"] = m
    return m


# ---------------------------------------------------------------------------
# functional API


def f_value(g: PlumbingGraph, K: Sequence[int], I) -> int:
    return model(g).f_value(K, as_mask(g, I))


def g_value(g: PlumbingGraph, K: Sequence[int], E) -> int:
    return model(g).g_value(K, as_mask(g, E))


def differential(g: PlumbingGraph, x: LatticeGenerator) -> list[LatticeGenerator]:
    """Boundary of ``x`` as a list of terms (F2 coefficients, no cancellation needed)."""
    return model(g).differential(x)


def uv_action(g: PlumbingGraph, i: int, x: LatticeGenerator, which: str) -> LatticeGenerator:
    return model(g).uv_action(i, x, which)


def gradings(g: PlumbingGraph, x: LatticeGenerator) -> MultiDegree:
    return model(g).gradings(x)


def j_map(g: PlumbingGraph, x: LatticeGenerator) -> LatticeGenerator:
    return model(g).j_map(x)


def reframe_iso(
    g: PlumbingGraph, framings: Sequence[int], framings2: Sequence[int], x: LatticeGenerator
) -> LatticeGenerator:
    """Transport a generator from framings ``framings`` to ``framings2``.

    The map is the identity on lattice points; on characteristic vectors it
    only changes the values at arrow vertices.
    """
    K = list(x.K)
    for a, f1, f2 in zip(g.arrows, framings, framings2):
        K[a] += f1 - f2
    return LatticeGenerator(tuple(K), x.E, x.u_power)


# ---------------------------------------------------------------------------
# truncated complexes


@dataclass(frozen=True)
class TruncationBox:
    """Alexander bounds per arrow (inclusive) and a w-grading floor."""

    alexander: tuple[tuple[Fraction, Fraction], ...]
    floor: Fraction

    @classmethod
    def symmetric(cls, ell: int, radius, floor) -> "TruncationBox":
        r = Fraction(radius)
        return cls(tuple((-r, r) for _ in range(ell)), Fraction(floor))

    def __post_init__(self) -> None:
        object.__setattr__(self, "floor", Fraction(self.floor))
        object.__setattr__(self, "alexander", tuple((Fraction(a), Fraction(b)) for a, b in self.alexander))


@dataclass
class ComplexGroup:
    """One (Spin^c, Alexander degree) summand of a truncated complex."""

    spinc: int
    alexander: tuple[Fraction, ...]
    floor: Fraction
    gens: list[LatticeGenerator]
    grading: list[Fraction]
    hdeg: list[int]
    entries: list[tuple[int, int, int]]
    core: int
    k_box: tuple[tuple[int, int], ...]
    index: dict = field(default_factory=dict)

    def fu_complex(self) -> FUComplex:
        return FUComplex(tuple(zip(self.hdeg, self.grading)), tuple(self.entries))

    def __len__(self) -> int:
        return len(self.gens)


def _ellipsoid_box(m: LatticeModel, k0: Sequence[int], floor: Fraction) -> tuple[tuple[int, int], ...] | None:
    """Integer box for t containing every K = k0 + 2 sum t_w w* with c(K) + n >= floor.

    Returns None when no K qualifies.
    """
    g = m.g
    n = g.n_solid
    if n == 0:
        return ()
    if not g.negative_definite:
        raise InsufficientBoxError(
            "cannot certify a finite window: Q_G is not negative definite"
        )
    P_inv = [[-x for x in row] for row in g.QG_inv]
    const = m._grading_data[3]
    # c(K) = K^2/4 + const >= floor - n   <=>   y^T P^{-1} y <= rho
    rho = -4 * (Fraction(floor) - n - const)
    if rho < 0:
        return None
    kg = [k0[w] for w in g.solid]
    ctr = mat_vec(P_inv, kg)
    box = []
    for i in range(n):
        c = ctr[i] / 2
        r2 = rho * P_inv[i][i] / 4
        rad = isqrt(-(-r2.numerator // r2.denominator)) + 1
        lo = (c.numerator // c.denominator) - rad
        hi = -((-c.numerator) // c.denominator) + rad
        box.append((lo, hi))
    return tuple(box)


def build_group(
    g: PlumbingGraph, spinc: SpincClass, A: Sequence[Fraction], floor
) -> ComplexGroup | None:
    """Truncated summand at one Alexander degree, or None off the lattice."""
    m = model(g)
    floor = Fraction(floor)
    A = tuple(Fraction(a) for a in A)
    k0 = m.char_for(spinc, A)
    if k0 is None:
        return None
    box = _ellipsoid_box(m, k0, floor)
    solid = g.solid
    n_solid = len(solid)
    arrow_mask = m.arrow_mask
    subsets = []
    for bits in range(1 << n_solid):
        E = arrow_mask
        for j in range(n_solid):
            if bits >> j & 1:
                E |= 1 << solid[j]
        subsets.append((E, bin(bits).count("1")))
    gens: list[LatticeGenerator] = []
    grading: list[Fraction] = []
    hdeg: list[int] = []
    index: dict[tuple, int] = {}
    if box is not None:
        ranges = [range(lo, hi + 1) for lo, hi in box]
        for t in product(*ranges):
            K = list(k0)
            for w, tw in zip(solid, t):
                if tw:
                    row = m.Q[w]
                    for j in range(m.n):
                        K[j] += 2 * tw * row[j]
            K = tuple(K)
            c = m.grading_constant(K)
            if c + n_solid < floor:
                continue
            for E, s in subsets:
                gr = 2 * m.g_value(K, E) + s + c
                if gr >= floor:
                    index[(K, E)] = len(gens)
                    gens.append(LatticeGenerator(K, E))
                    grading.append(gr)
                    hdeg.append(s)
    core = len(gens)
    entries = []
    p = 0
    while p < len(gens):
        x = gens[p]
        for y in m.differential(x):
            key = (y.K, y.E)
            r = index.get(key)
            if r is None:
                r = len(gens)
                index[key] = r
                gens.append(y.bare())
                grading.append(m.gr_w(y.bare()))
                hdeg.append(hdeg[p] - 1)
            entries.append((p, r, y.u_power))
        p += 1
    # the two terms of a differential can coincide; cancel over F2
    acc: dict[tuple[int, int], int] = {}
    for c, r, e in entries:
        if (c, r) in acc:
            del acc[(c, r)]
        else:
            acc[(c, r)] = e
    entries = sorted((c, r, e) for (c, r), e in acc.items())
    return ComplexGroup(
        spinc.index, A, floor, gens, grading, hdeg, entries, core, box or (), index
    )


def alexander_points(g: PlumbingGraph, spinc: SpincClass, bounds) -> list[tuple[Fraction, ...]]:
    """Lattice points of the Alexander box in the given Spin^c class."""
    coset = model(g).alexander_coset(spinc)
    axes = []
    for (lo, hi), c in zip(bounds, coset):
        lo, hi = Fraction(lo), Fraction(hi)
        start = c + ((lo - c).numerator + (lo - c).denominator - 1) // (lo - c).denominator
        vals = []
        x = start
        while x <= hi:
            vals.append(x)
            x += 1
        axes.append(vals)
    return [tuple(p) for p in product(*axes)]


@dataclass
class GradedComplex:
    graph: PlumbingGraph
    spinc: SpincClass
    box: TruncationBox
    groups: dict[tuple[Fraction, ...], ComplexGroup]

    def action_map(self, A: tuple, i: int, which: str) -> list[tuple[int, int] | None]:
        """Images of the generators of group ``A`` under U_i or V_i.

        Entry j is ``(target index, U exponent)`` in the neighbouring group,
        or None when the image falls outside the truncation (boundary loss).
        """
        m = model(self.graph)
        src = self.groups[A]
        step = -1 if which == "U" else 1
        tgt_key = tuple(a + (step if k == i else 0) for k, a in enumerate(A))
        tgt = self.groups.get(tgt_key)
        out = []
        for x in src.gens:
            y = m.uv_action(i, x, which)
            r = None if tgt is None else tgt.index.get((y.K, y.E))
            out.append(None if r is None else (r, y.u_power))
        return out

    def boundary_losses(self) -> list[tuple[tuple, int, str]]:
        losses = []
        for A, grp in self.groups.items():
            for i in range(self.graph.ell):
                for which in ("U", "V"):
                    for j, img in enumerate(self.action_map(A, i, which)):
                        if img is None and j < grp.core:
                            losses.append((A, j, f"{which}{i + 1}"))
        return losses


def build_truncated_complex(g: PlumbingGraph, spinc: SpincClass | int, box: TruncationBox) -> GradedComplex:
    if isinstance(spinc, int):
        spinc = spinc_classes(g)[spinc]
    groups = {}
    for A in alexander_points(g, spinc, box.alexander):
        grp = build_group(g, spinc, A, box.floor)
        if grp is not None:
            groups[A] = grp
    return GradedComplex(g, spinc, box, groups)


def spinc_of(g: PlumbingGraph, x: LatticeGenerator) -> int:
    return spinc_index(g, [x.K[w] for w in g.solid])


def generators_of_orbit(g: PlumbingGraph, spinc: SpincClass, A: Sequence[Fraction], floor) -> Iterable[LatticeGenerator]:
    grp = build_group(g, spinc, A, floor)
    return [] if grp is None else grp.gens[: grp.core]
