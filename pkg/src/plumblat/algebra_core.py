"""Exact algebra substrate.

Multidegrees, monomials in the ring F2[U_1, V_1, ..., U_l, V_l], F2 linear
algebra on int bitsets, and homology of graded complexes over F2[U].
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import NotAComplexError, ParseError
from .kernels import f2_reduce

Rational = Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fmt_q(x: Fraction) -> str:
    """Render a rational as ``p`` or ``p/q``."""
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# degrees and monomials


@dataclass(frozen=True)
class MultiDegree:
    """Alexander multi-grading together with the w-Maslov grading."""

    alexander: tuple[Fraction, ...]
    maslov_w: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "alexander", tuple(as_fraction(a) for a in self.alexander))
        object.__setattr__(self, "maslov_w", as_fraction(self.maslov_w))

    @property
    def maslov_z(self) -> Fraction:
        return self.maslov_w - 2 * sum(self.alexander, Fraction(0))

    @property
    def ell(self) -> int:
        return len(self.alexander)

    def shifted(self, m: "Monomial") -> "MultiDegree":
        if m.ell != self.ell:
            raise ValueError("component count mismatch")
        return MultiDegree(
            tuple(a + d for a, d in zip(self.alexander, m.alexander)),
            self.maslov_w + m.gr_w,
        )

    def to_json(self) -> dict:
        return {
            "alexander": [fmt_q(a) for a in self.alexander],
            "gr_w": fmt_q(self.maslov_w),
            "gr_z": fmt_q(self.maslov_z),
        }

    def __str__(self) -> str:
        a = ",".join(fmt_q(x) for x in self.alexander)
        return f"A=({a}) gr_w={fmt_q(self.maslov_w)}"


@dataclass(frozen=True, order=True)
class Monomial:
    """``U_1^{i_1} V_1^{j_1} ... U_l^{i_l} V_l^{j_l}`` with coefficient 1."""

    u_exps: tuple[int, ...]
    v_exps: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.u_exps) != len(self.v_exps):
            raise ValueError("u and v exponent vectors differ in length")
        if any(e < 0 for e in self.u_exps) or any(e < 0 for e in self.v_exps):
            raise ValueError("negative exponent")

    @classmethod
    def one(cls, ell: int) -> "Monomial":
        return cls((0,) * ell, (0,) * ell)

    @classmethod
    def U(cls, i: int, ell: int, power: int = 1) -> "Monomial":
        u = [0] * ell
        u[i] = power
        return cls(tuple(u), (0,) * ell)

    @classmethod
    def V(cls, i: int, ell: int, power: int = 1) -> "Monomial":
        v = [0] * ell
        v[i] = power
        return cls((0,) * ell, tuple(v))

    @classmethod
    def from_key(cls, key: Sequence[int]) -> "Monomial":
        ell = len(key) // 2
        return cls(tuple(key[:ell]), tuple(key[ell:]))

    @property
    def key(self) -> tuple[int, ...]:
        return self.u_exps + self.v_exps

    @property
    def ell(self) -> int:
        return len(self.u_exps)

    @property
    def alexander(self) -> tuple[int, ...]:
        return tuple(j - i for i, j in zip(self.u_exps, self.v_exps))

    @property
    def gr_w(self) -> int:
        return -2 * sum(self.u_exps)

    @property
    def gr_z(self) -> int:
        return -2 * sum(self.v_exps)

    @property
    def u_weight(self) -> int:
        return sum(min(i, j) for i, j in zip(self.u_exps, self.v_exps))

    @property
    def total_degree(self) -> int:
        return sum(self.u_exps) + sum(self.v_exps)

    def is_one(self) -> bool:
        return not any(self.u_exps) and not any(self.v_exps)

    def degree(self) -> MultiDegree:
        return MultiDegree(tuple(Fraction(a) for a in self.alexander), Fraction(self.gr_w))

    def __mul__(self, other: "Monomial") -> "Monomial":
        return monomial_mul(self, other)

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.key, other.key))

    def gcd(self, other: "Monomial") -> "Monomial":
        _check_ell(self, other)
        return Monomial(
            tuple(map(min, self.u_exps, other.u_exps)),
            tuple(map(min, self.v_exps, other.v_exps)),
        )

    def __str__(self) -> str:
        parts = []
        for k in range(self.ell):
            for name, e in (("U", self.u_exps[k]), ("V", self.v_exps[k])):
                if e == 1:
                    parts.append(f"{name}{k + 1}")
                elif e > 1:
                    parts.append(f"{name}{k + 1}^{e}")
        return "".join(parts) or "1"


def _check_ell(a: Monomial, b: Monomial) -> None:
    if a.ell != b.ell:
        raise ValueError(f"monomials over different rings (l={a.ell} vs l={b.ell})")


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    _check_ell(a, b)
    return Monomial(
        tuple(x + y for x, y in zip(a.u_exps, b.u_exps)),
        tuple(x + y for x, y in zip(a.v_exps, b.v_exps)),
    )


_FACTOR = re.compile(r"([UV])(\d+)(?:\^(\d+))?")


def parse_monomial(text: str, ell: int) -> Monomial:
    """Parse ``"U1V2^2"`` (optionally with ``*``) or ``"1"``."""
    s = text.replace("*", "").replace(" ", "")
    u = [0] * ell
    v = [0] * ell
    if s in ("", "1"):
        return Monomial(tuple(u), tuple(v))
    pos = 0
    for m in _FACTOR.finditer(s):
        if m.start() != pos:
            break
        pos = m.end()
        k = int(m.group(2)) - 1
        if not 0 <= k < ell:
            raise ParseError(f"variable index out of range in {text!r}")
        e = int(m.group(3) or 1)
        (u if m.group(1) == "U" else v)[k] += e
    if pos != len(s):
        raise ParseError(f"cannot parse monomial {text!r}")
    return Monomial(tuple(u), tuple(v))


# Integer degrees used in the hot loops of the module code: a tuple
# (a_1, ..., a_l, n) where a is the Alexander offset and n counts U factors,
# so gr_w drops by 2n.  The total weight 2n + sum(a) is the polynomial degree
# and is nonnegative on every monomial.


def key_degree(key: Sequence[int]) -> tuple[int, ...]:
    ell = len(key) // 2
    u, v = key[:ell], key[ell:]
    return tuple(v[k] - u[k] for k in range(ell)) + (sum(u),)


def degree_weight(deg: Sequence[int]) -> int:
    return 2 * deg[-1] + sum(deg[:-1])


def add_degree(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def sub_degree(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def key_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cut in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cut:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield tuple(out)


@lru_cache(maxsize=None)
def monomials_of_degree(deg: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """All monomial keys with integer degree ``deg`` in lexicographic order."""
    a, n = deg[:-1], deg[-1]
    base = [max(0, -x) for x in a]
    slack = n - sum(base)
    if slack < 0:
        return ()
    out = []
    for extra in _compositions(slack, len(a)):
        u = tuple(b + e for b, e in zip(base, extra))
        v = tuple(uk + ak for uk, ak in zip(u, a))
        out.append(u + v)
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_up_to(weight: int, ell: int) -> tuple[tuple[int, ...], ...]:
    """All monomial keys of total degree at most ``weight``."""
    out = []
    for w in range(weight + 1):
        out.extend(_compositions(w, 2 * ell))
    return tuple(out)


# ---------------------------------------------------------------------------
# F2 linear algebra on bitsets


def f2_rank_kernel(matrix: Sequence[Sequence[int]]) -> tuple[int, list[tuple[int, ...]]]:
    """Rank and a kernel basis of a dense 0/1 matrix given as a list of rows."""
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    cols = []
    for c in range(ncols):
        bits = 0
        for r in range(nrows):
            if matrix[r][c] & 1:
                bits |= 1 << r
        cols.append(bits)
    reduced, combos = f2_reduce(cols)
    rank = sum(1 for v in reduced if v)
    kernel = [
        tuple((combo >> c) & 1 for c in range(ncols))
        for v, combo in zip(reduced, combos)
        if not v
    ]
    return rank, kernel


def f2_rank(vectors: Iterable[int]) -> int:
    reduced, _ = f2_reduce(list(vectors))
    return sum(1 for v in reduced if v)


class F2Span:
    """Incrementally grown subspace of F2^n with membership tests."""

    __slots__ = ("_owner",)

    def __init__(self, vectors: Iterable[int] = ()) -> None:
        self._owner: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        owner = self._owner
        while v:
            low = v & -v
            b = owner.get(low)
            if b is None:
                return v
            v ^= b
        return 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return True when it enlarged the span."""
        r = self.reduce(v)
        if r:
            self._owner[r & -r] = r
            return True
        return False

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self._owner)


@dataclass
class GradedVectorSpace:
    """Finite F2 vector spaces indexed by degree, each with basis labels."""

    pieces: dict = field(default_factory=dict)

    def add(self, degree, label) -> None:
        for labels in self.pieces.values():
            if label in labels:
                raise ValueError(f"label {label!r} already used")
        self.pieces.setdefault(degree, []).append(label)

    def dims(self) -> dict:
        return {d: len(v) for d, v in self.pieces.items()}

    def total_dim(self) -> int:
        return sum(len(v) for v in self.pieces.values())


# ---------------------------------------------------------------------------
# complexes over F2[U]


@dataclass(frozen=True)
class PolyUMatrix:
    """Sparse matrix over F2[U] with graded rows and columns.

    An entry ``U^e`` at (r, c) maps a column element of grading ``gc`` to a
    row element with ``gr - 2e = gc + shift`` where ``shift`` is the degree
    of the map (-1 for a differential).
    """

    row_gradings: tuple[Fraction, ...]
    col_gradings: tuple[Fraction, ...]
    entries: Mapping[tuple[int, int], int]
    shift: int = -1

    def __post_init__(self) -> None:
        for (r, c), e in self.entries.items():
            if e < 0:
                raise ValueError("negative U exponent")
            if as_fraction(self.row_gradings[r]) - 2 * e != as_fraction(self.col_gradings[c]) + self.shift:
                raise ValueError(f"entry ({r},{c}) is not homogeneous")

    def to_complex(self) -> "FUComplex":
        """Two-term complex: columns in homological degree 1, rows in 0."""
        nr = len(self.row_gradings)
        gens = [(0, as_fraction(g)) for g in self.row_gradings]
        gens += [(1, as_fraction(g)) for g in self.col_gradings]
        ents = [(nr + c, r, e) for (r, c), e in self.entries.items()]
        return FUComplex(tuple(gens), tuple(ents))


@dataclass(frozen=True)
class FUComplex:
    """Free chain complex over F2[U].

    ``gens[x] = (homological degree, grading)``; ``entries`` are triples
    ``(col, row, e)`` meaning ``d(col) ∋ U^e row``.  The differential lowers
    the homological degree by one and the grading by one.
    """

    gens: tuple[tuple[int, Fraction], ...]
    entries: tuple[tuple[int, int, int], ...]

    def boundary_sets(self) -> list[int]:
        cols = [0] * len(self.gens)
        for c, r, _ in self.entries:
            cols[c] ^= 1 << r
        return cols

    def validate(self) -> None:
        seen = set()
        for c, r, e in self.entries:
            if (c, r) in seen:
                raise NotAComplexError(f"duplicate entry ({c},{r})")
            seen.add((c, r))
            hc, gc = self.gens[c]
            hr, grr = self.gens[r]
            if hr != hc - 1:
                raise NotAComplexError(f"entry ({c},{r}) does not lower homological degree by 1")
            if e < 0 or grr - 2 * e != gc - 1:
                raise NotAComplexError(f"entry ({c},{r}) is not homogeneous of degree -1")
        cols = self.boundary_sets()
        for c, b in enumerate(cols):
            acc = 0
            x = b
            while x:
                low = x & -x
                acc ^= cols[low.bit_length() - 1]
                x ^= low
            if acc:
                raise NotAComplexError(f"d∘d is nonzero on generator {c}")


@dataclass(frozen=True)
class FUSummary:
    """Homology at one homological degree: towers and cyclic torsion."""

    free_tops: tuple[Fraction, ...]
    torsion: tuple[tuple[int, Fraction], ...]

    @property
    def free_rank(self) -> int:
        return len(self.free_tops)


@dataclass(frozen=True)
class FUHomology:
    by_degree: Mapping[int, FUSummary]

    @property
    def free_rank(self) -> int:
        return sum(s.free_rank for s in self.by_degree.values())

    @property
    def free_tops(self) -> tuple[Fraction, ...]:
        return tuple(sorted((t for s in self.by_degree.values() for t in s.free_tops), reverse=True))

    @property
    def torsion(self) -> tuple[tuple[int, Fraction], ...]:
        return tuple(sorted(t for s in self.by_degree.values() for t in s.torsion))


def fu_module_decompose(cx: FUComplex, check: bool = True) -> FUHomology:
    """Decompose the homology of a free F2[U]-complex.

    Every entry of a homogeneous differential is ``U^e`` with ``e`` fixed by
    the gradings, so reducing columns in order of ``(h - gr)/2`` (the
    filtration level), with pivots at the latest-born row, is a graded Smith
    reduction: each surviving pair (row r, column c) contributes
    ``F2[U]/U^e`` with ``e`` the exponent between them, and rows never
    paired that are cycles contribute free towers.
    """
    if check:
        cx.validate()
    n = len(cx.gens)
    level = [Fraction(h) - g for h, g in cx.gens]
    order = sorted(range(n), key=lambda x: (level[x], cx.gens[x][0], x))
    pos = {x: p for p, x in enumerate(order)}
    cols = [0] * n
    for c, r, _ in cx.entries:
        cols[pos[c]] ^= 1 << pos[r]
    pivot_of: dict[int, int] = {}
    paired_row = set()
    is_cycle = [False] * n
    pairs = []
    for p in range(n):
        v = cols[p]
        while v:
            low = v.bit_length() - 1
            q = pivot_of.get(low)
            if q is None:
                break
            v ^= cols[q]
        cols[p] = v
        if v:
            low = v.bit_length() - 1
            pivot_of[low] = p
            paired_row.add(low)
            pairs.append((low, p))
        else:
            is_cycle[p] = True
    free: dict[int, list[Fraction]] = {}
    tors: dict[int, list[tuple[int, Fraction]]] = {}
    for p in range(n):
        if is_cycle[p] and p not in paired_row:
            h, g = cx.gens[order[p]]
            free.setdefault(h, []).append(g)
    for r, c in pairs:
        e = int((level[order[c]] - level[order[r]]) / 2)
        if e > 0:
            h, g = cx.gens[order[r]]
            tors.setdefault(h, []).append((e, g))
    degrees = {h for h, _ in cx.gens}
    return FUHomology(
        {
            h: FUSummary(
                tuple(sorted(free.get(h, []), reverse=True)),
                tuple(sorted(tors.get(h, []))),
            )
            for h in sorted(degrees)
        }
    )
