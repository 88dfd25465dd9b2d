"""Plumbing trees with arrow vertices.

A graph has solid vertices (integer weights) and arrow vertices (framings,
default -1).  Vertices are indexed in declaration order; characteristic
vectors are integer tuples in that order.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ParseError, SingularFormError

DEFAULT_FRAMING = -1
_ID = re.compile(r"[A-Za-z0-9_]+\Z")


# ---------------------------------------------------------------------------
# small exact linear algebra


def det(m: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            raise SingularFormError("matrix is singular")
        a[k], a[p] = a[p], a[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def mat_vec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m]


def inertia(m: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by symmetric congruence."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    pos = neg = 0
    k = 0
    size = n
    while k < size:
        p = next((i for i in range(k, size) if a[i][i] != 0), None)
        if p is None:
            q = next(((i, j) for i in range(k, size) for j in range(i + 1, size) if a[i][j] != 0), None)
            if q is None:
                break
            i, j = q
            # replace e_i by e_i + e_j, making the diagonal 2 a_ij + a_jj (+ a_ii = 0)
            for t in range(size):
                a[i][t] += a[j][t]
            for t in range(size):
                a[t][i] += a[t][j]
            if a[i][i] == 0:
                for t in range(size):
                    a[i][t] -= 2 * a[j][t]
                for t in range(size):
                    a[t][i] -= 2 * a[t][j]
            p = i
        a[k], a[p] = a[p], a[k]
        for row in a:
            row[k], row[p] = row[p], row[k]
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, size):
            f = a[i][k] / d
            if f:
                for t in range(k, size):
                    a[i][t] -= f * a[k][t]
        for i in range(k + 1, size):
            a[k][i] = Fraction(0)
            a[i][k] = Fraction(0)
        k += 1
    return pos, neg, n - pos - neg


def lower_hnf(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Lower-triangular basis (as a row-major matrix) of the column lattice of ``m``."""
    n = len(m)
    cols = [[int(m[r][c]) for r in range(n)] for c in range(n)]
    for i in range(n):
        while True:
            nz = [c for c in range(i, n) if cols[c][i] != 0]
            if not nz:
                raise SingularFormError("matrix is singular")
            best = min(nz, key=lambda c: abs(cols[c][i]))
            cols[i], cols[best] = cols[best], cols[i]
            done = True
            for c in range(i + 1, n):
                if cols[c][i]:
                    q = cols[c][i] // cols[i][i]
                    cols[c] = [x - q * y for x, y in zip(cols[c], cols[i])]
                    if cols[c][i]:
                        done = False
            if done:
                break
        if cols[i][i] < 0:
            cols[i] = [-x for x in cols[i]]
    return [[cols[c][r] for c in range(n)] for r in range(n)]


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Vertex:
    id: str
    weight: int
    arrow: bool = False


class PlumbingGraph:
    """Weighted tree with solid and arrow vertices; immutable."""

    def __init__(
        self,
        vertices: Iterable[Vertex],
        edges: Iterable[tuple[str, str]],
        *,
        allow_forest: bool = False,
    ) -> None:
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        if not self.vertices:
            raise ParseError("graph has no vertices")
        self.ids = tuple(v.id for v in self.vertices)
        self.index = {}
        for i, v in enumerate(self.vertices):
            if v.id in self.index:
                raise ParseError(f"duplicate vertex id {v.id!r}")
            if not _ID.match(v.id):
                raise ParseError(f"bad vertex id {v.id!r}")
            self.index[v.id] = i
        es = []
        seen = set()
        for a, b in edges:
            if a not in self.index or b not in self.index:
                raise ParseError(f"edge {a}-{b} has an undeclared endpoint")
            i, j = self.index[a], self.index[b]
            if i == j:
                raise ParseError(f"self-loop at {a}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ParseError(f"repeated edge {a}-{b}")
            seen.add(key)
            es.append(key)
        self.edges: tuple[tuple[int, int], ...] = tuple(es)
        self.allow_forest = allow_forest
        n = len(self.vertices)
        if not allow_forest:
            if len(es) != n - 1 or self._components() != 1:
                raise ParseError("graph is not a tree")
        elif len(es) != n - self._components():
            raise ParseError("graph has a cycle")
        self.solid: tuple[int, ...] = tuple(i for i, v in enumerate(self.vertices) if not v.arrow)
        self.arrows: tuple[int, ...] = tuple(i for i, v in enumerate(self.vertices) if v.arrow)
        self.unvalidated = False
        for a in self.arrows:
            nb = self.neighbors(a)
            if len(nb) != 1 or self.vertices[nb[0]].arrow:
                self.unvalidated = True
        if self.unvalidated and not allow_forest:
            warnings.warn("arrow vertex without a unique solid neighbour; outputs are unvalidated", stacklevel=2)

    def _components(self) -> int:
        n = len(self.vertices)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.edges:
            parent[find(i)] = find(j)
        return len({find(i) for i in range(n)})

    def neighbors(self, i: int) -> list[int]:
        return [b if a == i else a for a, b in self.edges if i in (a, b)]

    # -- derived data ------------------------------------------------------

    @property
    def ell(self) -> int:
        return len(self.arrows)

    @property
    def n_solid(self) -> int:
        return len(self.solid)

    @property
    def framings(self) -> tuple[int, ...]:
        return tuple(self.vertices[a].weight for a in self.arrows)

    def with_framings(self, framings: Sequence[int]) -> "PlumbingGraph":
        if len(framings) != self.ell:
            raise ValueError("one framing per arrow vertex is required")
        fr = iter(framings)
        vs = [Vertex(v.id, next(fr), True) if v.arrow else v for v in self.vertices]
        return PlumbingGraph(vs, [(self.ids[i], self.ids[j]) for i, j in self.edges], allow_forest=self.allow_forest)

    @cached_property
    def Q(self) -> tuple[tuple[int, ...], ...]:
        """Extended incidence matrix over all vertices (arrows carry framings)."""
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for i, v in enumerate(self.vertices):
            m[i][i] = v.weight
        for i, j in self.edges:
            m[i][j] = m[j][i] = 1
        return tuple(tuple(r) for r in m)

    @cached_property
    def QG(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.Q[i][j] for j in self.solid) for i in self.solid)

    @cached_property
    def det_G(self) -> int:
        return det(self.QG)

    def require_nonsingular(self) -> None:
        if self.det_G == 0:
            raise SingularFormError("det Q_G = 0: the surgered manifold is not a rational homology sphere")

    @cached_property
    def QG_inv(self) -> tuple[tuple[Fraction, ...], ...]:
        self.require_nonsingular()
        return tuple(tuple(r) for r in inverse(self.QG))

    @cached_property
    def signature(self) -> int:
        p, n, _ = inertia(self.QG)
        return p - n

    @cached_property
    def negative_definite(self) -> bool:
        p, n, z = inertia(self.QG)
        return n == self.n_solid

    def adjacency_to_solid(self, arrow: int) -> tuple[int, ...]:
        """Pairing of the arrow vertex (by arrow number) with each solid vertex."""
        a = self.arrows[arrow]
        return tuple(self.Q[a][w] for w in self.solid)

    @cached_property
    def lifts(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(rational_lift(self, i) for i in range(self.ell))

    @cached_property
    def linking(self) -> tuple[tuple[Fraction, ...], ...]:
        """Linking numbers of the arrow components; diagonal entries are 0."""
        out = []
        for i in range(self.ell):
            row = []
            for j in range(self.ell):
                if i == j:
                    row.append(Fraction(0))
                else:
                    adj = self.adjacency_to_solid(j)
                    row.append(-sum((c * x for c, x in zip(self.lifts[i], adj)), Fraction(0)))
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def hnf(self) -> tuple[tuple[int, ...], ...]:
        self.require_nonsingular()
        return tuple(tuple(r) for r in lower_hnf(self.QG))

    def to_text(self) -> str:
        lines = []
        for v in self.vertices:
            if v.arrow:
                lines.append(f"arrow {v.id}" + ("" if v.weight == DEFAULT_FRAMING else f" {v.weight}"))
            else:
                lines.append(f"vertex {v.id} {v.weight}")
        lines += [f"edge {self.ids[i]} {self.ids[j]}" for i, j in self.edges]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"PlumbingGraph({self.ids}, weights={[v.weight for v in self.vertices]})"


def parse_graph(text: str, *, strict: bool = True) -> PlumbingGraph:
    """Parse the line-oriented graph format.

    ``vertex <id> <weight>``, ``arrow <id>``, ``edge <id> <id>``; ``#`` starts
    a comment.  With ``strict=False`` an arrow line may carry a framing.
    """
    verts = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        try:
            if kind == "vertex" and len(tok) == 3:
                verts.append(Vertex(tok[1], int(tok[2])))
            elif kind == "arrow" and len(tok) == 2:
                verts.append(Vertex(tok[1], DEFAULT_FRAMING, True))
            elif kind == "arrow" and len(tok) == 3:
                if strict:
                    raise ParseError(f"line {lineno}: arrow with a weight (strict mode)")
                verts.append(Vertex(tok[1], int(tok[2]), True))
            elif kind == "edge" and len(tok) == 3:
                edges.append((tok[1], tok[2]))
            else:
                raise ParseError(f"line {lineno}: cannot parse {raw!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: {exc}") from None
        if kind in ("vertex", "arrow") and not _ID.match(tok[1]):
            raise ParseError(f"line {lineno}: bad id {tok[1]!r}")
    return PlumbingGraph(verts, edges)


def incidence_matrix(
    g: PlumbingGraph, include_arrows: bool = False, arrow_framings: Sequence[int] | None = None
) -> tuple[tuple[int, ...], ...]:
    if not include_arrows:
        return g.QG
    if arrow_framings is not None:
        g = g.with_framings(arrow_framings)
    return g.Q


# ---------------------------------------------------------------------------
# characteristic vectors and lattice points


def is_characteristic(g: PlumbingGraph, K: Sequence[int]) -> bool:
    return len(K) == len(g.vertices) and all((k - g.Q[i][i]) % 2 == 0 for i, k in enumerate(K))


def char_to_lattice(g: PlumbingGraph, K: Sequence[int]) -> tuple[Fraction, ...]:
    """``s_v = (K(v) + v_total · v) / 2`` over all vertices."""
    if not is_characteristic(g, K):
        raise ValueError(f"{tuple(K)} is not characteristic")
    return tuple(Fraction(K[v] + sum(g.Q[j][v] for j in range(len(K))), 2) for v in range(len(K)))


def lattice_to_char(g: PlumbingGraph, s: Sequence[Fraction]) -> tuple[int, ...]:
    n = len(g.vertices)
    if len(s) != n:
        raise ValueError("lattice point has the wrong length")
    out = []
    for v in range(n):
        k = 2 * Fraction(s[v]) - sum(g.Q[j][v] for j in range(n))
        if k.denominator != 1 or (k.numerator - g.Q[v][v]) % 2:
            raise ValueError(f"{tuple(s)} is not a lattice point of this graph")
        out.append(int(k))
    return tuple(out)


@dataclass(frozen=True)
class SpincClass:
    """A class of Char(X_G) modulo 2 im Q_G.

    ``rep`` is K on the solid vertices; ``offset`` is its reduced lattice
    coordinate, which fixes the deterministic ordering of classes.
    """

    index: int
    rep: tuple[int, ...]
    offset: tuple[int, ...]


def _base_char(g: PlumbingGraph) -> tuple[int, ...]:
    return tuple(g.Q[w][w] % 2 for w in g.solid)


def _reduce_offset(g: PlumbingGraph, x: Sequence[int]) -> tuple[int, ...]:
    h = g.hnf
    x = list(x)
    for i in range(len(x)):
        q = x[i] // h[i][i]
        if q:
            for r in range(i, len(x)):
                x[r] -= q * h[r][i]
    return tuple(x)


def spinc_classes(g: PlumbingGraph) -> list[SpincClass]:
    """One class per element of Char(X_G)/2 im Q_G, ordered lexicographically."""
    g.require_nonsingular()
    h = g.hnf
    n = g.n_solid
    base = _base_char(g)
    offsets = [()]
    for i in range(n):
        offsets = [o + (k,) for o in offsets for k in range(h[i][i])]
    offsets.sort()
    return [
        SpincClass(idx, tuple(b + 2 * x for b, x in zip(base, off)), off)
        for idx, off in enumerate(offsets)
    ]


def spinc_index(g: PlumbingGraph, k_solid: Sequence[int]) -> int:
    base = _base_char(g)
    x = []
    for k, b in zip(k_solid, base):
        if (k - b) % 2:
            raise ValueError("not characteristic on the solid vertices")
        x.append((k - b) // 2)
    off = _reduce_offset(g, x)
    for c in spinc_classes(g):
        if c.offset == off:
            return c.index
    raise AssertionError("reduction produced an unknown class")


def rational_lift(g: PlumbingGraph, arrow: int) -> tuple[Fraction, ...]:
    """Coefficients c over the solid vertices with ``Q_G c = adj(arrow)``."""
    g.require_nonsingular()
    return tuple(mat_vec(g.QG_inv, g.adjacency_to_solid(arrow)))
