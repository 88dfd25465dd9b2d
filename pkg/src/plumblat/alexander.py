"""Multivariable Alexander polynomials and the H-function they determine.

Input polynomials use the classical symmetric normalization by default.
For sublinks with at least two components the hat-flavour Euler
characteristic is ``prod_i (t_i^{1/2} - t_i^{-1/2}) * Delta``; for knots it is
``Delta`` itself.  Files may instead carry hat-flavour data directly
(``"normalization": "hat"``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Mapping, Sequence

from .algebra_core import fmt_q
from .errors import ParseError

Point = tuple[Fraction, ...]
Series = dict[Point, int]


@dataclass(frozen=True)
class SublinkProjection:
    """Forget the components not in ``keep`` (indices into the full link)."""

    keep: tuple[int, ...]
    linking: tuple[tuple[Fraction, ...], ...]

    def dropped(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.linking)) if i not in self.keep)


def forgetful(s: Sequence, projection: SublinkProjection) -> Point:
    """Restrict to kept components, shifting by half the linking with dropped ones."""
    drop = projection.dropped()
    lk = projection.linking
    return tuple(Fraction(s[i]) - sum((lk[i][j] for j in drop), Fraction(0)) / 2 for i in projection.keep)


@dataclass
class AlexanderData:
    components: tuple[str, ...]
    linking: tuple[tuple[Fraction, ...], ...]
    polynomials: dict[tuple[frozenset, object], Series] = field(default_factory=dict)
    normalization: str = "conway"

    @property
    def ell(self) -> int:
        return len(self.components)

    def sublink_key(self, sublink) -> frozenset:
        out = set()
        for c in sublink:
            out.add(self.components.index(c) if isinstance(c, str) else int(c))
        return frozenset(out)

    def poly(self, sublink, spinc=0) -> Series:
        key = (self.sublink_key(sublink), spinc)
        if key not in self.polynomials:
            raise KeyError(f"no Alexander polynomial for sublink {sorted(key[0])} in class {spinc}")
        return self.polynomials[key]

    def to_json(self) -> dict:
        entries = []
        for (sub, spinc), terms in sorted(self.polynomials.items(), key=lambda kv: (len(kv[0][0]), sorted(kv[0][0]))):
            entries.append(
                {
                    "sublink": [self.components[i] for i in sorted(sub)],
                    "spinc": spinc,
                    "terms": [{"s": [fmt_q(x) for x in s], "c": c} for s, c in sorted(terms.items())],
                }
            )
        return {
            "components": list(self.components),
            "linking": [[fmt_q(x) for x in row] for row in self.linking],
            "normalization": self.normalization,
            "polynomials": entries,
        }


def parse_alexander(text: str) -> AlexanderData:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if isinstance(doc, dict) and "sublink" in doc:
        comps = tuple(doc["sublink"])
        if len(comps) != 1:
            raise ParseError("a bare entry is only allowed for a knot; use the full document form")
        doc = {"components": list(comps), "linking": [[0]], "polynomials": [doc]}
    if not isinstance(doc, dict) or "components" not in doc or "polynomials" not in doc:
        raise ParseError("expected an object with 'components', 'linking' and 'polynomials'")
    comps = tuple(str(c) for c in doc["components"])
    ell = len(comps)
    lk_raw = doc.get("linking", [[0] * ell for _ in range(ell)])
    try:
        lk = tuple(tuple(Fraction(str(x)) for x in row) for row in lk_raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad linking matrix: {exc}") from None
    if len(lk) != ell or any(len(r) != ell for r in lk):
        raise ParseError("linking matrix has the wrong shape")
    norm = doc.get("normalization", "conway")
    if norm not in ("conway", "hat"):
        raise ParseError(f"unknown normalization {norm!r}")
    data = AlexanderData(comps, lk, {}, norm)
    for entry in doc["polynomials"]:
        try:
            sub = data.sublink_key(entry["sublink"])
            spinc = entry.get("spinc", 0)
            series: Series = {}
            for t in entry["terms"]:
                s = tuple(Fraction(str(x)) for x in t["s"])
                if len(s) != len(sub):
                    raise ParseError("term exponent has the wrong length")
                c = int(t["c"])
                series[s] = series.get(s, 0) + c
        except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad polynomial entry: {exc}") from None
        data.polynomials[(sub, spinc)] = {s: c for s, c in series.items() if c}
    return data


# ---------------------------------------------------------------------------
# Euler characteristics


def hat_euler(d: AlexanderData, sublink, spinc=0) -> Series:
    """Euler characteristic of the hat flavour as a Laurent series."""
    poly = d.poly(sublink, spinc)
    k = len(d.sublink_key(sublink))
    if d.normalization == "hat" or k == 1:
        return dict(poly)
    out: Series = {}
    half = Fraction(1, 2)
    for s, c in poly.items():
        for signs in product((1, -1), repeat=k):
            p = tuple(x + half * e for x, e in zip(s, signs))
            sign = (-1) ** signs.count(-1)
            out[p] = out.get(p, 0) + sign * c
    return {p: c for p, c in out.items() if c}


def hfl_minus_euler(d: AlexanderData, sublink, box: Sequence[tuple], spinc=0) -> Series:
    """Coefficients of hat/prod(1 - t_i^{-1}) at the lattice points of ``box``.

    The expansion is in negative powers, so the coefficient at s is the sum
    of hat coefficients at points p >= s.
    """
    if not sublink:
        return {}
    hat = hat_euler(d, sublink, spinc)
    axes = []
    support = list(hat)
    for i, (lo, hi) in enumerate(box):
        lo, hi = Fraction(lo), Fraction(hi)
        ref = support[0][i] if support else Fraction(0)
        x = ref + ((lo - ref).numerator + (lo - ref).denominator - 1) // (lo - ref).denominator
        vals = []
        while x <= hi:
            vals.append(x)
            x += 1
        axes.append(vals)
    out: Series = {}
    for s in product(*axes):
        c = sum(v for p, v in hat.items() if all(pi >= si for pi, si in zip(p, s)))
        if c:
            out[tuple(s)] = c
    return out


def h_from_alexander(d: AlexanderData, s: Sequence, spinc=0) -> Fraction:
    """H at ``s`` by inclusion-exclusion over nonempty sublinks.

    Each inner orthant sum is finite: summing hat/prod(1 - t^{-1}) over
    s' >= c gives sum_p hat_p * prod_i max(0, p_i - c_i + 1).
    """
    s = tuple(Fraction(x) for x in s)
    if len(s) != d.ell:
        raise ValueError("point has the wrong number of coordinates")
    total = Fraction(0)
    for k in range(1, d.ell + 1):
        for keep in combinations(range(d.ell), k):
            proj = SublinkProjection(keep, d.linking)
            c = forgetful(tuple(x + 1 for x in s), proj)
            hat = hat_euler(d, keep, spinc)
            acc = 0
            for p, coef in hat.items():
                cnt = 1
                for pi, ci in zip(p, c):
                    diff = pi - ci
                    if diff.denominator != 1:
                        raise ValueError(
                            f"point {tuple(map(str, s))} is not in the lattice of sublink {keep}"
                        )
                    cnt *= max(0, int(diff) + 1)
                    if not cnt:
                        break
                acc += coef * cnt
            total += (-1) ** (k - 1) * acc
    return total


def minus_euler_from_h(H, s: Sequence) -> int:
    """Lattice-side coefficient: sum over B of (-1)^{|B|-1} H(s - e_B)."""
    s = tuple(Fraction(x) for x in s)
    ell = len(s)
    total = Fraction(0)
    for k in range(ell + 1):
        for B in combinations(range(ell), k):
            pt = tuple(x - (1 if i in B else 0) for i, x in enumerate(s))
            total += (-1) ** (k - 1) * H(pt)
    return int(total)


def hat_from_minus(minus, s: Sequence) -> int:
    """Multiply back by prod(1 - t_i^{-1}): sum over B of (-1)^{|B|} minus(s + e_B)."""
    s = tuple(Fraction(x) for x in s)
    ell = len(s)
    total = 0
    for k in range(ell + 1):
        for B in combinations(range(ell), k):
            pt = tuple(x + (1 if i in B else 0) for i, x in enumerate(s))
            total += (-1) ** k * minus(pt)
    return total


# ---------------------------------------------------------------------------
# standard data sets


def torus_alexander(n: int, names: Sequence[str] | None = None) -> AlexanderData:
    """T(n,n): every k-component sublink is T(k,k), with Delta = (t^{1/2} - t^{-1/2})^{k-2}."""
    names = tuple(names or [f"K{i + 1}" for i in range(n)])
    lk = tuple(tuple(Fraction(int(i != j)) for j in range(n)) for i in range(n))
    data = AlexanderData(names, lk)
    for k in range(1, n + 1):
        m = max(k - 2, 0)
        series: Series = {}
        for j in range(m + 1):
            e = Fraction(m, 2) - j
            series[(e,) * k] = comb(m, j) * (-1) ** j
        for keep in combinations(range(n), k):
            data.polynomials[(frozenset(keep), 0)] = dict(series)
    return data


def two_bridge_t2_2k(k: int) -> AlexanderData:
    """T(2,2k): unknotted components with linking k, Delta = sum t^{j} over j = -(k-1)/2 .. (k-1)/2."""
    lk = ((Fraction(0), Fraction(k)), (Fraction(k), Fraction(0)))
    data = AlexanderData(("K1", "K2"), lk)
    data.polynomials[(frozenset({0}), 0)] = {(Fraction(0),): 1}
    data.polynomials[(frozenset({1}), 0)] = {(Fraction(0),): 1}
    series = {}
    for j in range(k):
        e = Fraction(k - 1, 2) - j
        series[(e, e)] = 1
    data.polynomials[(frozenset({0, 1}), 0)] = series
    return data


def mapping(series: Mapping[Point, int]):
    """Wrap a finitely supported series as a total function (zero elsewhere)."""
    return lambda p: series.get(tuple(Fraction(x) for x in p), 0)
