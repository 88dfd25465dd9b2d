"""Pure-Python versions of the hot kernels.

Both functions have a compiled twin in ``_ckernels.pyx`` with the same
signature; ``plumblat.kernels`` picks one at import time.
"""

from __future__ import annotations


def subset_min(kvals: list[int], q: list[list[int]], forced: int) -> int:
    """Return min of ``2f(K, I)`` over ``forced ⊆ I ⊆ {0..m-1}``.

    ``kvals[j]`` is K on the j-th vertex, ``q`` the pairing restricted to the
    same vertices, ``forced`` a bitmask. Subsets are visited in Gray-code
    order so each step is O(m).
    """
    m = len(kvals)
    rowsum = [0] * m
    cur = 0
    free = []
    for j in range(m):
        if forced >> j & 1:
            cur += kvals[j] + 2 * rowsum[j] + q[j][j]
            qj = q[j]
            for x in range(m):
                rowsum[x] += qj[x]
        else:
            free.append(j)
    best = cur
    member = forced
    for t in range(1, 1 << len(free)):
        j = free[(t & -t).bit_length() - 1]
        qj = q[j]
        if member >> j & 1:
            member ^= 1 << j
            for x in range(m):
                rowsum[x] -= qj[x]
            cur -= kvals[j] + 2 * rowsum[j] + qj[j]
        else:
            cur += kvals[j] + 2 * rowsum[j] + qj[j]
            member |= 1 << j
            for x in range(m):
                rowsum[x] += qj[x]
        if cur < best:
            best = cur
    return best


def f2_reduce(cols: list[int]) -> tuple[list[int], list[int]]:
    """Column-reduce bitset columns over F2 in the given order.

    Returns ``(reduced, combos)``: ``reduced[c]`` is column c after clearing
    every lowest bit already owned by an earlier column (0 when c lies in the
    span of its predecessors) and ``combos[c]`` records which original
    columns were summed to get it.
    """
    owner: dict[int, int] = {}
    reduced = []
    combos = []
    for c, v in enumerate(cols):
        combo = 1 << c
        while v:
            low = v & -v
            k = owner.get(low)
            if k is None:
                owner[low] = c
                break
            v ^= reduced[k]
            combo ^= combos[k]
        reduced.append(v)
        combos.append(combo)
    return reduced, combos
