import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plumblat import _purekernels, kernels

try:
    from plumblat import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def brute_subset_min(kv, q, forced):
    m = len(kv)
    best = None
    for I in range(1 << m):
        if I & forced != forced:
            continue
        idx = [j for j in range(m) if I >> j & 1]
        val = sum(kv[j] for j in idx) + sum(q[a][b] for a in idx for b in idx)
        best = val if best is None else min(best, val)
    return best


@st.composite
def pairing(draw, max_m=7):
    m = draw(st.integers(1, max_m))
    q = [[0] * m for _ in range(m)]
    for i in range(m):
        q[i][i] = draw(st.integers(-5, 1))
        for j in range(i):
            q[i][j] = q[j][i] = draw(st.sampled_from([0, 0, 1]))
    kv = [draw(st.integers(-6, 6)) for _ in range(m)]
    forced = draw(st.integers(0, (1 << m) - 1))
    return kv, q, forced


@given(pairing())
@settings(max_examples=200)
def test_subset_min_matches_brute_force(case):
    kv, q, forced = case
    assert _purekernels.subset_min(kv, q, forced) == brute_subset_min(kv, q, forced)


@needs_c
@given(pairing(max_m=12))
@settings(max_examples=200)
def test_subset_min_backends_agree(case):
    kv, q, forced = case
    assert _ckernels.subset_min(kv, q, forced) == _purekernels.subset_min(kv, q, forced)


@needs_c
@given(st.lists(st.integers(0, 2**150), max_size=40))
@settings(max_examples=200)
def test_f2_reduce_backends_agree(cols):
    assert _ckernels.f2_reduce(cols) == _purekernels.f2_reduce(cols)


@given(st.lists(st.integers(0, 2**20), max_size=25))
def test_f2_reduce_combos_reproduce_columns(cols):
    reduced, combos = kernels.f2_reduce(cols)
    for v, c in zip(reduced, combos):
        acc = 0
        for k, col in enumerate(cols):
            if c >> k & 1:
                acc ^= col
        assert acc == v


def test_backend_name_is_known():
    assert kernels.BACKEND in ("cython", "python")


@needs_c
def test_subset_min_rejects_oversized_input():
    with pytest.raises(ValueError):
        _ckernels.subset_min([0] * 63, [[0] * 63 for _ in range(63)], 0)
