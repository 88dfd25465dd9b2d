from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lattice_props as lp
from plumblat.errors import InsufficientBoxError
from plumblat.lattice_complex import (
    LatticeGenerator,
    TruncationBox,
    build_group,
    build_truncated_complex,
    f_value,
    g_value,
    model,
)
from plumblat.plumbing import parse_graph, spinc_classes

SEEDS = st.integers(0, 2**32 - 1)
HOPF_PAPER = "vertex v0 -1\narrow a1 -3\narrow a2 -2\nedge v0 a1\nedge v0 a2\n"


@pytest.mark.parametrize("name,check", sorted(lp.PROPERTY_SUITES.items()))
def test_property_suite(name, check):
    @given(SEEDS)
    @settings(max_examples=500)
    def run(seed):
        check(seed)

    run()


# -- f and g -------------------------------------------------------------------------


@pytest.fixture(scope="module")
def hopf_paper():
    return parse_graph(HOPF_PAPER, strict=False)


def test_f_empty_is_zero(hopf_paper):
    assert f_value(hopf_paper, (1, 3, 2), 0) == 0
    assert g_value(hopf_paper, (1, 3, 2), 0) == 0


@pytest.mark.parametrize("n,m1,m2", [(0, 0, 0), (2, 1, 0), (1, 3, 2), (-1, 0, 4)])
def test_hopf_f_on_central_vertex(hopf_paper, n, m1, m2):
    K = (2 * n + 1, 2 * m1 + 3, 2 * m2 + 2)
    assert f_value(hopf_paper, K, {"v0"}) == n


@pytest.mark.parametrize("n,m1,m2", [(0, 0, 0), (2, 1, 0), (-1, 2, -3), (1, -2, 1), (-2, -1, -1)])
def test_hopf_g_on_all_vertices(hopf_paper, n, m1, m2):
    K = (2 * n + 1, 2 * m1 + 3, 2 * m2 + 2)
    expect = min(0, n, m1, m2, m1 + n + 1, m2 + n + 1, m1 + m2, m1 + m2 + n + 2)
    assert g_value(hopf_paper, K, 0b111) == expect


@pytest.mark.parametrize("n,m1,m2", [(0, 0, 0), (3, 1, 2), (1, 4, 0)])
def test_hopf_differential_first_case(hopf_paper, n, m1, m2):
    K = (2 * n + 1, 2 * m1 + 3, 2 * m2 + 2)
    m = model(hopf_paper)
    out = set(m.differential(LatticeGenerator(K, 0b111)))
    assert out == {LatticeGenerator(K, 0b110), LatticeGenerator(m.shift(K, 0), 0b110, n)}


@given(SEEDS)
@settings(max_examples=200)
def test_f_single_vertex_formula(seed):
    import random

    r = random.Random(seed)
    g = lp.random_link_graph(r)
    K = lp.random_generator(r, g).K
    v = r.randrange(len(g.vertices))
    assert f_value(g, K, 1 << v) == (K[v] + g.Q[v][v]) // 2


@given(SEEDS)
@settings(max_examples=200)
def test_g_is_monotone_in_e(seed):
    import random

    r = random.Random(seed)
    g = lp.random_link_graph(r)
    x = lp.random_generator(r, g)
    for v in range(len(g.vertices)):
        if x.E >> v & 1:
            assert g_value(g, x.K, x.E) <= g_value(g, x.K, x.E & ~(1 << v))


def test_differential_requires_arrows(graphs):
    m = model(graphs["hopf"])
    with pytest.raises(ValueError):
        m.differential(LatticeGenerator((1, -1, -1), 0b001))


# -- truncated complexes --------------------------------------------------------------


def test_truncated_complex_losses_are_at_the_edges(graphs):
    g = graphs["hopf"]
    cx = build_truncated_complex(g, 0, TruncationBox.symmetric(2, Fraction(3, 2), -6))
    assert len(cx.groups) == 16
    for A, grp in cx.groups.items():
        grp.fu_complex().validate()
    m = model(g)
    for A, j, act in cx.boundary_losses():
        # a lost image leaves the Alexander box or drops below the floor
        i = int(act[1:]) - 1
        y = m.uv_action(i, cx.groups[A].gens[j], act[0])
        assert abs(m.alexander(y.K)[i]) > Fraction(3, 2) or m.gr_w(y) < -6


def test_generators_above_floor_are_inside_box(graphs):
    g = graphs["t24"]
    sp = spinc_classes(g)[0]
    grp = build_group(g, sp, (Fraction(0), Fraction(0)), -6)
    for x, gr in zip(grp.gens[: grp.core], grp.grading[: grp.core]):
        assert gr >= -6
    m = model(g)
    for x in grp.gens[grp.core :]:
        assert m.gr_w(x) < -6


def test_non_negative_definite_graph_is_refused():
    g = parse_graph("vertex v 1\narrow a\nedge v a\n")
    with pytest.raises(InsufficientBoxError):
        build_group(g, spinc_classes(g)[0], (Fraction(0),), -4)


def test_cache_round_trip(tmp_path, graphs):
    g = graphs["t24"]
    m = model(g)
    m.g_value((1, -1, -1, -1), 0b1111)
    assert m.save_cache(str(tmp_path))
    fresh = type(m)(g)
    assert fresh.load_cache(str(tmp_path))
    assert fresh._gmemo == m._gmemo
    (next(tmp_path.iterdir())).write_bytes(b"garbage")
    assert not type(m)(g).load_cache(str(tmp_path))
