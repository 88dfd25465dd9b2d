import json
import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_char, random_negdef_tree
from plumblat.algebra_core import FUHomology, FUSummary
from plumblat.errors import InsufficientBoxError
from plumblat.homology_engine import (
    d_from_g,
    h_function,
    homology,
    is_lspace_link,
    is_torsion_free,
    phi_sublink,
    piece_at,
    sublink_graph,
)
from plumblat.lattice_complex import TruncationBox, build_truncated_complex
from plumblat.plumbing import parse_graph, spinc_classes
from plumblat.presentation import torus_h

half = Fraction(1, 2)


def box(ell, r, floor=-8):
    return TruncationBox.symmetric(ell, Fraction(r), floor)


def test_s3_is_a_single_tower(graphs):
    (p,) = homology(build_truncated_complex(graphs["s3"], 0, TruncationBox((), -8)))
    assert p.free_tops == (0,) and not p.torsion


@pytest.mark.parametrize("s", range(-3, 4))
def test_unknot_h(graphs, s):
    H = h_function(graphs["unknot"], box(1, 3))
    assert H((s,)) == Fraction(abs(s) - s, 2)


@pytest.mark.parametrize(
    "s,value",
    [((half, half), 0), ((-half, -half), 1), ((-5 * half, -5 * half), 5), ((-half, 3 * half), 1)],
)
def test_hopf_h_values(graphs, s, value):
    assert h_function(graphs["hopf"], box(2, Fraction(5, 2)))(s) == value


def test_hopf_integral_shift(graphs):
    H = h_function(graphs["hopf"], box(2, half))
    assert H.integral((half, half)) == (0, 0)


def test_t33_matches_closed_form(graphs):
    H = h_function(graphs["t33"], box(3, 2))
    assert all(H(s) == torus_h(3, s) for s in H.points())


@pytest.mark.parametrize("name,ell,r", [("unknot", 1, 3), ("hopf", 2, Fraction(5, 2)), ("t24", 2, 2), ("t33", 3, 2)])
def test_h_step_and_symmetry(graphs, name, ell, r):
    H = h_function(graphs[name], box(ell, r))
    for s in H.points():
        for i in range(ell):
            t = tuple(x - (k == i) for k, x in enumerate(s))
            if t in H:
                assert H(t) - H(s) in (0, 1)
        neg = tuple(-x for x in s)
        assert H(neg) == H(s) + sum(s)


def test_parallel_h_function_matches_serial(graphs):
    a = h_function(graphs["hopf"], box(2, Fraction(3, 2)))
    b = h_function(graphs["hopf"], box(2, Fraction(3, 2)), jobs=2)
    assert a.values == b.values


def test_h_function_json_and_table(graphs):
    H = h_function(graphs["hopf"], box(2, half))
    doc = json.loads(json.dumps(H.to_json()))
    assert {tuple(p["s"]): p["H"] for p in doc["points"]}[("-1/2", "-1/2")] == "1"
    assert "1/2" in H.table()


def test_lspace_check(graphs):
    ok, witness = is_lspace_link(graphs["hopf"], box(2, Fraction(3, 2)))
    assert ok and witness is None


def test_torsion_witness():
    h = FUHomology({0: FUSummary((Fraction(0),), ((2, Fraction(-2)),))})
    assert is_torsion_free(h) == (False, (2, Fraction(-2)))


def test_piece_at_escalation_cap(graphs):
    g = graphs["hopf"]
    sp = spinc_classes(g)[0]
    A = (-5 * half, -5 * half)
    assert piece_at(g, sp, A, floor=-4).top_grading == -10
    with pytest.raises(InsufficientBoxError):
        piece_at(g, sp, A, floor=-2, cap=-4)


def test_piece_at_rejects_off_lattice_degree(graphs):
    with pytest.raises(ValueError):
        piece_at(graphs["hopf"], 0, (Fraction(0), Fraction(0)))


# -- d_from_g and the sublink oracle -----------------------------------------------


def test_d_from_g_frozen():
    g = parse_graph("vertex v -1\n")
    assert d_from_g(g, (-1,), 0) == 0
    assert d_from_g(g, (-1,), {"v"}) == 2 * min(0, (-1 - 1) // 2)
    assert d_from_g(g, (1,), {"v"}) == 0


def test_d_from_g_rejects_arrows(graphs):
    with pytest.raises(ValueError):
        d_from_g(graphs["hopf"], (1, 1, 1), 0b111)


def test_hopf_pair_matches_hopf_h():
    g = parse_graph("vertex a -1\nvertex b -1\nedge a b\n")
    H = h_function(parse_graph("vertex v -1\narrow a1\narrow a2\nedge v a1\nedge v a2\n"), box(2, Fraction(7, 2)))
    for K in product((-3, -1, 1, 3), repeat=2):
        s = phi_sublink(g, K, 0b11)
        assert d_from_g(g, K, 0b11) == -2 * H(s)


def lemma_cases(g, E_list, radius=3):
    axes = [[k for k in range(-radius, radius + 1) if (k - g.Q[i][i]) % 2 == 0] for i in range(len(g.vertices))]
    sub = {E: sublink_graph(g, E) for E in E_list}
    cls = {E: spinc_classes(sub[E])[0] for E in E_list}
    for K in product(*axes):
        for E in E_list:
            yield K, E, sub[E], cls[E]


@given(st.integers(0, 2**32), st.integers(1, 4))
@settings(max_examples=15)
def test_lemma_oracle_on_random_trees(seed, n):
    r = random.Random(seed)
    g = random_negdef_tree(r, n)
    E_list = sorted({r.randrange(1, 1 << n) for _ in range(3)} | {(1 << n) - 1})
    for K, E, sg, sp in lemma_cases(g, E_list, radius=2):
        assert d_from_g(g, K, E) == piece_at(sg, sp, phi_sublink(g, K, E)).top_grading


def test_sublink_graph_shape():
    g = parse_graph("vertex a -2\nvertex b -3\nvertex c -2\nedge a b\nedge b c\n")
    sg = sublink_graph(g, {"a", "c"})
    assert sg.ell == 2 and sg.n_solid == 0 and sg.edges == ()
    assert sg.framings == (-2, -2)
    K = random_char(random.Random(0), g)
    assert len(phi_sublink(g, K, {"a", "c"})) == 2
