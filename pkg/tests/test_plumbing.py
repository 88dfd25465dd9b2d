import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_negdef_tree, random_tree_text
from plumblat.errors import ParseError, SingularFormError
from plumblat.plumbing import (
    char_to_lattice,
    det,
    is_characteristic,
    lattice_to_char,
    parse_graph,
    spinc_classes,
    spinc_index,
)


def test_hopf_matrix(graphs):
    g = graphs["hopf"]
    assert g.ell == 2 and g.n_solid == 1
    assert g.QG == ((-1,),)
    assert g.Q == ((-1, 1, 1), (1, -1, 0), (1, 0, -1))
    assert g.linking == ((0, 1), (1, 0))


def test_t24_linking_number(graphs):
    assert graphs["t24"].linking[0][1] == 2


def test_e8_is_unimodular_and_definite(graphs):
    g = graphs["e8"]
    assert g.det_G == 1
    assert g.negative_definite
    assert len(spinc_classes(g)) == 1


def test_comments_and_blank_lines():
    g = parse_graph("# a comment\n\nvertex a -2   # trailing\nvertex b -3\nedge a b\n")
    assert g.framings == ()
    assert g.QG == ((-2, 1), (1, -3))


@pytest.mark.parametrize(
    "text",
    [
        "",
        "vertex v\n",
        "vertex v x\n",
        "vertex v -1\nvertex v -2\nedge v v\n",
        "vertex a -1\nvertex b -1\n",
        "vertex a -1\nvertex b -1\nvertex c -1\nedge a b\nedge b c\nedge c a\n",
        "vertex a -1\nedge a z\n",
        "vertex a -1\nnode b\n",
        "vertex a -1\narrow x 3\nedge a x\n",
        "vertex a-b -1\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_graph(text)


def test_bad_data_file_is_rejected():
    from plumblat.fixtures import BAD_GRAPH

    with pytest.raises(ParseError):
        parse_graph(BAD_GRAPH)


def test_singular_form():
    g = parse_graph("vertex a -2\nvertex b -1\nvertex c -2\nedge a b\nedge b c\n")
    with pytest.raises(SingularFormError):
        spinc_classes(g)


def test_round_trip_text(graphs):
    for g in graphs.values():
        assert parse_graph(g.to_text()).Q == g.Q


@given(st.integers(0, 2**32), st.integers(1, 5))
@settings(max_examples=150)
def test_incidence_invariants(seed, n):
    g = parse_graph(random_tree_text(random.Random(seed), n))
    Q = g.QG
    assert all(Q[i][j] == Q[j][i] for i in range(n) for j in range(n))
    assert [Q[i][i] for i in range(n)] == [v.weight for v in g.vertices]
    edges = set(g.edges)
    for i in range(n):
        for j in range(i + 1, n):
            assert Q[i][j] == (1 if (i, j) in edges else 0)


@given(st.integers(0, 2**32), st.integers(1, 4))
@settings(max_examples=100)
def test_spinc_count_equals_determinant(seed, n):
    g = random_negdef_tree(random.Random(seed), n)
    classes = spinc_classes(g)
    assert len(classes) == abs(g.det_G)
    for c in classes:
        assert spinc_index(g, c.rep) == c.index


@given(st.integers(0, 2**32), st.integers(1, 4))
@settings(max_examples=100)
def test_spinc_index_is_invariant_under_2_im_q(seed, n):
    r = random.Random(seed)
    g = random_negdef_tree(r, n)
    c = r.choice(spinc_classes(g))
    K = list(c.rep)
    for _ in range(3):
        w = r.randrange(n)
        sign = r.choice((-1, 1))
        K = [k + 2 * sign * q for k, q in zip(K, g.QG[w])]
    assert spinc_index(g, K) == c.index


@given(st.integers(0, 2**32))
@settings(max_examples=100)
def test_char_lattice_round_trip(seed):
    r = random.Random(seed)
    g = parse_graph(random_tree_text(r, r.randint(1, 5)))
    K = tuple(r.randint(-5, 5) * 2 + (g.Q[i][i] % 2) for i in range(len(g.vertices)))
    assert is_characteristic(g, K)
    assert lattice_to_char(g, char_to_lattice(g, K)) == K


def test_lift_is_orthogonal_to_solid_vertices(graphs):
    for name in ("hopf", "t24", "t33"):
        g = graphs[name]
        for i, a in enumerate(g.arrows):
            for w in g.solid:
                pair = g.Q[a][w] - sum(c * g.Q[u][w] for c, u in zip(g.lifts[i], g.solid))
                assert pair == 0


def test_det_frozen():
    assert det([[-2, 1], [1, -2]]) == 3
    assert det([[-2, 1, 0], [1, -2, 1], [0, 1, -2]]) == -4
