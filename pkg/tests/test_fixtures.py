import pytest

from plumblat.fixtures import (
    GRAPHS,
    complex_C,
    complex_D,
    t33_maps,
    torus_fixture_resolution,
)
from plumblat.presentation import torus_presentation
from plumblat.resolution import free_resolution, verify_exact


def test_every_graph_parses(graphs):
    assert set(graphs) == set(GRAPHS)
    assert graphs["t44"].ell == 4


def test_t33_fixture_degrees_match_computed_resolution():
    fx = torus_fixture_resolution(3, 6)
    r = free_resolution(torus_presentation(3), 6)
    assert fx.betti == r.betti == (3, 8, 6, 1)
    for a, b in zip(fx.stages, r.stages):
        assert sorted(a.degrees) == sorted(b.degrees)


def test_t33_fixture_is_exact():
    assert verify_exact(torus_fixture_resolution(3, 6), torus_presentation(3)).ok


@pytest.mark.slow
def test_t44_fixture_is_exact():
    fx = torus_fixture_resolution(4, 8)
    assert fx.betti == (4, 20, 28, 14, 2)
    assert verify_exact(fx, torus_presentation(4)).ok


@pytest.mark.parametrize("label,k", [("b1", 1), ("Z2", 0), ("c3", 2)])
def test_mutants_are_caught(label, k):
    assert not verify_exact(torus_fixture_resolution(3, 6, drop=(label, k)), torus_presentation(3)).ok


def test_mutant_drop_changes_only_one_image():
    a = dict(zip(*t33_maps()[0]))
    b = dict(zip(*t33_maps(("b1", 1))[0]))
    assert [k for k in a if a[k] != b[k]] == ["b1"]


def test_fixture_rejects_unknown_sizes():
    with pytest.raises(ValueError):
        torus_fixture_resolution(5, 8)


def test_nonformal_pair_same_homology_different_reduction():
    C, D = complex_C(), complex_D()
    C.validate()
    D.validate()
    assert C.homology(4) == D.homology(4)
    assert (C.total_rank_mod_all(), D.total_rank_mod_all()) == (5, 3)
