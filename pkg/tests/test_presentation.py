import json
from fractions import Fraction

import pytest

from plumblat.errors import InsufficientBoxError
from plumblat.presentation import (
    ModulePresentation,
    minimal_generators,
    presentation_from_h,
    presentation_from_json,
    presentations_equivalent,
    quotient_dims,
    torus_h,
    torus_hfunction_table,
    torus_presentation,
    tower_dims_agree,
)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_torus_generator_gradings(n):
    p = torus_presentation(n)
    assert [g.maslov_w for g in p.generators] == [-k * (k - 1) for k in range(1, n + 1)]
    assert [g.integral_alexander for g in p.generators] == [(Fraction(1 - k),) * n for k in range(1, n + 1)]


def test_hopf_presentation_from_closed_form_h():
    p = presentation_from_h(torus_hfunction_table(2, 3))
    assert p.labels == ["X1", "X2"]
    assert [r.render(p.labels) for r in p.relations] == ["U1 X1 = V2 X2", "U2 X1 = V1 X2"]


@pytest.mark.parametrize("n,pruned", [(2, 2), (3, 8)])
def test_closed_form_route_matches_torus_presentation(n, pruned):
    p = presentation_from_h(torus_hfunction_table(n, 3))
    ok, why = presentations_equivalent(p, torus_presentation(n))
    assert ok, why
    assert len(p.relations) == pruned


def test_equivalence_detects_missing_relation():
    q = torus_presentation(3)
    p = ModulePresentation(3, q.generators, q.relations[1:], q.full_relations)
    ok, why = presentations_equivalent(p, q)
    assert not ok and "not implied" in why


def test_equivalence_detects_degree_mismatch():
    p, q = torus_presentation(2), torus_presentation(3)
    assert not presentations_equivalent(p, q)[0]


@pytest.mark.parametrize("n", [2, 3])
def test_quotient_matches_h_towers(n):
    ok, bad = tower_dims_agree(torus_presentation(n), torus_hfunction_table(n, 3), 4)
    assert ok, bad[:3]


def test_quotient_dims_frozen_hopf():
    dims = quotient_dims(torus_presentation(2), 2)
    # integer degrees are (a1, a2, n) relative to X1
    assert dims[(0, 0, 0)] == 1
    assert dims[(-1, -1, 1)] == 1
    assert dims[(0, -1, 1)] == 1  # U2 X1 = V1 X2 identified


def test_boundary_generator_is_inconclusive():
    with pytest.raises(InsufficientBoxError):
        minimal_generators(torus_hfunction_table(3, 0))


def test_json_round_trip():
    p = presentation_from_h(torus_hfunction_table(3, 3))
    q = presentation_from_json(json.dumps(p.to_json()))
    assert q.labels == p.labels
    assert [g.degree for g in q.generators] == [g.degree for g in p.generators]
    assert q.relation_elements() == p.relation_elements()
    assert presentations_equivalent(p, q)[0]


def test_text_layout():
    text = torus_presentation(2).to_text()
    assert text.splitlines()[0] == "generators:"
    assert "X2: A = (-1/2, -1/2), gr_w = -2" in text


def test_torus_h_symmetric_in_coordinates():
    assert torus_h(3, (0, 1, -1)) == torus_h(3, (1, -1, 0))
    with pytest.raises(ValueError):
        torus_h(3, (0, 0))
