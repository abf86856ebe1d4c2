import random
from fractions import Fraction

import pytest

from conftest import rand_sl2, random_holonomy
from oracles import tet_value_oracle
from spinnets.errors import AdmissibilityError, InputError, RegimeError
from spinnets.evaluator import (bracket_square, eval_spin_network, gauge_transform,
                                renormalize, theta_value)
from spinnets.graphs import Graph, Holonomy, admissible_colorings
from spinnets.rational import QQi


def test_theta_trivial_cases(theta):
    assert eval_spin_network(theta, {"e1": 0, "e2": 0, "e3": 0}) == QQi(1)
    assert eval_spin_network(theta, {"e1": 1, "e2": 1, "e3": 1}) == QQi(0)
    v = eval_spin_network(theta, {"e1": 2, "e2": 2, "e3": 2})
    assert v.norm2() == 9  # |value| = 3


def test_theta_value_examples():
    assert theta_value(0, 0, 0) == 1
    assert theta_value(2, 2, 2) == 3
    # closed formula gives 3 here (6/2); cross-checked against the contraction
    assert theta_value(1, 1, 2) == 3
    with pytest.raises(AdmissibilityError):
        theta_value(1, 1, 1)
    with pytest.raises(AdmissibilityError):
        theta_value(5, 1, 2)


def test_theta_closed_form_small(theta):
    for col in admissible_colorings(theta, max_color=6):
        v = eval_spin_network(theta, col)
        assert v.im == 0
        assert abs(v.re) == theta_value(col["e1"], col["e2"], col["e3"])


def test_theta_value_vs_eval_112(theta):
    v = eval_spin_network(theta, {"e1": 1, "e2": 1, "e3": 2})
    assert abs(v.re) == theta_value(1, 1, 2) == 3


def test_tet_matches_racah_oracle_small(tet):
    for col in admissible_colorings(tet, max_color=3):
        v = eval_spin_network(tet, col)
        assert v.im == 0
        assert v.re == tet_value_oracle(col)


def test_presentations_agree(tet, tetnp):
    # same cyclic structure, different presentation: equal evaluations
    for col in admissible_colorings(tet, max_color=3):
        assert eval_spin_network(tet, col) == eval_spin_network(tetnp, col)


def test_rotated_vertex_presentation_agrees(theta):
    rotated = Graph.from_obj({
        "name": "theta_rot",
        "vertices": [{"id": "u", "halfedges": ["u2", "u3", "u1"]},
                     {"id": "v", "halfedges": ["v1", "v2", "v3"]}],
        "edges": [{"id": "e1", "left": "u1", "right": "v3"},
                  {"id": "e2", "left": "u2", "right": "v2"},
                  {"id": "e3", "left": "u3", "right": "v1"}],
        "crossings": [["e1", "e2"], ["e1", "e3"]],
    })
    assert rotated.crossings == rotated.interleaving_crossings()
    for col in admissible_colorings(theta, max_color=4):
        assert eval_spin_network(theta, col) == eval_spin_network(rotated, col)


def test_renormalize(theta):
    col = {"e1": 2, "e2": 2, "e3": 2}
    assert renormalize(theta, col, QQi(1)) == QQi(8)  # (2!)^3 / 1
    col0 = {"e1": 0, "e2": 0, "e3": 0}
    assert renormalize(theta, col0, QQi(5)) == QQi(5)
    v = QQi(Fraction(3, 7))
    back = renormalize(theta, col, v) * Fraction(1, 8)
    assert back == v


def test_bracket_square(theta, tet):
    for col in admissible_colorings(theta, max_color=5):
        assert bracket_square(theta, col) == 1
    assert bracket_square(theta, {"e1": 1, "e2": 1, "e3": 1}) == 0
    assert bracket_square(tet, {e: 2 for e in tet.edge_ids}) == Fraction(1, 36)
    hol = random_holonomy(theta, seed=3)
    assert bracket_square(theta, {"e1": 2, "e2": 2, "e3": 2}, hol) >= 0


def test_float_holonomy_rejected(theta):
    hol = Holonomy(theta, {h: ((1.0, 0.0), (0.0, 1.0)) for h in theta.halfedges}, False)
    with pytest.raises(RegimeError):
        eval_spin_network(theta, {"e1": 0, "e2": 0, "e3": 0}, hol)


def test_gauge_invariance(theta):
    rng = random.Random(1)
    hol = random_holonomy(theta, seed=2)
    col = {"e1": 3, "e2": 2, "e3": 1}
    base = eval_spin_network(theta, col, hol)
    keys = ["u", "v", "e1", "e2", "e3"]
    for _ in range(100):
        g = {k: rand_sl2(rng) for k in keys}
        assert eval_spin_network(theta, col, gauge_transform(theta, hol, g)) == base


def test_gauge_identity_and_minus_identity(theta):
    hol = random_holonomy(theta, seed=4)
    one, zero = QQi(1), QQi(0)
    eye = ((one, zero), (zero, one))
    neg = ((-one, zero), (zero, -one))
    keys = ["u", "v", "e1", "e2", "e3"]
    assert gauge_transform(theta, hol, {k: eye for k in keys}).entries == hol.entries
    assert gauge_transform(theta, hol, {k: neg for k in keys}).entries == hol.entries


def test_gauge_rejects_non_unimodular(theta):
    hol = Holonomy.trivial(theta)
    bad = ((QQi(2), QQi(0)), (QQi(0), QQi(1)))
    with pytest.raises(InputError):
        gauge_transform(theta, hol, {k: bad for k in ["u", "v", "e1", "e2", "e3"]})
