from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from conevol.concentration import (face_point, normalized, relint_equiv, sample_relint, scc_check,
                                   vertex_measure)
from conevol.polytope import in_relint, vrep

from conftest import Q

CYL = Q("2/3", "2/3", "2/3", "1/2", "1/2", "1/2", "1/2")


def test_cylinder_measure_satisfies_scc(MC):
    rep = scc_check(MC, CYL)
    assert rep.satisfied
    eq = {F.indices for F in rep.equality_flats}
    assert eq == {(0, 1, 2), (3, 4, 5, 6)}
    assert set(rep.complements) == {((0, 1, 2), (3, 4, 5, 6)), ((3, 4, 5, 6), (0, 1, 2))}
    assert rep.as_dict()["equality_flats"] == [[1, 2, 3], [4, 5, 6, 7]]


def test_edge_midpoint_fails_scc(MD):
    rep = scc_check(MD, Q(1, 1, 1, "1/2", "1/2"))
    assert not rep.satisfied
    assert not rep.inequality_violations
    assert (0,) in {F.indices for F in rep.missing_complements}


def test_barycenter_of_cfg_d(MD):
    rep = scc_check(MD, Q(*["4/5"] * 5))
    assert rep.satisfied and not rep.equality_flats


def test_violation_reported(MD):
    rep = scc_check(MD, Q(2, "1/2", "1/2", "1/2", "1/2"))
    assert not rep.satisfied
    assert (0,) in {F.indices for F in rep.inequality_violations}


def test_scc_scale_invariant(MC):
    for lam in (Fraction(1, 7), Fraction(3), Fraction(22, 5)):
        assert scc_check(MC, [lam * v for v in CYL]).satisfied
    assert scc_check(MC, [0.1 * float(v) for v in CYL]).satisfied


def test_scc_errors(MD):
    with pytest.raises(ValueError):
        scc_check(MD, Q(1, 1, 1, 1))
    with pytest.raises(ValueError):
        scc_check(MD, Q(0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        scc_check(MD, Q(-1, 1, 1, 1, 2))


def test_relint_equiv_examples(MA, MC, MD):
    assert relint_equiv(MC, Q(*["1/6"] * 3, *["1/8"] * 4))
    assert not relint_equiv(MD, Q(1, 1, 1, 1, 0))
    assert relint_equiv(MA, Q("2/3", "2/3", "2/3"))
    assert not relint_equiv(MD, Q(1, 1, 1, "1/2", "1/2"))
    assert relint_equiv(MD, [0.2] * 5)


def test_vertex_measure(MA, MD):
    assert vertex_measure(MD, (0, 1, 2, 3)) == Q(1, 1, 1, 1, 0)
    assert vertex_measure(MA, (0, 2)) == Q(1, 0, 1)
    with pytest.raises(ValueError):
        vertex_measure(MD, (0, 1, 2))


def test_vertex_measures_satisfy_scc_and_rank_equalities(MC):
    for B in MC.bases():
        x = vertex_measure(MC, B)
        assert scc_check(MC, x).satisfied
        for F in MC.flats():
            mass = sum(x[i] for i in F.indices)
            assert mass <= F.rank
            assert (mass == F.rank) == (len(set(B) & set(F.indices)) == F.rank)


def test_sample_relint(MA, MD):
    s = sample_relint(MA, 1, seed=0)
    assert np.allclose(s[0], [2 / 3] * 3)
    pts = sample_relint(MD, 100, seed=0)
    assert len(pts) == 100
    assert all(relint_equiv(MD, p) for p in pts)
    again = sample_relint(MD, 100, seed=0)
    assert all(np.array_equal(a, b) for a, b in zip(pts, again))
    with pytest.raises(ValueError):
        sample_relint(MD, 0)


def test_face_points_are_boundary(MC):
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = face_point(MC, rng)
        assert not in_relint(MC, x)


def test_normalized():
    assert normalized(Q(1, 1, 2), 2) == Q("1/2", "1/2", 1)
    assert np.allclose(normalized([1.0, 3.0], 2), [0.5, 1.5])
