from __future__ import annotations

from decimal import Decimal
from fractions import Fraction

import pytest

from conevol.errors import DimensionMismatch
from conevol.exact import affine_dim, in_span, qvector, rank_of, to_rational

E = lambda i, n=4: qvector([int(i == j) for j in range(n)])


def test_rank_of_examples():
    assert rank_of([E(0), E(1)]) == 2
    assert rank_of([]) == 0
    assert rank_of([qvector([1, 0, 0, 0]), qvector([0, 1, 0, 0]), qvector([1, 1, 0, 0])]) == 2


def test_rank_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        rank_of([qvector([1, 0]), qvector([1, 0, 0])])


def test_in_span_examples():
    assert in_span(qvector([1, 1, 0, 0]), [E(0), E(1)])
    assert not in_span(E(2), [E(0), E(1)])
    assert in_span(qvector([0, 0, 0, 0]), [E(3)])
    assert in_span(qvector([0, 0, 0, 0]), [])


def test_affine_dim_examples():
    assert affine_dim([qvector(p) for p in [(1, 1, 0), (1, 0, 1), (0, 1, 1)]]) == 2
    assert affine_dim([qvector((3, 4))]) == 0
    verts = [qvector([int(j != i) for j in range(5)]) for i in range(5)]
    assert affine_dim(verts) == 4
    with pytest.raises(ValueError):
        affine_dim([])


def test_to_rational_is_exact():
    assert to_rational("1/3") == Fraction(1, 3)
    assert to_rational("0.125") == Fraction(1, 8)
    assert to_rational(Decimal("0.1")) == Fraction(1, 10)
    assert to_rational(-7) == -7
    with pytest.raises(TypeError):
        to_rational(0.1)
    with pytest.raises(TypeError):
        to_rational(True)
    with pytest.raises(ValueError):
        to_rational("abc")


def test_rank_needs_exactness():
    # 1/3 + 1/3 + 1/3 = 1 exactly; a float rank test could flip here
    a = qvector(["1/3", "1/3", "1/3"])
    b = qvector([1, 1, 1])
    assert rank_of([a, b]) == 1
