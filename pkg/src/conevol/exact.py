"""Exact rational linear algebra: rank, span membership, affine dimension.

Scalars are :class:`fractions.Fraction`; a vector is a tuple of Fractions
and a matrix is a sequence of such rows.  Nothing here ever rounds.
"""
from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import DimensionMismatch

QVector = tuple  # tuple[Fraction, ...]


def to_rational(value) -> Fraction:
    """Convert an int, Fraction, Decimal or string ("p/q", "3", "0.125") to a Fraction.

    Floats are rejected: a binary float silently carries rounding error into
    a computation that is supposed to be exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (Rational, Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def qvector(entries: Iterable) -> QVector:
    return tuple(to_rational(e) for e in entries)


def _common_dim(vectors: Sequence[QVector]) -> int | None:
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise DimensionMismatch(f"vectors have differing lengths {sorted(dims)}")
    return dims.pop() if dims else None


def row_reduce(rows: Sequence[QVector]) -> list[list[Fraction]]:
    """Return the nonzero rows of a row echelon form of ``rows``.

    Gaussian elimination over Q; the row space is preserved.
    """
    _common_dim(rows)
    m = [list(r) for r in rows]
    if not m:
        return []
    n_rows, n_cols = len(m), len(m[0])
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            break
        for i in range(piv_r, n_rows):
            if m[i][piv_c] != 0:
                break
        else:
            continue
        m[piv_r], m[i] = m[i], m[piv_r]
        p = m[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = m[r][piv_c]
            if fr == 0:
                continue
            q = fr / p
            row_r, row_p = m[r], m[piv_r]
            for c in range(piv_c, n_cols):
                row_r[c] -= row_p[c] * q
        piv_r += 1
    return m[:piv_r]


def rank_of(vectors: Sequence[QVector]) -> int:
    """Dimension of the linear span of ``vectors`` (0 for an empty sequence)."""
    return len(row_reduce(vectors))


def in_span(v: QVector, basis: Sequence[QVector]) -> bool:
    """True iff ``v`` lies in the span of ``basis``."""
    if basis:
        _common_dim(list(basis) + [v])
    elif all(c == 0 for c in v):
        return True
    return rank_of(list(basis) + [v]) == rank_of(basis)


def affine_dim(points: Sequence[QVector]) -> int:
    """Affine dimension of a nonempty point set; a single point gives 0."""
    if not points:
        raise ValueError("affine_dim needs at least one point")
    p0 = points[0]
    _common_dim(points)
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in points[1:]]
    return rank_of(diffs)


def span_basis(vectors: Sequence[QVector]) -> list[QVector]:
    """A maximal independent subsequence of ``vectors`` (greedy, in order)."""
    chosen: list[QVector] = []
    r = 0
    for v in vectors:
        if rank_of(chosen + [v]) > r:
            chosen.append(v)
            r += 1
    return chosen


def mat_vec(matrix: Sequence[QVector], v: QVector) -> QVector:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in matrix)
