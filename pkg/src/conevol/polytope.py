"""Matroid base polytopes: V- and H-representations, dimension, faces.

P_M is the convex hull of the basis indicator vectors.  Its H-description
is the sum hyperplane, nonnegativity, and one rank inequality per flat.

Points may be given as Fractions (decided exactly) or floats (decided with
an absolute tolerance per constraint, default 1e-9).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from . import exact
from .errors import CapExceeded, DimensionMismatch, InconsistencyError, InfeasiblePoint
from .matroid import Flat, LinearMatroid

DEFAULT_TOL = 1e-9
EDGE_CAP = 500


def is_exact(x) -> bool:
    return all(isinstance(v, Rational) and not isinstance(v, bool) for v in x)


@dataclass(frozen=True)
class VRep:
    bases: tuple
    vertices: np.ndarray  # (num_bases, N) int8

    def __len__(self):
        return len(self.bases)


@dataclass(frozen=True)
class HRep:
    N: int
    n: int
    flats: tuple  # Flat per inequality row
    A: np.ndarray  # (num_flats, N) 0/1 indicator rows
    b: np.ndarray  # ranks

    def constraint_rows(self):
        """All inequalities as (A, b) with a @ x <= b, nonnegativity included."""
        A = np.vstack([self.A, -np.eye(self.N)])
        b = np.concatenate([self.b, np.zeros(self.N)])
        return A, b


@dataclass(frozen=True)
class BoundaryClass:
    tag: str  # interior | vertex | edge_interior | other_face | infeasible
    active_flats: tuple = ()

    TAGS = ("interior", "vertex", "edge_interior", "other_face", "infeasible")


def _store(M: LinearMatroid, key, build):
    return M._cached(key, build)


def vrep(M: LinearMatroid) -> VRep:
    def build():
        bases = M.bases()
        V = np.zeros((len(bases), M.N), dtype=np.int8)
        for r, B in enumerate(bases):
            V[r, list(B)] = 1
        return VRep(bases, V)
    return _store(M, "vrep", build)


def hrep(M: LinearMatroid) -> HRep:
    def build():
        flats = M.flats()
        A = np.zeros((len(flats), M.N), dtype=np.int64)
        for r, F in enumerate(flats):
            A[r, list(F.indices)] = 1
        b = np.array([F.rank for F in flats], dtype=np.int64)
        return HRep(M.N, M.n, flats, A, b)
    return _store(M, "hrep", build)


def dimension(M: LinearMatroid) -> int:
    """N - c(M), cross-checked against the affine dimension of the vertices."""
    def build():
        d = M.N - M.components().count
        pts = [tuple(Fraction(int(v)) for v in row) for row in vrep(M).vertices]
        d_aff = exact.affine_dim(pts)
        if d != d_aff:
            raise InconsistencyError(
                f"N - c(M) = {d} but vertices span affine dimension {d_aff}")
        return d
    return _store(M, "dimension", build)


def contains(H: HRep, x: Sequence, tol: float = DEFAULT_TOL) -> bool:
    """Membership in the H-described polytope; exact when x is rational."""
    if len(x) != H.N:
        raise DimensionMismatch(f"point has length {len(x)}, polytope lives in R^{H.N}")
    if is_exact(x):
        x = [Fraction(v) for v in x]
        if sum(x) != H.n or any(v < 0 for v in x):
            return False
        return all(sum(x[i] for i in F.indices) <= F.rank for F in H.flats)
    x = np.asarray(x, dtype=np.float64)
    if abs(x.sum() - H.n) > tol or np.any(x < -tol):
        return False
    return bool(np.all(H.A @ x <= H.b + tol))


def _flat_slacks(H: HRep, x):
    """Slack rank(F) - x(F) per flat (Fractions or floats)."""
    if is_exact(x):
        return [F.rank - sum(Fraction(x[i]) for i in F.indices) for F in H.flats]
    return H.b - H.A @ np.asarray(x, dtype=np.float64)


def polytope_wide_tight(M: LinearMatroid) -> np.ndarray:
    """Boolean per flat: is the flat inequality tight at every vertex?

    Decided by scanning vertices; the separator criterion is asserted to agree.
    """
    def build():
        H, V = hrep(M), vrep(M)
        tight = np.all(V.vertices.astype(np.int64) @ H.A.T == H.b[None, :], axis=0)
        for F, t in zip(H.flats, tight):
            if bool(t) != M.is_separator(F.indices):
                raise InconsistencyError(
                    f"flat {F.indices}: vertex scan says tight={bool(t)}, "
                    f"separator test says {M.is_separator(F.indices)}")
        # nonnegativity is never tight everywhere: vectors are nonzero, so no loops
        if np.any(np.all(V.vertices == 0, axis=0)):
            raise InconsistencyError("some coordinate vanishes on every vertex")
        return tight
    return _store(M, "pw_tight", build)


def active_flats(M: LinearMatroid, x, tol: float = DEFAULT_TOL) -> tuple:
    H = hrep(M)
    slack = _flat_slacks(H, x)
    if is_exact(x):
        return tuple(F for F, s in zip(H.flats, slack) if s == 0)
    return tuple(F for F, s in zip(H.flats, slack) if abs(s) <= tol)


def in_relint(M: LinearMatroid, x, tol: float = DEFAULT_TOL) -> bool:
    """x in relint P_M iff every inequality tight at x is tight on all of P_M."""
    H = hrep(M)
    if not contains(H, x, tol):
        raise InfeasiblePoint("point lies outside the base polytope")
    pw = polytope_wide_tight(M)
    exact_mode = is_exact(x)
    slack = _flat_slacks(H, x)
    for s, wide in zip(slack, pw):
        tight = (s == 0) if exact_mode else abs(s) <= tol
        if tight and not wide:
            return False
    if exact_mode:
        return all(Fraction(v) > 0 for v in x)
    return bool(np.all(np.asarray(x, dtype=np.float64) > tol))


def face_dimension(M: LinearMatroid, x, tol: float = DEFAULT_TOL) -> int:
    """Dimension of the smallest face containing x (from the active constraints)."""
    H = hrep(M)
    rows = [np.ones(M.N)]
    act = {F.indices for F in active_flats(M, x, tol)}
    for F, a in zip(H.flats, H.A):
        if F.indices in act:
            rows.append(a.astype(np.float64))
    xa = [Fraction(v) for v in x] if is_exact(x) else np.asarray(x, dtype=np.float64)
    for i in range(M.N):
        if (xa[i] == 0) if is_exact(x) else (abs(xa[i]) <= tol):
            e = np.zeros(M.N)
            e[i] = 1.0
            rows.append(e)
    R = [tuple(Fraction(int(round(v))) for v in r) for r in rows]
    return M.N - exact.rank_of(R)


def _is_edge_lp(V: np.ndarray, a: int, b: int) -> bool:
    """Is the midpoint of V[a], V[b] representable only through V[a] and V[b]?

    Maximizes the total weight on the other vertices over all convex
    representations of the midpoint; the pair spans an edge iff that maximum
    is zero.
    """
    m = V.shape[0]
    mid = 0.5 * (V[a] + V[b])
    c = -np.ones(m)
    c[a] = c[b] = 0.0
    A_eq = np.vstack([V.T.astype(np.float64), np.ones((1, m))])
    b_eq = np.concatenate([mid, [1.0]])
    res = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise InconsistencyError(f"edge LP failed: {res.message}")
    return -res.fun <= 1e-9


def edges_smallcase(M: LinearMatroid, cap: int = EDGE_CAP) -> tuple:
    """All edges of P_M as pairs of vertex indices (into ``vrep(M).bases``).

    Found by a linear feasibility test on every vertex pair; afterwards every
    edge is checked to be a translate of some e_i - e_j.
    """
    def build():
        V = vrep(M).vertices
        if len(V) > cap:
            raise CapExceeded(f"{len(V)} vertices exceeds edge cap {cap}")
        edges = []
        for a in range(len(V)):
            for b in range(a + 1, len(V)):
                if _is_edge_lp(V, a, b):
                    edges.append((a, b))
        for a, b in edges:
            d = V[a].astype(int) - V[b].astype(int)
            if not (np.count_nonzero(d) == 2 and d.sum() == 0):
                raise InconsistencyError(
                    f"edge between vertices {a} and {b} has direction {d.tolist()}")
        return tuple(edges)
    if len(vrep(M)) > cap:
        raise CapExceeded(f"{len(vrep(M))} vertices exceeds edge cap {cap}")
    return _store(M, "edges", build)


def _close(x, y, tol, exact_mode):
    if exact_mode:
        return all(Fraction(a) == Fraction(b) for a, b in zip(x, y))
    return bool(np.all(np.abs(np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)) <= tol))


def _strictly_inside_segment(x, v, w, tol, exact_mode) -> bool:
    """x = v + t (w - v) with 0 < t < 1."""
    if exact_mode:
        x = [Fraction(a) for a in x]
        d = [int(b) - int(a) for a, b in zip(v, w)]
        j = next(i for i, di in enumerate(d) if di != 0)
        t = (x[j] - int(v[j])) / d[j]
        if not (0 < t < 1):
            return False
        return all(x[i] == int(v[i]) + t * d[i] for i in range(len(x)))
    x = np.asarray(x, dtype=np.float64)
    v = v.astype(np.float64)
    d = w.astype(np.float64) - v
    t = float(np.dot(x - v, d) / np.dot(d, d))
    if not (tol < t < 1 - tol):
        return False
    return bool(np.all(np.abs(v + t * d - x) <= tol))


def classify_boundary(M: LinearMatroid, x, tol: float = DEFAULT_TOL,
                      cap: int = EDGE_CAP) -> BoundaryClass:
    """Tag x as infeasible, interior (relint), vertex, edge_interior or other_face.

    Edge membership uses the geometric edge list when the vertex count is
    within ``cap``; larger polytopes fall back to the active-constraint rank
    (a point is in an edge's relative interior iff its minimal face is
    one-dimensional).
    """
    H = hrep(M)
    if not contains(H, x, tol):
        return BoundaryClass("infeasible")
    act = tuple(F.indices for F in active_flats(M, x, tol))
    if in_relint(M, x, tol):
        return BoundaryClass("interior", act)
    exact_mode = is_exact(x)
    V = vrep(M).vertices
    for v in V:
        if _close(x, v, tol, exact_mode):
            return BoundaryClass("vertex", act)
    if len(V) <= cap:
        for a, b in edges_smallcase(M, cap):
            if _strictly_inside_segment(x, V[a], V[b], tol, exact_mode):
                return BoundaryClass("edge_interior", act)
        return BoundaryClass("other_face", act)
    return BoundaryClass("edge_interior" if face_dimension(M, x, tol) == 1 else "other_face", act)


def barycenter(M: LinearMatroid) -> tuple:
    """Exact average of all vertices (always in the relative interior)."""
    V = vrep(M).vertices
    k = len(V)
    return tuple(Fraction(int(c), k) for c in V.sum(axis=0))


__all__ = [
    "VRep", "HRep", "BoundaryClass", "Flat", "vrep", "hrep", "dimension", "contains",
    "in_relint", "edges_smallcase", "classify_boundary", "active_flats",
    "face_dimension", "polytope_wide_tight", "barycenter", "is_exact",
]
