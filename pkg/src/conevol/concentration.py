"""Subspace concentration for discrete even measures given as weight vectors.

A weight vector x in R^N puts mass x_i on the antipodal pair {+u_i, -u_i}.
It is enough to test the concentration inequality on flats: the mass of any
subspace equals the mass of the flat of directions it contains, and that
flat spans a subspace of no larger dimension.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InconsistencyError
from .matroid import Flat, LinearMatroid
from .polytope import DEFAULT_TOL, contains, hrep, in_relint, is_exact, vrep


@dataclass(frozen=True)
class SccReport:
    satisfied: bool
    inequality_violations: tuple = ()
    equality_flats: tuple = ()
    missing_complements: tuple = ()
    complements: tuple = ()  # (equality flat indices, closure of the remaining support)

    def as_dict(self) -> dict:
        one = lambda F: [i + 1 for i in (F.indices if isinstance(F, Flat) else F)]
        return {
            "satisfied": self.satisfied,
            "inequality_violations": [one(F) for F in self.inequality_violations],
            "equality_flats": [one(F) for F in self.equality_flats],
            "missing_complements": [one(F) for F in self.missing_complements],
            "complements": [[one(F), one(C)] for F, C in self.complements],
        }


def total(x: Sequence):
    return sum(Fraction(v) for v in x) if is_exact(x) else float(np.sum(np.asarray(x, dtype=np.float64)))


def normalized(x: Sequence, n: int):
    """Scale weights so they sum to n."""
    t = total(x)
    if t <= 0:
        raise ValueError("weights must have positive total")
    if is_exact(x):
        return tuple(Fraction(v) * n / t for v in x)
    return np.asarray(x, dtype=np.float64) * (n / t)


def _support(x, tol, exact_mode):
    if exact_mode:
        return tuple(i for i, v in enumerate(x) if Fraction(v) > 0)
    return tuple(int(i) for i in np.flatnonzero(np.asarray(x, dtype=np.float64) > tol))


def scc_check(M: LinearMatroid, x: Sequence, tol: float = DEFAULT_TOL) -> SccReport:
    """Check the subspace concentration condition for the measure with weights x.

    The inequality is tested on every flat of rank strictly between 0 and n.
    For a flat F attaining equality, the condition asks for a complementary
    subspace carrying the rest of the mass, i.e. one containing every
    supported direction outside F.  Such a complement exists iff
    ``rank(F) + rank(R) == rank(F | R)`` with R the support minus F.

    Exact when x is rational; otherwise equality means
    ``|x(F) n - rank(F) total| <= tol * total``.
    """
    if len(x) != M.N:
        raise ValueError(f"weight vector has length {len(x)}, expected {M.N}")
    exact_mode = is_exact(x)
    if exact_mode:
        x = tuple(Fraction(v) for v in x)
        if any(v < 0 for v in x):
            raise ValueError("weights must be nonnegative")
    else:
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < -tol):
            raise ValueError("weights must be nonnegative")
    t = total(x)
    if t <= 0:
        raise ValueError("weights are all zero")
    n = M.n
    support = set(_support(x, tol, exact_mode))
    violations, equalities, missing, comps = [], [], [], []
    for F in M.flats():
        if not (0 < F.rank < n):
            continue
        mass = sum(x[i] for i in F.indices)
        gap = mass * n - F.rank * t
        if exact_mode:
            over, equal = gap > 0, gap == 0
        else:
            band = tol * t
            over, equal = gap > band, abs(gap) <= band
        if over:
            violations.append(F)
        elif equal:
            equalities.append(F)
            rest = tuple(sorted(support - set(F.indices)))
            if M.rank(F.indices) + M.rank(rest) == M.rank(set(F.indices) | set(rest)):
                comps.append((F.indices, M.closure(rest).indices if rest else ()))
            else:
                missing.append(F)
    return SccReport(
        satisfied=not violations and not missing,
        inequality_violations=tuple(violations),
        equality_flats=tuple(equalities),
        missing_complements=tuple(missing),
        complements=tuple(comps),
    )


def _all_positive(x, tol, exact_mode) -> bool:
    if exact_mode:
        return all(Fraction(v) > 0 for v in x)
    return bool(np.all(np.asarray(x, dtype=np.float64) > tol))


def relint_equiv(M: LinearMatroid, x: Sequence, tol: float = DEFAULT_TOL) -> bool:
    """Is x (up to scale) the cone-volume vector of a symmetric polytope?

    Computed as membership of the normalized vector in relint P_M with all
    weights positive, and checked against the concentration condition with
    full support.  Zero weights make both sides false.  A disagreement
    raises :class:`InconsistencyError`.
    """
    exact_mode = is_exact(x)
    xn = normalized(x, M.n)
    positive = _all_positive(xn, tol, exact_mode)
    geometric = positive and contains(hrep(M), xn, tol) and in_relint(M, xn, tol)
    measure = positive and scc_check(M, xn, tol).satisfied
    if geometric != measure:
        raise InconsistencyError(
            f"relint membership ({geometric}) disagrees with the concentration "
            f"condition ({measure}) at x={list(x)}")
    return geometric


def vertex_measure(M: LinearMatroid, B: Sequence[int]) -> tuple:
    """Indicator weights of a basis: the cone-volume vector of a parallelotope."""
    B = tuple(sorted(B))
    if len(B) != M.n or not M.is_independent(B):
        raise ValueError(f"{[i + 1 for i in B]} is not a basis")
    return tuple(Fraction(int(i in B)) for i in range(M.N))


def sample_relint(M: LinearMatroid, count: int, seed: int = 0, *,
                  concentration: float = 0.5, max_rejects: int = 1000) -> list:
    """Deterministic points strictly inside P_M, each summing to n.

    The first sample is the vertex barycenter.  Later ones blend the
    barycenter with a Dirichlet mixture of all vertices.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    V = vrep(M).vertices.astype(np.float64)
    bary = V.mean(axis=0)
    out = [bary.copy()]
    rejects = 0
    while len(out) < count:
        lam = rng.dirichlet(np.full(len(V), concentration))
        s = rng.uniform(0.0, 1.0)
        x = (1.0 - s) * bary + s * (lam @ V)
        x *= M.n / x.sum()
        if np.all(x > DEFAULT_TOL) and in_relint(M, x):
            out.append(x)
        else:
            rejects += 1
            if rejects > max_rejects:
                out.append(bary.copy())
    return out


def face_point(M: LinearMatroid, rng, *, concentration: float = 1.0):
    """Random point in the relative interior of a random proper face.

    The face is cut out by a random flat inequality that is not tight on
    the whole polytope.  Returns None if every flat is polytope-wide tight.
    """
    from .polytope import polytope_wide_tight
    H = hrep(M)
    pw = polytope_wide_tight(M)
    candidates = [r for r in range(len(H.flats)) if not pw[r]]
    if not candidates:
        return None
    r = candidates[rng.integers(len(candidates))]
    V = vrep(M).vertices
    on_face = V[(V.astype(np.int64) @ H.A[r]) == H.b[r]].astype(np.float64)
    lam = rng.dirichlet(np.full(len(on_face), concentration))
    return lam @ on_face
