"""Volume decomposition functionals X_k of cone-volume weight vectors.

For weights x (x_i = cone volume of the pair {+u_i, -u_i}) and 1 <= k <= n,

    X_k^n = sum of x_{i_1} ... x_{i_n} over ordered tuples (i_1..i_n) in E^n
            whose vectors span a k-dimensional subspace.

Three independent evaluation routes are provided: brute-force enumeration
(ordered tuples through a compiled kernel, or multisets with multinomial
weights), the dimension-reduction recursion over the lattice of spanned
subspaces, and the explicit polynomials for k = 2 and k = 3.

Every evaluator accepts float weights or exact Fractions; exact input gives
exact output.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .errors import CapExceeded
from .matroid import LinearMatroid, _mask
from .polytope import is_exact

BRUTE_CAP = 10 ** 7
ORDERED_MAX_N = 20


def _as_weights(x, exact: bool | None):
    if exact is None:
        exact = is_exact(x)
    if exact:
        return tuple(Fraction(v) for v in x), True
    return tuple(float(v) for v in x), False


def _sum(values, exact):
    values = list(values)
    if exact:
        return sum(values, Fraction(0))
    return math.fsum(values)


# ---------------------------------------------------------------------------
# subspace lattice


@dataclass(frozen=True)
class SubspaceLattice:
    """Subspaces spanned by directions, grouped by dimension.

    ``levels[k]`` lists the member index sets of the k-dimensional ones;
    these are exactly the rank-k flats.  ``below[(k, i)][l]`` lists the
    level-l entries contained in entry i of level k.
    """

    n: int
    levels: dict
    below: dict = field(repr=False)

    def members(self, k: int) -> tuple:
        return self.levels.get(k, ())

    def count(self, k: int) -> int:
        return len(self.levels.get(k, ()))


def subspace_lattice(M: LinearMatroid) -> SubspaceLattice:
    def build():
        levels = {k: tuple(F.indices for F in M.flats_of_rank(k)) for k in range(1, M.n + 1)}
        sets = {k: [frozenset(s) for s in levels[k]] for k in levels}
        below = {}
        for k in range(1, M.n + 1):
            for i, S in enumerate(sets[k]):
                below[(k, i)] = {
                    l: tuple(j for j, T in enumerate(sets[l]) if T <= S)
                    for l in range(1, k)
                }
        return SubspaceLattice(M.n, levels, below)
    return M._cached("lattice", build)


# ---------------------------------------------------------------------------
# brute force


def _multinomial_terms(N: int, n: int):
    """Yield (index tuple with multiplicities, distinct indices, n!/prod(c!))."""
    nf = math.factorial(n)
    for combo in itertools.combinations_with_replacement(range(N), n):
        counts = Counter(combo)
        mult = nf
        for c in counts.values():
            mult //= math.factorial(c)
        yield counts, mult


def brute_all(M: LinearMatroid, x: Sequence, *, method: str = "multiset",
              exact: bool | None = None, cap: int = BRUTE_CAP) -> list:
    """[X_1^n, ..., X_n^n] by direct enumeration.

    ``method="ordered"`` walks all N**n ordered tuples (compiled kernel,
    floats only); ``method="multiset"`` walks unordered multisets and
    weights each by its multinomial count.
    """
    x, exact = _as_weights(x, exact)
    if len(x) != M.N:
        raise ValueError(f"weight vector has length {len(x)}, expected {M.N}")
    n, N = M.n, M.N
    if method == "ordered":
        if exact:
            raise ValueError("the ordered path is floating point only; use method='multiset'")
        if N ** n > cap:
            raise CapExceeded(f"N^n = {N ** n} ordered tuples exceeds cap {cap}")
        if N > ORDERED_MAX_N:
            raise CapExceeded(f"ordered path supports N <= {ORDERED_MAX_N}")
        sums = kernels.ordered_rank_sums(np.asarray(x), rank_table(M), n)
        return [float(sums[k]) for k in range(1, n + 1)]
    if method != "multiset":
        raise ValueError(f"unknown brute-force method {method!r}")
    if math.comb(N + n - 1, n) > cap:
        raise CapExceeded(f"{math.comb(N + n - 1, n)} multisets exceeds cap {cap}")
    buckets = [[] for _ in range(n + 1)]
    for counts, mult in _multinomial_terms(N, n):
        r = M._rank_mask(_mask(counts))
        term = mult
        for i, c in counts.items():
            term = term * x[i] ** c
        buckets[r].append(term)
    return [_sum(buckets[k], exact) for k in range(1, n + 1)]


def brute_xk(M: LinearMatroid, x: Sequence, k: int, **kw):
    """X_k^n by direct enumeration (see :func:`brute_all`)."""
    if not (1 <= k <= M.n):
        raise ValueError(f"k must lie in 1..{M.n}, got {k}")
    return brute_all(M, x, **kw)[k - 1]


def rank_table(M: LinearMatroid) -> np.ndarray:
    """Rank of every index subset of size <= n, addressed by bitmask; -1 elsewhere."""
    def build():
        tab = np.full(1 << M.N, -1, dtype=np.int64)
        for size in range(0, M.n + 1):
            for S in itertools.combinations(range(M.N), size):
                m = _mask(S)
                tab[m] = M._rank_mask(m)
        return tab
    return M._cached("rank_table", build)


# ---------------------------------------------------------------------------
# recursion


@dataclass(frozen=True)
class FunctionalTable:
    """All X_k^n plus the per-subspace values X_l(P; xi)^n.

    ``local[k][i][l]`` holds X_l(P; xi)^n for entry i of level k (l = 1..k,
    index 0 unused).
    """

    n: int
    xk_pow: tuple  # X_1^n .. X_n^n
    total: object
    local: dict = field(repr=False)
    volumes: dict = field(repr=False)  # V(xi) per level entry

    def xk(self, k: int):
        return self.xk_pow[k - 1]


def _recurse(lat: SubspaceLattice, vpow: dict, zero, add_all):
    """Run the dimension-reduction recursion.

    ``vpow[k][i]`` is V(xi_i^k)^n (a number, or a coefficient vector when the
    recursion is run symbolically).  Returns (local table, [X_k^n]).
    """
    n = lat.n
    local = {}
    for k in range(1, n + 1):
        rows = []
        for i in range(lat.count(k)):
            vals = [zero] * (k + 1)
            for l in range(1, k):
                vals[l] = add_all([local[l][j][l] for j in lat.below[(k, i)][l]])
            vals[k] = vpow[k][i] - add_all(vals[1:k]) if k > 1 else vpow[k][i]
            rows.append(vals)
        local[k] = rows
    xk = [add_all([row[k] for row in local[k]]) for k in range(1, n + 1)]
    return local, xk


def recursion_table(M: LinearMatroid, x: Sequence, exact: bool | None = None) -> FunctionalTable:
    """Evaluate every X_k^n through the subspace-lattice recursion."""
    x, exact = _as_weights(x, exact)
    if len(x) != M.N:
        raise ValueError(f"weight vector has length {len(x)}, expected {M.N}")
    lat = subspace_lattice(M)
    n = M.n
    zero = Fraction(0) if exact else 0.0
    volumes = {k: [_sum((x[j] for j in S), exact) for S in lat.members(k)]
               for k in range(1, n + 1)}
    vpow = {k: [v ** n for v in volumes[k]] for k in volumes}
    local, xk = _recurse(lat, vpow, zero, lambda vs: _sum(vs, exact))
    return FunctionalTable(n, tuple(xk), _sum(x, exact), local, volumes)


def xk_recursion(M: LinearMatroid, x: Sequence, k: int, exact: bool | None = None):
    return recursion_table(M, x, exact).xk(k)


def identity_check(M: LinearMatroid, x: Sequence, exact: bool | None = None,
                   local_cap: int = 200_000) -> dict:
    """Residuals of V^n = sum_k X_k^n, globally and per lattice entry.

    The global residual uses the recursion table.  The local identity
    V(xi)^n = sum_{l <= dim xi} X_l(P; xi)^n is checked against brute-force
    enumeration restricted to the directions in xi, so it is not a
    restatement of the recursion.
    """
    xw, exact = _as_weights(x, exact)
    table = recursion_table(M, xw, exact)
    n = M.n
    resid = abs(table.total ** n - _sum(table.xk_pow, exact))
    lat = subspace_lattice(M)
    local_max = Fraction(0) if exact else 0.0
    checked = 0
    for k in range(1, n + 1):
        for i, S in enumerate(lat.members(k)):
            if math.comb(len(S) + n - 1, n) > local_cap:
                continue
            brute = _restricted_brute(M, xw, S, exact)
            rec = table.local[k][i]
            vol = table.volumes[k][i]
            for l in range(1, k + 1):
                local_max = max(local_max, abs(brute[l] - rec[l]))
            local_max = max(local_max, abs(vol ** n - _sum(brute[1:k + 1], exact)))
            checked += 1
    return {"residual": resid, "local_residual": local_max,
            "entries_checked": checked, "total_pow": table.total ** n}


def _restricted_brute(M, x, S, exact):
    """X_l(P; span S)^n for l = 0..n by multiset enumeration over S."""
    n = M.n
    buckets = [[] for _ in range(n + 1)]
    nf = math.factorial(n)
    for combo in itertools.combinations_with_replacement(S, n):
        counts = Counter(combo)
        mult = nf
        for c in counts.values():
            mult //= math.factorial(c)
        term = mult
        for i, c in counts.items():
            term = term * x[i] ** c
        buckets[M._rank_mask(_mask(counts))].append(term)
    return [_sum(b, exact) for b in buckets]


# ---------------------------------------------------------------------------
# explicit polynomials for k = 2, 3


def closed_form_xk(M: LinearMatroid, x: Sequence, k: int, exact: bool | None = None):
    """X_2^n or X_3^n from their explicit polynomial expressions."""
    x, exact = _as_weights(x, exact)
    n = M.n
    lat = subspace_lattice(M)
    mass = lambda S: _sum((x[j] for j in S), exact)
    pows = lambda S: _sum((x[j] ** n for j in S), exact)
    if k == 2:
        return _sum((mass(S) ** n - pows(S) for S in lat.members(2)), exact)
    if k == 3:
        if n < 3:
            raise ValueError("X_3 needs n >= 3")
        planes = lat.members(2)
        terms = []
        for i, S in enumerate(lat.members(3)):
            inner = _sum((mass(planes[l]) ** n - pows(planes[l])
                          for l in lat.below[(3, i)][2]), exact)
            terms.append(mass(S) ** n - inner - pows(S))
        return _sum(terms, exact)
    raise ValueError(f"closed forms exist for k in (2, 3), not {k}")


# ---------------------------------------------------------------------------
# the R^4 general-position function and the bound constants


def hypersimplex_f(x: Sequence, tol: float = 1e-9):
    """(1/256) * sum over triples i<j<k of the inclusion-exclusion quartic.

    Equals X_3^4 / 4^4 for a general-position configuration in R^4 with
    weights summing to 4.
    """
    exact = is_exact(x)
    x, _ = _as_weights(x, exact)
    s = sum(x) if exact else math.fsum(x)
    if (s != 4) if exact else abs(s - 4) > tol:
        raise ValueError(f"weights must sum to 4, got {s}")
    terms = []
    for i, j, k in itertools.combinations(range(len(x)), 3):
        a, b, c = x[i], x[j], x[k]
        terms.append((a + b + c) ** 4 - (a + b) ** 4 - (a + c) ** 4 - (b + c) ** 4
                     + a ** 4 + b ** 4 + c ** 4)
    return (sum(terms, Fraction(0)) / 256) if exact else math.fsum(terms) / 256


@dataclass(frozen=True)
class BoundEntry:
    n: int
    k: int
    vertex_value: Fraction  # X_k^n at any vertex (total n)
    ratio_bound_nth_power: Fraction  # sup (X_k / V_n)^n


def bound_table(n: int, k: int, *, general_position_r4: bool = False) -> BoundEntry:
    """Exact sharp constants for X_2 (n >= 3) and X_3 (n >= 5).

    With ``general_position_r4=True``, n = 4 and k = 3 returns the bound
    72/125 valid for configurations in general position.
    """
    if k == 2:
        if n < 3:
            raise ValueError("the X_2 bound needs n >= 3")
        vertex = math.comb(n, 2) * (2 ** n - 2)
    elif k == 3:
        if n == 4 and general_position_r4:
            return BoundEntry(4, 3, Fraction(math.comb(4, 3) * (3 ** 4 - 3 * 2 ** 4 + 3)),
                              Fraction(72, 125))
        if n < 5:
            raise ValueError("the X_3 bound needs n >= 5 (or n = 4 in general position)")
        vertex = math.comb(n, 3) * (3 ** n - 3 * 2 ** n + 3)
    else:
        raise ValueError(f"bounds are tabulated for k in (2, 3), not {k}")
    return BoundEntry(n, k, Fraction(vertex), Fraction(vertex, n ** n))


# ---------------------------------------------------------------------------
# power-sum polynomials (optimization objectives)


class PowerSumPolynomial:
    """p(x) = scale * sum_r w_r (a_r . x)^d with 0/1 rows a_r.

    Every X_k^n is of this form: the recursion is linear in the V(xi)^n.
    """

    def __init__(self, rows, weights, degree: int, scale=1, name: str = ""):
        self.rows_int = np.asarray(rows, dtype=np.int64)
        self.weights_int = [Fraction(w) for w in weights]
        self.rows = self.rows_int.astype(np.float64)
        self.scale = Fraction(scale)
        self.weights = np.array([float(w * self.scale) for w in self.weights_int])
        self.degree = int(degree)
        self.name = name

    @property
    def N(self) -> int:
        return self.rows.shape[1]

    def __call__(self, x) -> float:
        return float(self.batch(np.asarray(x, dtype=np.float64)[None, :])[0])

    def value(self, x):
        if is_exact(x):
            return self.exact_value(x)
        return self(x)

    def batch(self, points) -> np.ndarray:
        return kernels.power_sum_batch(points, self.rows, self.weights, self.degree)

    def grad(self, x) -> np.ndarray:
        s = self.rows @ np.asarray(x, dtype=np.float64)
        return self.degree * ((self.weights * s ** (self.degree - 1)) @ self.rows)

    def exact_value(self, x) -> Fraction:
        x = [Fraction(v) for v in x]
        total = Fraction(0)
        for a, w in zip(self.rows_int, self.weights_int):
            s = sum((x[j] for j in np.flatnonzero(a)), Fraction(0))
            total += w * s ** self.degree
        return total * self.scale

    def terms(self) -> list:
        """[(indices, weight)] with 0-based indices, scale folded in."""
        return [(tuple(int(j) for j in np.flatnonzero(a)), w * self.scale)
                for a, w in zip(self.rows_int, self.weights_int)]


def xk_polynomial(M: LinearMatroid, k: int) -> PowerSumPolynomial:
    """X_k^n as a power-sum polynomial over the flats, derived symbolically.

    The recursion is run with coefficient vectors in place of numbers, so the
    resulting coefficients are integers indexed by flats.
    """
    if not (1 <= k <= M.n):
        raise ValueError(f"k must lie in 1..{M.n}, got {k}")

    def build():
        lat = subspace_lattice(M)
        flats = [(lvl, i) for lvl in range(1, M.n + 1) for i in range(lat.count(lvl))]
        pos = {f: r for r, f in enumerate(flats)}
        m = len(flats)
        vpow = {lvl: [np.eye(1, m, pos[(lvl, i)], dtype=np.int64)[0]
                      for i in range(lat.count(lvl))] for lvl in range(1, M.n + 1)}
        zero = np.zeros(m, dtype=np.int64)
        add_all = lambda vs: sum(vs, zero.copy())
        _, xk = _recurse(lat, vpow, zero, add_all)
        return flats, xk
    flats, xk = M._cached("xk_symbolic", build)
    coef = xk[k - 1]
    lat = subspace_lattice(M)
    rows, weights = [], []
    for (lvl, i), c in zip(flats, coef):
        if c != 0:
            a = np.zeros(M.N, dtype=np.int64)
            a[list(lat.members(lvl)[i])] = 1
            rows.append(a)
            weights.append(int(c))
    if not rows:
        rows, weights = [np.zeros(M.N, dtype=np.int64)], [0]
    return PowerSumPolynomial(rows, weights, M.n, name=f"X{k}^{M.n}")


def hypersimplex_polynomial(N: int) -> PowerSumPolynomial:
    """The triple-sum quartic over N coordinates as a power-sum polynomial."""
    rows, weights = [], []
    for size, w in ((3, 1), (2, -(N - 2)), (1, math.comb(N - 1, 2))):
        for S in itertools.combinations(range(N), size):
            a = np.zeros(N, dtype=np.int64)
            a[list(S)] = 1
            rows.append(a)
            weights.append(w)
    return PowerSumPolynomial(rows, weights, 4, scale=Fraction(1, 256), name="f")


def square_norm_polynomial(N: int) -> PowerSumPolynomial:
    """sum x_i^2, a convex toy objective."""
    return PowerSumPolynomial(np.eye(N, dtype=np.int64), [1] * N, 2, name="sum_sq")


def objective(M: LinearMatroid, name: str) -> PowerSumPolynomial:
    """Named objective: ``x2``, ``x3``, ``xn`` or ``f``."""
    if name == "x2":
        return xk_polynomial(M, 2)
    if name == "x3":
        if M.n < 3:
            raise ValueError("x3 needs n >= 3")
        return xk_polynomial(M, 3)
    if name == "xn":
        return xk_polynomial(M, M.n)
    if name == "f":
        if M.n != 4:
            raise ValueError("objective f is defined for n = 4")
        return hypersimplex_polynomial(M.N)
    raise ValueError(f"unknown objective {name!r}")
