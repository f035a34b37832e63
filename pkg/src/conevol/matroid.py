"""Linear matroids of vector configurations.

The matroid M(u_1, ..., u_N) has ground set E = {0, ..., N-1} (0-based in
the API; reports print 1-based labels) and independent sets the index sets
whose vectors are linearly independent.  All structure is computed with
exact rational arithmetic.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import exact
from .errors import ConfigurationError, DimensionMismatch

IndexSet = tuple  # sorted tuple[int, ...]


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _indices(mask: int) -> IndexSet:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class VectorConfiguration:
    """N nonzero, pairwise unparallel rational vectors spanning Q^n.

    Vectors need not be unit length: only their spans matter.
    """

    vectors: tuple

    def __post_init__(self):
        vecs = tuple(exact.qvector(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)

    @property
    def n(self) -> int:
        return len(self.vectors[0]) if self.vectors else 0

    @property
    def N(self) -> int:
        return len(self.vectors)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "VectorConfiguration":
        return cls(tuple(tuple(r) for r in rows))

    def transformed(self, T: Sequence[Sequence]) -> "VectorConfiguration":
        """Apply a rational matrix to every vector."""
        T = [exact.qvector(r) for r in T]
        return VectorConfiguration(tuple(exact.mat_vec(T, v) for v in self.vectors))

    def permuted(self, perm: Sequence[int]) -> "VectorConfiguration":
        """Reorder vectors so that new position k holds old vector perm[k]."""
        return VectorConfiguration(tuple(self.vectors[p] for p in perm))

    def validate(self) -> None:
        if not self.vectors:
            raise ConfigurationError("configuration has no vectors")
        dims = {len(v) for v in self.vectors}
        if len(dims) != 1:
            raise DimensionMismatch(f"vectors have differing lengths {sorted(dims)}")
        if self.n < 2:
            raise ConfigurationError(f"ambient dimension must be at least 2, got {self.n}")
        for i, v in enumerate(self.vectors):
            if all(c == 0 for c in v):
                raise ConfigurationError(f"zero vector at position {i + 1}")
        for i, j in itertools.combinations(range(self.N), 2):
            if exact.rank_of([self.vectors[i], self.vectors[j]]) < 2:
                raise ConfigurationError(f"parallel pair ({i + 1},{j + 1})")
        if exact.rank_of(self.vectors) < self.n:
            raise ConfigurationError(
                f"configuration does not span Q^{self.n} "
                f"(rank {exact.rank_of(self.vectors)})"
            )


@dataclass(frozen=True)
class Flat:
    indices: IndexSet
    rank: int
    span_basis: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class ComponentPartition:
    blocks: tuple  # tuple[IndexSet, ...], sorted by smallest element

    @property
    def count(self) -> int:
        return len(self.blocks)


class LinearMatroid:
    """Rank/closure oracle plus enumerations for a vector configuration.

    The only mutable state is the rank memo.  Concurrent writers may both
    compute the same entry; values are deterministic so the race is benign,
    and the lock only guards the bulk structure caches.
    """

    def __init__(self, config: VectorConfiguration):
        self.config = config
        self.n = config.n
        self.N = config.N
        self.ground = tuple(range(self.N))
        self._rank_memo: dict[int, int] = {0: 0}
        self._lock = threading.RLock()
        self._cache: dict[str, object] = {}

    def __repr__(self):
        return f"LinearMatroid(n={self.n}, N={self.N})"

    def _check(self, S: Iterable[int]) -> IndexSet:
        S = tuple(sorted(set(S)))
        for i in S:
            if not (0 <= i < self.N):
                raise IndexError(f"index {i} outside ground set of size {self.N}")
        return S

    def _rank_mask(self, mask: int) -> int:
        r = self._rank_memo.get(mask)
        if r is None:
            r = exact.rank_of([self.config.vectors[i] for i in _indices(mask)])
            self._rank_memo[mask] = r
        return r

    def rank(self, S: Iterable[int]) -> int:
        return self._rank_mask(_mask(self._check(S)))

    def is_independent(self, S: Iterable[int]) -> bool:
        S = self._check(S)
        return self.rank(S) == len(S)

    def closure(self, S: Iterable[int]) -> Flat:
        S = self._check(S)
        m = _mask(S)
        r = self._rank_mask(m)
        members = tuple(i for i in self.ground if self._rank_mask(m | (1 << i)) == r)
        basis = exact.span_basis([self.config.vectors[i] for i in S])
        return Flat(members, r, tuple(basis))

    def _cached(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    def flats(self) -> tuple:
        """All nonempty flats (rank 1..n), ordered by rank then index tuple."""
        return self._cached("flats", self._enumerate_flats)

    def _enumerate_flats(self):
        seen: dict[IndexSet, Flat] = {}
        for size in range(1, self.n + 1):
            for S in itertools.combinations(self.ground, size):
                if self._rank_mask(_mask(S)) != size:
                    continue
                F = self.closure(S)
                if F.indices not in seen:
                    seen[F.indices] = F
        return tuple(sorted(seen.values(), key=lambda F: (F.rank, F.indices)))

    def bases(self) -> tuple:
        """All n-subsets whose vectors form a basis, in lexicographic order."""
        return self._cached(
            "bases",
            lambda: tuple(
                B for B in itertools.combinations(self.ground, self.n)
                if self._rank_mask(_mask(B)) == self.n
            ),
        )

    def circuits(self) -> tuple:
        """All minimal dependent sets, ordered by size then lexicographically."""
        return self._cached("circuits", self._enumerate_circuits)

    def _enumerate_circuits(self):
        out = []
        for size in range(2, min(self.n + 1, self.N) + 1):
            for C in itertools.combinations(self.ground, size):
                m = _mask(C)
                if self._rank_mask(m) != size - 1:
                    continue
                if all(self._rank_mask(m & ~(1 << i)) == size - 1 for i in C):
                    out.append(C)
        return tuple(out)

    def components(self) -> ComponentPartition:
        return self._cached("components", self._components)

    def _components(self):
        parent = list(self.ground)

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for C in self.circuits():
            root = find(C[0])
            for i in C[1:]:
                parent[find(i)] = root
        blocks: dict[int, list[int]] = {}
        for i in self.ground:
            blocks.setdefault(find(i), []).append(i)
        return ComponentPartition(tuple(sorted(tuple(b) for b in blocks.values())))

    def is_separator(self, S: Iterable[int]) -> bool:
        """True iff S is a union of connected components."""
        S = set(S)
        return all(set(b) <= S or not (set(b) & S) for b in self.components().blocks)

    def flats_of_rank(self, k: int) -> tuple:
        return tuple(F for F in self.flats() if F.rank == k)

    def load_structure(self, flats: Sequence[tuple], bases: Sequence[tuple]) -> None:
        """Seed the caches with previously computed flats and bases."""
        with self._lock:
            self._cache["flats"] = tuple(
                Flat(tuple(ix), int(r)) for ix, r in flats
            )
            self._cache["bases"] = tuple(tuple(B) for B in bases)


def build_matroid(config: VectorConfiguration | Sequence[Sequence]) -> LinearMatroid:
    """Validate a configuration and return its linear matroid."""
    if not isinstance(config, VectorConfiguration):
        config = VectorConfiguration.from_rows(config)
    config.validate()
    return LinearMatroid(config)


# ---------------------------------------------------------------------------
# named configurations used throughout tests and reproduction suites


def cfg_a() -> VectorConfiguration:
    """Three directions in the plane: the uniform matroid U_{2,3}."""
    return VectorConfiguration.from_rows([(1, 0), (0, 1), (1, 1)])


def cfg_c() -> VectorConfiguration:
    """Rational stand-in for the R^4 cylinder configuration.

    Three directions in the first coordinate plane and four in the second;
    the span pattern matches the hexagon x octagon normals exactly.
    """
    return VectorConfiguration.from_rows([
        (1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0),
        (0, 0, 1, 0), (0, 0, 0, 1), (0, 0, 1, 1), (0, 0, 1, -1),
    ])


def cfg_d() -> VectorConfiguration:
    """Five directions in general position in R^4 (a simplex-type pattern)."""
    return VectorConfiguration.from_rows([
        (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1),
    ])


def parallelotope(n: int) -> VectorConfiguration:
    return VectorConfiguration.from_rows(
        [tuple(int(i == j) for j in range(n)) for i in range(n)]
    )


def moment_curve(n: int, N: int) -> VectorConfiguration:
    """N points (1, t, t^2, ..., t^{n-1}), t = 0..N-1: always in general position."""
    return VectorConfiguration.from_rows(
        [tuple(t ** p for p in range(n)) for t in range(N)]
    )


def is_general_position(config: VectorConfiguration) -> bool:
    """Every n of the vectors are linearly independent."""
    return all(
        exact.rank_of([config.vectors[i] for i in S]) == config.n
        for S in itertools.combinations(range(config.N), config.n)
    )


def random_configuration(n: int, N: int, rng, *, general: bool = False,
                         low: int = -3, high: int = 3,
                         max_tries: int = 10_000) -> VectorConfiguration:
    """Random integer configuration satisfying the configuration invariants.

    ``rng`` is a :class:`numpy.random.Generator`.  Small entry ranges give
    many coincidental dependencies; ``general=True`` rejects until every
    n-subset is a basis.
    """
    for _ in range(max_tries):
        rows = rng.integers(low, high + 1, size=(N, n)).tolist()
        cfg = VectorConfiguration.from_rows(rows)
        try:
            cfg.validate()
        except ConfigurationError:
            continue
        if general and not is_general_position(cfg):
            continue
        return cfg
    raise RuntimeError(f"no valid configuration found for n={n}, N={N}")
