"""Property-based checks of the algebraic identities and invariances."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from conevol.concentration import relint_equiv, sample_relint, scc_check
from conevol.functionals import brute_all, recursion_table
from conevol.matroid import VectorConfiguration, build_matroid, random_configuration
from conevol.errors import ConfigurationError
from conevol.polytope import contains, dimension, hrep, in_relint

small_configs = st.tuples(st.integers(2, 4), st.integers(0, 3), st.integers(0, 10 ** 6))


def make(params, general=False):
    n, extra, seed = params
    rng = np.random.default_rng(seed)
    return random_configuration(n, n + extra, rng, general=general), rng


rationals = st.fractions(min_value=0, max_value=5, max_denominator=12)


@given(small_configs, st.data())
def test_identity_exact(params, data):
    cfg, _ = make(params)
    M = build_matroid(cfg)
    x = data.draw(st.lists(rationals, min_size=M.N, max_size=M.N))
    t = recursion_table(M, x)
    assert sum(t.xk_pow) == sum(x, Fraction(0)) ** M.n
    assert all(v >= 0 for v in t.xk_pow)
    assert list(t.xk_pow) == brute_all(M, x)


@given(small_configs, st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_homogeneity(params, lam):
    cfg, rng = make(params)
    M = build_matroid(cfg)
    x = [Fraction(int(v), 7) for v in rng.integers(0, 20, size=M.N)]
    a = recursion_table(M, x).xk_pow
    b = recursion_table(M, [lam * v for v in x]).xk_pow
    assert all(bb == lam ** M.n * aa for aa, bb in zip(a, b))


@given(small_configs)
def test_gl_invariance_of_functionals(params):
    cfg, rng = make(params)
    n = cfg.n
    while True:
        T = rng.integers(-2, 3, size=(n, n)).tolist()
        try:
            cfgT = cfg.transformed(T)
            cfgT.validate()
            break
        except ConfigurationError:
            continue
    x = [Fraction(int(v), 5) for v in rng.integers(0, 10, size=cfg.N)]
    assert recursion_table(build_matroid(cfg), x).xk_pow == recursion_table(build_matroid(cfgT), x).xk_pow


@given(small_configs)
def test_permutation_equivariance(params):
    cfg, rng = make(params)
    perm = list(rng.permutation(cfg.N))
    x = [Fraction(int(v), 3) for v in rng.integers(0, 10, size=cfg.N)]
    xp = [x[p] for p in perm]
    a = recursion_table(build_matroid(cfg), x).xk_pow
    b = recursion_table(build_matroid(cfg.permuted(perm)), xp).xk_pow
    assert a == b


@given(small_configs)
def test_dimension_cross_check(params):
    cfg, _ = make(params)
    M = build_matroid(cfg)
    assert dimension(M) == M.N - M.components().count


@given(small_configs, st.integers(0, 1000))
def test_relint_samples_satisfy_scc(params, seed):
    cfg, _ = make(params)
    M = build_matroid(cfg)
    for x in sample_relint(M, 5, seed=seed):
        assert contains(hrep(M), x) and in_relint(M, x)
        assert scc_check(M, x).satisfied
        assert relint_equiv(M, x)


@given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_validate_or_reject(entries):
    cfg = VectorConfiguration.from_rows([entries[0:2], entries[2:4], entries[4:6]])
    try:
        cfg.validate()
    except ConfigurationError:
        return
    assert build_matroid(cfg).rank(range(3)) == 2
