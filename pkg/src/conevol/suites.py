"""Desk-scale reproduction suites for the sharp bounds and worked example.

Each suite returns a plain dict with a ``passed`` flag, named boolean
``checks``, headline ``values`` and, where natural, a ``table`` of per-case
rows.  Nothing here asserts; callers (CLI, tests) decide what to do with a
failed check.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .concentration import relint_equiv, sample_relint, scc_check, vertex_measure
from .functionals import (bound_table, brute_xk, closed_form_xk, hypersimplex_f,
                          hypersimplex_polynomial, recursion_table, xk_polynomial)
from .matroid import (build_matroid, cfg_a, cfg_c, cfg_d, parallelotope,
                      random_configuration)
from .maximize import OptimizerConfig, edge_ascent, projected_gradient_max, vertex_oracle_max

CYLINDER_WEIGHTS = tuple(Fraction(1, 6) for _ in range(3)) + tuple(Fraction(1, 8) for _ in range(4))
CYLINDER_X3_REFERENCE = Fraction(353, 576)
CYLINDER_APPROX = 0.613
SIMPLEX_BOUND_R4 = Fraction(72, 125)


def _finish(name, checks, values, table=None):
    out = {"name": name, "passed": all(checks.values()), "checks": checks, "values": values}
    if table is not None:
        out["table"] = table
    return out


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def cylinder() -> dict:
    """Cylinder configuration in R^4 with cone volumes 1/6 and 1/8."""
    M = build_matroid(cfg_c())
    x = CYLINDER_WEIGHTS
    exact = recursion_table(M, x).xk(3)
    xf = [float(v) for v in x]
    rec = recursion_table(M, xf).xk(3)
    closed = closed_form_xk(M, xf, 3)
    brute = brute_xk(M, xf, 3, method="ordered")
    brute_ms = brute_xk(M, xf, 3, method="multiset")
    bound = float(SIMPLEX_BOUND_R4)
    checks = {
        "approx_0.613_within_1e-3": abs(float(exact) - CYLINDER_APPROX) <= 1e-3,
        "exact_matches_reference": exact == CYLINDER_X3_REFERENCE,
        "exact_all_paths_agree": exact == closed_form_xk(M, x, 3) == brute_xk(M, x, 3),
        "float_paths_agree_1e-12": max(_rel(rec, closed), _rel(rec, brute), _rel(rec, brute_ms)) <= 1e-12,
        "measure_satisfies_scc": scc_check(M, x).satisfied,
        "relint_equivalence": relint_equiv(M, x),
        "exceeds_simplex_bound": float(exact) > bound,
    }
    values = {
        "X3^4": float(exact), "X3^4_exact": exact, "recursion": rec, "closed_form": closed,
        "brute_ordered": brute, "brute_multiset": brute_ms,
        "simplex_bound_72/125": bound,
        "contrast": f"{float(exact):.4f} > {bound:.4f} = 72/125",
    }
    return _finish("cylinder", checks, values)


def f_max(cfg: OptimizerConfig | None = None, sizes=(5, 6, 7)) -> dict:
    """max f over the hypersimplex of sum 4, N = 5, 6, 7."""
    cfg = cfg or OptimizerConfig()
    target = float(SIMPLEX_BOUND_R4)
    checks = {
        "f(4/5 x5) = 72/125": hypersimplex_f([Fraction(4, 5)] * 5) == SIMPLEX_BOUND_R4,
        "f(0,1,1,1,1) = 9/16": hypersimplex_f([Fraction(0)] + [Fraction(1)] * 4) == Fraction(9, 16),
        "f(4/6 x6) = 5/9": hypersimplex_f([Fraction(2, 3)] * 6) == Fraction(5, 9),
    }
    table = []
    for N in sizes:
        res = projected_gradient_max(N, hypersimplex_polynomial(N), cfg)
        x = np.asarray(res.argmax)
        five = int(np.sum(np.abs(x - 0.8) <= 1e-4))
        zero = int(np.sum(np.abs(x) <= 1e-4))
        interior_ends = sum(bool(np.all(r.end > 1e-9)) for r in res.runs)
        ok_val = abs(res.value - target) <= 1e-6
        ok_shape = five == 5 and zero == N - 5
        checks[f"N={N}_value"] = ok_val
        checks[f"N={N}_argmax_shape"] = ok_shape
        if N >= 6:
            checks[f"N={N}_no_interior_local_max"] = interior_ends == 0
        table.append({"N": N, "max_f": res.value, "error": res.value - target,
                      "coords_4/5": five, "coords_0": zero, "starts": len(res.runs),
                      "interior_ends": interior_ends, "class": res.boundary_class.tag})
    return _finish("f-max", checks, {"target": target, "seed": cfg.seed}, table)


def _vertex_suite(name, k, dims, vertex_formula, cfg, configs_per_n, samples, seed, ascent_starts):
    rng = np.random.default_rng(seed)
    checks, table = {}, []
    for n in dims:
        target = vertex_formula(n)
        for c in range(configs_per_n):
            N = n + 1 + (c % 3)
            M = build_matroid(random_configuration(n, N, rng, general=True))
            obj = xk_polynomial(M, k)
            vo = vertex_oracle_max(M, obj, exact=True, classify=False)
            vertex_vals = {obj.exact_value([Fraction(int(v)) for v in row]) for row in
                           (r.end for r in vo.runs)}
            S = np.array(sample_relint(M, samples, seed=seed + c))
            vals = obj.batch(S)
            margin = float(target) - float(vals.max())
            starts = S if ascent_starts is None else S[:ascent_starts]
            at_vertex = 0
            for x0 in starts:
                r = edge_ascent(M, x0, obj, cfg, classify=False)
                xr = np.asarray(r.argmax)
                if np.all(np.minimum(np.abs(xr), np.abs(xr - 1)) <= 1e-9):
                    at_vertex += 1
            tag = f"n={n},N={N},#{c}"
            checks[f"{tag}_vertex_value"] = vo.value == target and vertex_vals == {target}
            checks[f"{tag}_relint_strictly_below"] = margin > 0
            checks[f"{tag}_ascent_ends_at_vertex"] = at_vertex == len(starts)
            table.append({"n": n, "N": N, "config": c, "vertex_value": vo.value,
                          "expected": target, "max_relint": float(vals.max()),
                          "margin": margin, "ascents": len(starts), "ascents_at_vertex": at_vertex})
    return _finish(name, checks, {"k": k, "seed": seed}, table)


def x2_vertex(cfg: OptimizerConfig | None = None, dims=(3, 4, 5), configs_per_n: int = 5,
          samples: int = 200, seed: int = 0, ascent_starts: int | None = None) -> dict:
    """X_2^n: vertex value, strict interior deficit, edge ascent to vertices."""
    return _vertex_suite("x2-vertex", 2, dims, lambda n: bound_table(n, 2).vertex_value,
                         cfg or OptimizerConfig(), configs_per_n, samples, seed, ascent_starts)


def x3_vertex(cfg: OptimizerConfig | None = None, dims=(5, 6), configs_per_n: int = 5,
          samples: int = 200, seed: int = 0, ascent_starts: int | None = None) -> dict:
    """X_3^n for n >= 5, same protocol."""
    return _vertex_suite("x3-vertex", 3, dims, lambda n: bound_table(n, 3).vertex_value,
                         cfg or OptimizerConfig(), configs_per_n, samples, seed, ascent_starts)


def xn_floor_configs(seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    named = [("cfg_a", cfg_a()), ("cfg_c", cfg_c()), ("cfg_d", cfg_d()),
             ("parallelotope3", parallelotope(3))]
    for n, N in ((3, 5), (4, 6), (3, 6)):
        named.append((f"random_n{n}_N{N}", random_configuration(n, N, rng)))
    return named


def xn_floor(samples: int = 200, seed: int = 0, tol: float = 1e-9) -> dict:
    """X_n >= (n!)^(1/n) at total n, with equality exactly at vertex measures."""
    checks, table = {}, []
    for name, config in xn_floor_configs(seed):
        M = build_matroid(config)
        n = M.n
        floor = math.factorial(n) ** (1.0 / n)
        obj = xk_polynomial(M, n)
        S = np.array(sample_relint(M, samples, seed=seed))
        xn = np.maximum(obj.batch(S), 0.0) ** (1.0 / n)
        vert = [vertex_measure(M, B) for B in M.bases()]
        vert_exact = {obj.exact_value(v) for v in vert}
        vx = np.array([float(obj.exact_value(v)) ** (1.0 / n) for v in vert])
        is_vertex = np.array([bool(np.all(np.minimum(np.abs(s), np.abs(s - 1)) <= tol)) for s in S])
        checks[f"{name}_inequality"] = bool(np.all(xn >= floor - tol))
        checks[f"{name}_vertex_equality"] = vert_exact == {math.factorial(n)}
        checks[f"{name}_strict_off_vertices"] = bool(np.all(xn[~is_vertex] > floor + tol))
        off = xn[~is_vertex]
        table.append({"config": name, "n": n, "floor": floor, "min_relint": float(xn.min()),
                      "gap": float(xn.min() - floor),
                      "gap_off_vertex": float(off.min() - floor) if off.size else None,
                      "vertex_max_dev": float(np.max(np.abs(vx - floor)))})
    return _finish("xn-floor", checks, {"samples": samples, "seed": seed}, table)


SUITES = {"cylinder": cylinder, "x2-vertex": x2_vertex, "x3-vertex": x3_vertex,
          "f-max": f_max, "xn-floor": xn_floor}


def reproduce(name: str, *, seed: int = 0, restarts: int = 32, tol: float = 1e-8) -> dict:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    cfg = OptimizerConfig(tol=tol, restarts=restarts, seed=seed)
    if name == "cylinder":
        return cylinder()
    if name == "xn-floor":
        return xn_floor(seed=seed)
    if name == "f-max":
        return f_max(cfg)
    return SUITES[name](cfg, seed=seed)
