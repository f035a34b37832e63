"""Maximizing power-sum polynomials over base polytopes.

The objectives (X_2^n, X_3^n, f) are non-concave, so the local methods here
only find local maxima.  Global statements at desk scale come from combining
them with exhaustive vertex evaluation and dense multistart.

All segment searches (line search, edge moves) use the same routine: a
uniform grid evaluated in one batched call, followed by bisection on the sign
of the directional derivative around the best grid point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .concentration import sample_relint
from .errors import CapExceeded, InfeasiblePoint
from .functionals import PowerSumPolynomial
from .matroid import LinearMatroid, build_matroid, moment_curve
from .polytope import BoundaryClass, classify_boundary, hrep, vrep

VERTEX_CAP = 10 ** 5
FEAS_TOL = 1e-9


@dataclass(frozen=True)
class OptimizerConfig:
    tol: float = 1e-8
    restarts: int = 32
    max_iters: int = 10_000
    seed: int = 0
    line_search_grid: int = 256

    def __post_init__(self):
        if self.tol <= 0 or self.restarts < 1 or self.max_iters < 1 or self.line_search_grid < 3:
            raise ValueError("optimizer settings must be positive (grid at least 3)")


@dataclass(frozen=True)
class RunRecord:
    start: np.ndarray
    start_value: float
    end: np.ndarray
    end_value: float
    iterations: int


@dataclass(frozen=True)
class OptResult:
    argmax: object  # float array, or tuple of Fractions in exact vertex mode
    value: object
    boundary_class: BoundaryClass | None
    method: str
    trajectory_len: int
    runs: tuple = field(default=(), repr=False)

    def as_dict(self) -> dict:
        exact = isinstance(self.value, Fraction)
        conv = (lambda v: str(v)) if exact else float
        return {
            "method": self.method,
            "value": conv(self.value),
            "argmax": [conv(v) for v in self.argmax],
            "boundary_class": self.boundary_class.tag if self.boundary_class else None,
            "trajectory_len": self.trajectory_len,
            "restarts": len(self.runs) or 1,
        }


# ---------------------------------------------------------------------------
# feasible regions


@dataclass(frozen=True)
class Region:
    """{x : A x <= b, x >= 0, sum x = n} with 0/1 rows A."""

    A: np.ndarray
    b: np.ndarray
    n: int

    @property
    def N(self) -> int:
        return self.A.shape[1]

    def slack(self, x) -> np.ndarray:
        return self.b - self.A @ x

    def contains(self, x, tol: float = FEAS_TOL) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return (abs(x.sum() - self.n) <= tol and bool(np.all(x >= -tol))
                and bool(np.all(self.slack(x) >= -tol)))


def matroid_region(M: LinearMatroid) -> Region:
    H = hrep(M)
    return Region(H.A.astype(np.float64), H.b.astype(np.float64), M.n)


def hypersimplex_region(N: int, n: int) -> Region:
    return Region(np.eye(N), np.ones(N), n)


# ---------------------------------------------------------------------------
# linear oracle


def greedy_basis(M: LinearMatroid, c: Sequence[float]) -> tuple:
    """Basis maximizing c . e_B; ties in c go to the lower index."""
    c = np.asarray(c, dtype=np.float64)
    if len(c) != M.N:
        raise ValueError(f"cost vector has length {len(c)}, expected {M.N}")
    order = sorted(range(M.N), key=lambda i: (-c[i], i))
    B, m = [], 0
    for i in order:
        m2 = m | (1 << i)
        if M._rank_mask(m2) == len(B) + 1:
            B.append(i)
            m = m2
            if len(B) == M.n:
                break
    return tuple(sorted(B))


def greedy_linear_max(M: LinearMatroid, c: Sequence[float]) -> np.ndarray:
    """Vertex e_B of P_M maximizing c . x (matroid greedy)."""
    v = np.zeros(M.N)
    v[list(greedy_basis(M, c))] = 1.0
    return v


# ---------------------------------------------------------------------------
# segment search


def _dphi(obj: PowerSumPolynomial, x, d, t) -> float:
    return float(obj.grad(x + t * d) @ d)


def _bisect_root(obj, x, d, lo, hi, tol=1e-12, max_steps=200) -> float:
    """Zero of the directional derivative in [lo, hi] (positive at lo, negative at hi)."""
    for _ in range(max_steps):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if _dphi(obj, x, d, mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _refine(obj, x, d, ts, vals, g) -> tuple:
    """Polish grid maximizer index g; returns (t, value)."""
    best_t, best_v = ts[g], vals[g]
    dg = _dphi(obj, x, d, ts[g])
    cands = []
    if g > 0 and dg < 0 and _dphi(obj, x, d, ts[g - 1]) > 0:
        cands.append(_bisect_root(obj, x, d, ts[g - 1], ts[g]))
    if g < len(ts) - 1 and dg > 0 and _dphi(obj, x, d, ts[g + 1]) < 0:
        cands.append(_bisect_root(obj, x, d, ts[g], ts[g + 1]))
    for t in cands:
        v = obj(x + t * d)
        if v > best_v:
            best_t, best_v = t, v
    return float(best_t), float(best_v)


def segment_max(obj: PowerSumPolynomial, x, d, t_max: float, grid: int = 256) -> tuple:
    """Approximate global max of t -> obj(x + t d) over [0, t_max]."""
    if t_max <= 0:
        return 0.0, obj(x)
    ts = np.linspace(0.0, t_max, grid)
    vals = obj.batch(x[None, :] + ts[:, None] * d[None, :])
    g = int(np.argmax(vals))
    return _refine(obj, x, d, ts, vals, g)


# ---------------------------------------------------------------------------
# edge ascent


def _pair_limits(region: Region, x) -> np.ndarray:
    """t_max[i, j]: how far x can move along e_i - e_j and stay feasible."""
    s = np.maximum(region.slack(x), 0.0)
    A = region.A > 0
    blocking = A[:, :, None] & ~A[:, None, :]  # row contains i but not j
    lim = np.where(blocking, s[:, None, None], np.inf).min(axis=0)
    lim = np.minimum(lim, np.maximum(x, 0.0)[None, :])
    np.fill_diagonal(lim, 0.0)
    return lim


def edge_step(obj: PowerSumPolynomial, region: Region, x, cfg: OptimizerConfig,
              top: int = 4) -> tuple:
    """Best move along any edge direction e_i - e_j; returns (new x, value, gain)."""
    N = region.N
    lim = _pair_limits(region, x)
    pairs = [(i, j) for i in range(N) for j in range(N) if lim[i, j] > 1e-15]
    v0 = obj(x)
    if not pairs:
        return x, v0, 0.0
    G = cfg.line_search_grid
    frac = np.linspace(0.0, 1.0, G)
    D = np.zeros((len(pairs), N))
    T = np.empty((len(pairs), G))
    for p, (i, j) in enumerate(pairs):
        D[p, i], D[p, j] = 1.0, -1.0
        T[p] = frac * lim[i, j]
    pts = x[None, None, :] + T[:, :, None] * D[:, None, :]
    vals = obj.batch(pts.reshape(-1, N)).reshape(len(pairs), G)
    best = vals.max(axis=1)
    order = np.argsort(-best, kind="stable")[:top]
    move_t, move_v, move_p = 0.0, v0, None
    for p in order:
        t, v = _refine(obj, x, D[p], T[p], vals[p], int(np.argmax(vals[p])))
        if v > move_v:
            move_t, move_v, move_p = t, v, p
    if move_p is None or move_v - v0 <= cfg.tol:
        return x, v0, 0.0
    i, j = pairs[move_p]
    x = x.copy()
    if move_t >= lim[i, j]:
        move_t = lim[i, j]
    x[i] += move_t
    x[j] -= move_t
    x[j] = max(x[j], 0.0)
    return x, obj(x), move_v - v0


def _edge_ascent_run(obj, region, x0, cfg) -> tuple:
    x = np.asarray(x0, dtype=np.float64).copy()
    it = 0
    for it in range(1, cfg.max_iters + 1):
        x, _, gain = edge_step(obj, region, x, cfg)
        if gain <= 0:
            break
    return x, obj(x), it


def edge_ascent(M: LinearMatroid, x0, objective: PowerSumPolynomial,
                cfg: OptimizerConfig = OptimizerConfig(), *, classify: bool = True) -> OptResult:
    """Move along edge directions e_i - e_j while some move improves by more than tol.

    With ``x0=None`` runs from ``cfg.restarts`` interior samples and keeps the best.
    """
    region = matroid_region(M)
    return _multistart(M, region, objective, x0, cfg, _edge_ascent_run, "edge", classify)


# ---------------------------------------------------------------------------
# Frank-Wolfe with away steps


def _fw_run(obj, region, x0, cfg, M) -> tuple:
    x = np.asarray(x0, dtype=np.float64).copy()
    atoms = {"start": x.copy()}
    lam = {"start": 1.0}
    value = obj(x)
    stall = 0
    it = 0
    for it in range(1, cfg.max_iters + 1):
        g = obj.grad(x)
        B = greedy_basis(M, g)
        s = np.zeros(M.N)
        s[list(B)] = 1.0
        fw_gap = float(g @ (s - x))
        away_key = min(atoms, key=lambda k: (float(g @ atoms[k]), str(k)))
        away_gap = float(g @ (x - atoms[away_key]))
        scale = max(1.0, abs(value))
        if max(fw_gap, away_gap) <= cfg.tol * scale:
            break
        if fw_gap >= away_gap:
            d, gmax, away = s - x, 1.0, False
        else:
            la = lam[away_key]
            d, gmax, away = x - atoms[away_key], la / (1.0 - la), True
        gamma, new_value = segment_max(obj, x, d, gmax, cfg.line_search_grid)
        if new_value - value <= cfg.tol * 1e-6 * scale:
            stall += 1
            if stall >= 20:
                break
        else:
            stall = 0
        if new_value < value:
            gamma, new_value = 0.0, value
        if gamma > 0:
            if away:
                for k in lam:
                    lam[k] *= 1.0 + gamma
                lam[away_key] -= gamma
                if gamma >= gmax or lam[away_key] <= 1e-15:
                    del lam[away_key], atoms[away_key]
            else:
                for k in lam:
                    lam[k] *= 1.0 - gamma
                if gamma >= 1.0:
                    lam, atoms = {}, {}
                lam[B] = lam.get(B, 0.0) + gamma
                atoms[B] = s
            x = x + gamma * d
            value = new_value
    return x, obj(x), it


def frank_wolfe_max(M: LinearMatroid, x0, objective: PowerSumPolynomial,
                    cfg: OptimizerConfig = OptimizerConfig(), *, classify: bool = True) -> OptResult:
    """Away-step Frank-Wolfe with the greedy oracle and grid line search.

    ``x0=None`` runs from ``cfg.restarts`` interior samples and keeps the best.
    """
    region = matroid_region(M)
    run = lambda obj, reg, x, c: _fw_run(obj, reg, x, c, M)
    return _multistart(M, region, objective, x0, cfg, run, "fw", classify)


# ---------------------------------------------------------------------------
# projected gradient on the hypersimplex


def project_box_simplex(y: Sequence[float], n: float) -> np.ndarray:
    """Euclidean projection onto {0 <= x <= 1, sum x = n}.

    x_i = clamp(y_i - theta, 0, 1) with theta found by bisection, then solved
    exactly on the free coordinates.
    """
    y = np.asarray(y, dtype=np.float64)
    N = len(y)
    if not (0 <= n <= N):
        raise ValueError(f"target sum {n} outside [0, {N}]")
    total = lambda th: np.clip(y - th, 0.0, 1.0).sum()
    lo, hi = float(y.min()) - 1.0, float(y.max())
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if total(mid) > n:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(mid)):
            break
    theta = 0.5 * (lo + hi)
    x = np.clip(y - theta, 0.0, 1.0)
    free = (y - theta > 0.0) & (y - theta < 1.0)
    if free.any():
        ones = np.count_nonzero(y - theta >= 1.0)
        th = (y[free].sum() - (n - ones)) / free.sum()
        x2 = np.clip(y - th, 0.0, 1.0)
        if abs(x2.sum() - n) <= abs(x.sum() - n):
            x = x2
    return x


def _face_direction_step(obj, region, x, cfg, cap: int = 4096) -> tuple:
    """Best move toward the barycenter of a coordinate face of the hypersimplex.

    Targets are the points with n/k on a k-subset (k = n..N-1) and 0 elsewhere.
    This catches flat saddles such as the barycenter, where every edge
    direction is level to high order but a face direction still climbs.
    """
    import itertools
    import math
    N, n = region.N, region.n
    v0 = obj(x)
    if sum(math.comb(N, k) for k in range(n, N)) > cap:
        return x, v0, 0.0
    ts = np.linspace(0.0, 1.0, cfg.line_search_grid)
    best = (0.0, v0, None)
    for k in range(n, N):
        for S in itertools.combinations(range(N), k):
            d = -x.copy()
            d[list(S)] += n / k
            vals = obj.batch(x[None, :] + ts[:, None] * d[None, :])
            g = int(np.argmax(vals))
            if vals[g] > best[1]:
                t, v = _refine(obj, x, d, ts, vals, g)
                best = (t, v, d)
    t, v, d = best
    if d is None or v - v0 <= cfg.tol:
        return x, v0, 0.0
    xn = project_box_simplex(x + t * d, n)
    return xn, obj(xn), obj(xn) - v0


def _pg_run(obj, region, x0, cfg, armijo=1e-4) -> tuple:
    x = project_box_simplex(x0, region.n)
    value = obj(x)
    eta = 1.0
    it = 0
    for it in range(1, cfg.max_iters + 1):
        g = obj.grad(x)
        moved = False
        while eta > 1e-14:
            xn = project_box_simplex(x + eta * g, region.n)
            vn = obj(xn)
            if vn >= value + armijo * float(g @ (xn - x)) and vn >= value:
                moved = True
                break
            eta *= 0.5
        step = float(np.linalg.norm(xn - x)) if moved else 0.0
        if moved:
            x, value = xn, vn
            eta = min(eta * 2.0, 1e3)
        if step <= 1e-13:
            # stationary for the projected map; escape saddles along edges
            xe, ve, gain = edge_step(obj, region, x, cfg)
            if gain <= 0:
                xe, ve, gain = _face_direction_step(obj, region, x, cfg)
            if gain <= 0:
                break
            x, value, eta = xe, ve, 1.0
    return x, obj(x), it


def projected_gradient_max(N: int, objective: PowerSumPolynomial,
                           cfg: OptimizerConfig = OptimizerConfig(), *, n: int = 4,
                           x0=None, M: LinearMatroid | None = None,
                           classify: bool = True) -> OptResult:
    """Multistart projected gradient ascent over the hypersimplex of sum n.

    Starts are Dirichlet samples and random vertices.  Stationary points are
    probed along every edge direction and then toward every coordinate face
    barycenter; an improving move restarts the ascent, so saddles are escaped.  ``M`` (default: a moment-curve
    configuration) is used only for boundary classification.
    """
    region = hypersimplex_region(N, n)
    if M is None and classify:
        M = build_matroid(moment_curve(n, N))
    if x0 is not None:
        starts = [np.asarray(x0, dtype=np.float64)]
    else:
        rng = np.random.default_rng(cfg.seed)
        n_vert = max(1, cfg.restarts // 4)
        starts = []
        for r in range(cfg.restarts):
            if r < cfg.restarts - n_vert:
                starts.append(project_box_simplex(n * rng.dirichlet(np.ones(N)), n))
            else:
                v = np.zeros(N)
                v[rng.choice(N, size=n, replace=False)] = 1.0
                starts.append(v)
    return _collect(M, region, objective, starts, cfg, _pg_run, "pg", classify)


# ---------------------------------------------------------------------------
# exhaustive vertex scan


def vertex_oracle_max(M: LinearMatroid, objective: PowerSumPolynomial, *,
                      exact: bool = False, cap: int = VERTEX_CAP,
                      classify: bool = True) -> OptResult:
    """Objective at every vertex; the first maximal vertex wins ties.

    ``exact=True`` evaluates each vertex in rational arithmetic.
    """
    import math
    if math.comb(M.N, M.n) > cap and len(M.bases()) > cap:
        raise CapExceeded(f"more than {cap} vertices")
    V = vrep(M)
    if exact:
        vals = [objective.exact_value([Fraction(int(c)) for c in row]) for row in V.vertices]
        best = max(range(len(vals)), key=lambda r: (vals[r], -r))
        argmax = tuple(Fraction(int(c)) for c in V.vertices[best])
        value = vals[best]
    else:
        vals = objective.batch(V.vertices.astype(np.float64))
        best = int(np.argmax(vals))
        argmax = V.vertices[best].astype(np.float64)
        value = float(vals[best])
    bc = classify_boundary(M, argmax) if classify else None
    runs = tuple(RunRecord(V.vertices[r].astype(np.float64), float(vals[r]),
                           V.vertices[r].astype(np.float64), float(vals[r]), 0)
                 for r in range(len(V)))
    return OptResult(argmax, value, bc, "vertex", len(V), runs)


# ---------------------------------------------------------------------------
# multistart plumbing


def _multistart(M, region, obj, x0, cfg, run: Callable, method: str, classify: bool) -> OptResult:
    if x0 is not None:
        x0 = np.asarray([float(v) for v in x0])
        if not region.contains(x0):
            raise InfeasiblePoint("start point lies outside the base polytope")
        starts = [x0]
    else:
        starts = sample_relint(M, cfg.restarts, cfg.seed)
    return _collect(M, region, obj, starts, cfg, run, method, classify)


def _collect(M, region, obj, starts, cfg, run, method, classify) -> OptResult:
    runs = []
    for x0 in starts:
        x, v, it = run(obj, region, np.asarray(x0, dtype=np.float64), cfg)
        runs.append(RunRecord(np.asarray(x0, dtype=np.float64), obj(x0), x, v, it))
    best = max(range(len(runs)), key=lambda r: (runs[r].end_value, -r))
    rb = runs[best]
    bc = classify_boundary(M, rb.end, tol=1e-7) if classify and M is not None else None
    return OptResult(rb.end, rb.end_value, bc, method, sum(r.iterations for r in runs), tuple(runs))


def optimize(M: LinearMatroid, objective: PowerSumPolynomial, method: str,
             cfg: OptimizerConfig = OptimizerConfig(), x0=None) -> OptResult:
    """Dispatch by method name: fw, pg, edge or vertex."""
    if method == "fw":
        return frank_wolfe_max(M, x0, objective, cfg)
    if method == "edge":
        return edge_ascent(M, x0, objective, cfg)
    if method == "vertex":
        return vertex_oracle_max(M, objective)
    if method == "pg":
        from .matroid import is_general_position
        if not is_general_position(M.config):
            raise ValueError("projected gradient needs a general-position configuration "
                             "(the polytope must be the hypersimplex)")
        return projected_gradient_max(M.N, objective, cfg, n=M.n, x0=x0, M=M)
    raise ValueError(f"unknown method {method!r}")
