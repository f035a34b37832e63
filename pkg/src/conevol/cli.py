"""Command-line entry point: ``conevol <command> [options]``.

Exit codes: 0 when every check passed, 1 for invalid input or usage, 2 when
an internal cross-check or a claimed reproduction failed.
"""
from __future__ import annotations

import argparse
import sys

from . import cache
from .concentration import normalized, relint_equiv, scc_check
from .errors import CapExceeded, ConevolError, InconsistencyError
from .functionals import (BRUTE_CAP, bound_table, brute_all, closed_form_xk, identity_check,
                          objective, recursion_table, subspace_lattice)
from .io import FORMATS, emit, make_report, parse_input
from .matroid import build_matroid, is_general_position
from .maximize import OptimizerConfig, optimize
from .polytope import EDGE_CAP, classify_boundary, contains, dimension, edges_smallcase, hrep, vrep
from .suites import SUITES, reproduce

COMMANDS = ("analyze", "polytope", "scc", "eval", "identity", "optimize", "reproduce")


class UsageError(ConevolError, ValueError):
    pass


def _one(S):
    return [i + 1 for i in S]


def summary(M) -> dict:
    return {
        "n": M.n, "N": M.N,
        "components": M.components().count,
        "dimension": dimension(M),
        "flats": len(M.flats()), "bases": len(M.bases()), "circuits": len(M.circuits()),
        "general_position": is_general_position(M.config),
    }


def _load(args):
    if not args.input:
        raise UsageError(f"'{args.command}' needs --input FILE")
    doc = parse_input(args.input)
    M = build_matroid(doc.config)
    cache.attach(M)
    return doc, M


def _weights(doc, exact: bool):
    if doc.weights is None:
        raise UsageError("this command needs 'weights' in the input document")
    return tuple(doc.weights) if exact else tuple(float(w) for w in doc.weights)


def cmd_analyze(args):
    _, M = _load(args)
    by_rank = {}
    for F in M.flats():
        by_rank.setdefault(str(F.rank), []).append(_one(F.indices))
    payload = {
        "flats_by_rank": by_rank,
        "bases": [_one(B) for B in M.bases()],
        "circuits": [_one(C) for C in M.circuits()],
        "components": [_one(b) for b in M.components().blocks],
    }
    return make_report("analyze", payload, summary=summary(M))


def cmd_polytope(args):
    doc, M = _load(args)
    V, H = vrep(M), hrep(M)
    payload = {
        "dimension": dimension(M),
        "components": M.components().count,
        "vertices": V.vertices.tolist(),
        "inequalities": [{"flat": _one(F.indices), "rank": F.rank} for F in H.flats],
        "equality": {"sum": M.n},
    }
    checks = {"dimension_cross_check": True}
    if len(V) <= EDGE_CAP:
        edges = edges_smallcase(M)
        payload["edges"] = [[_one(V.bases[a]), _one(V.bases[b])] for a, b in edges]
        checks["edge_directions_are_e_i_minus_e_j"] = True
    else:
        payload["edges"] = None
    if doc.weights is not None:
        # cone-volume vectors are scale free: classify the point with total n
        x = normalized(_weights(doc, args.exact), M.n)
        bc = classify_boundary(M, x if args.exact else x.tolist())
        payload["point_class"] = {"tag": bc.tag, "active_flats": [_one(F) for F in bc.active_flats]}
    return make_report("polytope", payload, summary=summary(M), checks=checks)


def cmd_scc(args):
    doc, M = _load(args)
    x = _weights(doc, args.exact)
    rep = scc_check(M, x, tol=args.tol)
    equiv = relint_equiv(M, x, tol=args.tol)
    payload = {"scc": rep.as_dict(), "relint_equivalent": equiv,
               "zero_weights": [i + 1 for i, w in enumerate(x) if w == 0]}
    return make_report("scc", payload, summary=summary(M), checks={"relint_matches_scc": True})


def cmd_eval(args):
    doc, M = _load(args)
    x = _weights(doc, args.exact)
    n = M.n
    ks = [args.k] if args.k else list(range(1, n + 1))
    for k in ks:
        if not (1 <= k <= n):
            raise UsageError(f"--k must lie in 1..{n}")
    method = args.method or "recursion"
    if method == "closed":
        ks = [k for k in ks if k in (2, 3)] if not args.k else ks
        if any(k not in (2, 3) for k in ks) or (n < 3 and 3 in ks):
            raise UsageError("closed forms exist for k = 2 and k = 3 only")
        values = {k: closed_form_xk(M, x, k) for k in ks}
    elif method == "brute":
        ordered = not args.exact and M.N ** n <= BRUTE_CAP
        allk = brute_all(M, x, method="ordered" if ordered else "multiset")
        values = {k: allk[k - 1] for k in ks}
    elif method == "recursion":
        table = recursion_table(M, x)
        values = {k: table.xk(k) for k in ks}
    else:
        raise UsageError(f"unknown --method {method!r} for eval (brute, recursion, closed)")
    total = sum(x)
    rows = []
    for k, v in values.items():
        root = float(v) ** (1.0 / n) if v >= 0 else float("nan")
        row = {"k": k, "Xk^n": v, "Xk": root,
               "ratio_Xk/V": root / float(total) if total else float("nan")}
        rows.append(row)
    payload = {"method": method, "exact": bool(args.exact), "total": total, "table": rows}
    if method == "recursion":
        payload["subspace_ratios"] = _subspace_ratios(M, table, ks)
    return make_report("eval", payload, summary=summary(M))


def _subspace_ratios(M, table, ks):
    """X_k(P; xi) / V(xi) per k-dimensional lattice entry (exploratory, no bound asserted)."""
    lat = subspace_lattice(M)
    out = []
    for k in ks:
        for i, S in enumerate(lat.members(k)):
            v = float(table.volumes[k][i])
            xk = max(float(table.local[k][i][k]), 0.0) ** (1.0 / M.n)
            out.append({"k": k, "members": _one(S), "ratio": xk / v if v > 0 else None})
    return out


def cmd_identity(args):
    doc, M = _load(args)
    x = _weights(doc, args.exact)
    res = identity_check(M, x)
    scale = res["total_pow"]
    if args.exact:
        ok = res["residual"] == 0 and res["local_residual"] == 0
    else:
        ok = res["residual"] <= 1e-9 * scale and res["local_residual"] <= 1e-9 * scale
    payload = {"residual": res["residual"], "local_residual": res["local_residual"],
               "entries_checked": res["entries_checked"], "total^n": scale}
    return make_report("identity", payload, summary=summary(M), passed=ok,
                       checks={"identity_within_tolerance": ok})


def cmd_optimize(args):
    _, M = _load(args)
    name = args.objective or "x2"
    obj = objective(M, name)
    cfg = OptimizerConfig(tol=args.tol, restarts=args.restarts, seed=args.seed)
    res = optimize(M, obj, args.method or "fw", cfg)
    payload = res.as_dict()
    payload["objective"] = name
    checks = {"argmax_feasible": contains(hrep(M), [float(v) for v in res.argmax], 1e-7)}
    bound = _vertex_bound(M, name)
    if bound is not None:
        payload["vertex_value"] = bound
        checks["value_at_most_vertex_value"] = float(res.value) <= float(bound) * (1 + 1e-9)
    return make_report("optimize", payload, summary=summary(M), seed=args.seed,
                       passed=all(checks.values()), checks=checks)


def _vertex_bound(M, name):
    if name == "x2" and M.n >= 3:
        return bound_table(M.n, 2).vertex_value
    if name == "x3" and M.n >= 5:
        return bound_table(M.n, 3).vertex_value
    return None


def cmd_reproduce(args):
    res = reproduce(args.suite, seed=args.seed, restarts=args.restarts, tol=args.tol)
    payload = {"values": res["values"]}
    if "table" in res:
        payload["table"] = res["table"]
    return make_report("reproduce " + args.suite, payload, passed=res["passed"],
                       checks=res["checks"], seed=args.seed)


HANDLERS = {
    "analyze": cmd_analyze, "polytope": cmd_polytope, "scc": cmd_scc, "eval": cmd_eval,
    "identity": cmd_identity, "optimize": cmd_optimize, "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="conevol",
        description="Linear matroid base polytopes and volume decomposition functionals.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON input document")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--exact", action="store_true", help="rational arithmetic throughout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=32)
    common.add_argument("--tol", type=float, default=None)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "eval":
            sp.add_argument("--k", type=int)
            sp.add_argument("--method", choices=("brute", "recursion", "closed"))
        if name == "optimize":
            sp.add_argument("--objective", choices=("x2", "x3", "xn", "f"))
            sp.add_argument("--method", choices=("fw", "pg", "edge", "vertex"))
        if name == "reproduce":
            sp.add_argument("suite", choices=sorted(SUITES))
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is None:
        args.tol = 1e-8 if args.command in ("optimize", "reproduce") else 1e-9
    try:
        report = HANDLERS[args.command](args)
        data = emit(report, args.format)
    except InconsistencyError as exc:
        print(f"conevol: internal cross-check failed: {exc}", file=sys.stderr)
        return 2
    except (ConevolError, ValueError, CapExceeded) as exc:
        print(f"conevol: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return 0 if report.get("passed", True) else 2


if __name__ == "__main__":
    sys.exit(main())
