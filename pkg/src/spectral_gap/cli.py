"""Command-line interface: bound reports, model solves, proof-replay
certificates, and parameter sweeps to CSV.

Exit codes: 0 success, 2 usage/validation error, 3 solver failure,
4 certificate failure.  All data output is deterministic JSON/CSV
(warnings go in a structured array, never prose on stdout).
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import bounds as bounds_mod
from .errors import (
    BracketFailure,
    CertificateFailure,
    DomainError,
    InvalidDiameter,
    NoConvergence,
    SpectralGapError,
)
from .model import KahlerParams, RiemannParams, kroger_problem, li_wang_problem

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_CERTIFICATE = 4

SWEEP_PARAMS = ("m", "kappa1", "kappa2", "D")
SWEEP_OUTPUTS = ("bounds", "model_mu", "certificate_pass")


def _fail(msg: str, code: int = EXIT_USAGE) -> int:
    print(msg, file=sys.stderr)
    return code


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _solver_config(args):
    from .eigensolver import Backend, SolverConfig

    kwargs = {}
    if getattr(args, "mesh", None) is not None:
        kwargs["mesh_points"] = args.mesh
    if getattr(args, "tol", None) is not None:
        kwargs["rel_tol"] = args.tol
    backend = getattr(args, "backend", None)
    if backend is not None:
        kwargs["backend"] = Backend(backend)
    return SolverConfig(**kwargs)


def _kahler_params(args) -> KahlerParams:
    if args.m < 1:
        raise DomainError("m must be >= 1")
    return KahlerParams(args.m, args.kappa1, args.kappa2)


def _report_json(p: KahlerParams, D: float, report) -> dict:
    b = {"zhong_yang": report.zhong_yang}
    if report.lichnerowicz is not None:
        b["lichnerowicz"] = report.lichnerowicz
    if report.kahler_lichnerowicz is not None:
        b["kahler_lichnerowicz"] = report.kahler_lichnerowicz
    if report.shi_zhang_sup is not None:
        b["shi_zhang_sup"] = report.shi_zhang_sup
    b["main"] = {
        "s_star": report.main_s_star,
        "sup": report.main_sup,
        "attained": report.main_attained,
    }
    out = {
        "params": {
            "m": p.m,
            "kappa1": p.kappa1,
            "kappa2": p.kappa2,
            "diameter": D,
        },
        "bounds": b,
    }
    if report.model_mu is not None:
        out["model"] = {
            "mu": report.model_mu,
            "est_error": report.model_est_error,
            "backend_delta": report.model_backend_delta,
        }
    out["warnings"] = list(report.warnings)
    return out


def cmd_bound(args) -> int:
    try:
        p = _kahler_params(args)
        riem = None
        if args.n is not None or args.K is not None:
            if args.n is None or args.K is None:
                return _fail("--n and --K must be given together")
            riem = RiemannParams(args.n, args.K)
        cfg = _solver_config(args) if args.with_model else None
        report = bounds_mod.bound_report(
            p, args.diameter, with_model=args.with_model, cfg=cfg, riemannian=riem
        )
    except (DomainError, InvalidDiameter) as exc:
        return _fail(str(exc))
    except (NoConvergence, BracketFailure) as exc:
        return _fail(str(exc), EXIT_SOLVER)
    _emit(_report_json(p, args.diameter, report))
    return EXIT_OK


def cmd_solve(args) -> int:
    from .eigensolver import solve_neumann_first

    try:
        if args.riemannian:
            if args.n is None or args.K is None:
                return _fail("--riemannian requires --n and --K")
            problem = kroger_problem(RiemannParams(args.n, args.K), args.diameter)
            params = {"n": args.n, "K": args.K, "diameter": args.diameter}
        else:
            p = _kahler_params(args)
            problem = li_wang_problem(p, args.diameter)
            params = {
                "m": p.m,
                "kappa1": p.kappa1,
                "kappa2": p.kappa2,
                "diameter": args.diameter,
            }
        cfg = _solver_config(args)
    except (DomainError, InvalidDiameter) as exc:
        return _fail(str(exc))
    warnings = []
    if problem.near_singular:
        warnings.append("diameter is at the model admissibility edge")
        from .eigensolver import Backend

        if cfg.backend is Backend.BOTH:
            warnings.append(
                "shooting cross-check skipped near the singular limit"
            )
    try:
        sol = solve_neumann_first(problem, cfg)
    except (NoConvergence, BracketFailure) as exc:
        return _fail(str(exc), EXIT_SOLVER)
    _emit(
        {
            "params": params,
            "mu": sol.mu,
            "est_error": sol.est_error,
            "residual": sol.residual,
            "backend": sol.backend_used.value,
            "backend_delta": sol.backend_delta,
            "mesh_points": int(sol.nodes.size),
            "warnings": warnings,
        }
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import QuadratureRule, replay_proof

    try:
        p = _kahler_params(args)
        exponents = args.a or [2.0]
        for a in exponents:
            if not a > 1.0:
                return _fail("a must exceed 1")
        rule = QuadratureRule(panels=args.panels) if args.panels else None
        cfg = None
        if args.mesh is not None or args.tol is not None:
            from .eigensolver import Backend, SolverConfig

            cfg = SolverConfig(
                mesh_points=args.mesh if args.mesh is not None else 2049,
                rel_tol=args.tol if args.tol is not None else 1e-9,
                max_refinements=8,
                backend=Backend.FINITE_DIFFERENCE,
            )
        certs = [
            replay_proof(p, args.diameter, a, cfg=cfg, rule=rule) for a in exponents
        ]
    except (DomainError, InvalidDiameter) as exc:
        return _fail(str(exc))
    except (NoConvergence, BracketFailure) as exc:
        return _fail(str(exc), EXIT_SOLVER)
    payload = {
        "params": {
            "m": p.m,
            "kappa1": p.kappa1,
            "kappa2": p.kappa2,
            "diameter": args.diameter,
        },
        "certificates": [
            {
                "a": c.a,
                "s": c.s,
                "mu": c.mu,
                "pass": c.passed,
                "steps": [
                    {
                        "name": st.name,
                        "kind": st.kind,
                        "lhs": st.lhs,
                        "rhs": st.rhs,
                        "slack": st.slack,
                        "tolerance": st.tolerance,
                        "pass": st.passed,
                    }
                    for st in c.steps
                ],
            }
            for c in certs
        ],
        "pass": all(c.passed for c in certs),
    }
    _emit(payload)
    if not payload["pass"]:
        for c in certs:
            bad = c.first_failure
            if bad is not None:
                print(
                    f"certificate a={c.a}: first failing step {bad.name!r}",
                    file=sys.stderr,
                )
                break
        return EXIT_CERTIFICATE
    return EXIT_OK


# -- sweep -------------------------------------------------------------------

def _axis_values(axis: dict) -> list[float]:
    if "values" in axis:
        return [float(v) for v in axis["values"]]
    if "range" in axis:
        start, stop, count = axis["range"]
        count = int(count)
        if count < 1 or start > stop:
            raise DomainError("range needs count >= 1 and start <= stop")
        if count == 1:
            return [float(start)]
        step = (stop - start) / (count - 1)
        return [float(start + i * step) for i in range(count)]
    raise DomainError("axis needs either 'values' or 'range'")


def _parse_sweep_config(cfg: dict):
    axes = cfg.get("axes", [])
    fixed = dict(cfg.get("fixed", {}))
    assigned = [ax["param"] for ax in axes] + list(fixed)
    for name in SWEEP_PARAMS:
        if assigned.count(name) != 1:
            raise DomainError(
                f"parameter {name!r} must be assigned exactly once (axis or fixed)"
            )
    for name in assigned:
        if name not in SWEEP_PARAMS:
            raise DomainError(f"unknown sweep parameter {name!r}")
    outputs = cfg.get("outputs", ["bounds"])
    for out in outputs:
        if out not in SWEEP_OUTPUTS:
            raise DomainError(f"unknown sweep output {out!r}")
    axis_values = [(ax["param"], _axis_values(ax)) for ax in axes]
    return axis_values, fixed, outputs, cfg.get("solver", {})


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def _sweep_row(point: dict, outputs, cfg):
    row: dict = {k: point[k] for k in SWEEP_PARAMS}
    row["admissible"] = True
    row["error"] = None
    try:
        m = int(point["m"])
        if m != point["m"]:
            raise DomainError("m must be an integer")
        p = KahlerParams(m, float(point["kappa1"]), float(point["kappa2"]))
        D = float(point["D"])
        if "bounds" in outputs:
            sup = bounds_mod.main_bound_sup(p, D)
            row["main_sup"] = sup.value
            row["main_s_star"] = sup.s_star
            row["main_attained"] = sup.attained
            row["zhong_yang"] = bounds_mod.zhong_yang_bound(D)
        if "model_mu" in outputs:
            from .eigensolver import solve_neumann_first

            sol = solve_neumann_first(li_wang_problem(p, D), cfg)
            row["model_mu"] = sol.mu
            row["model_est_error"] = sol.est_error
        if "certificate_pass" in outputs:
            from .verify import replay_proof

            row["certificate_pass"] = replay_proof(p, D, 2.0).passed
    except InvalidDiameter as exc:
        row["admissible"] = False
        row["error"] = type(exc).__name__
    except SpectralGapError as exc:
        row["error"] = type(exc).__name__
    return row


def _sweep_columns(outputs) -> list[str]:
    cols = list(SWEEP_PARAMS) + ["admissible"]
    if "bounds" in outputs:
        cols += ["main_sup", "main_s_star", "main_attained", "zhong_yang"]
    if "model_mu" in outputs:
        cols += ["model_mu", "model_est_error"]
    if "certificate_pass" in outputs:
        cols += ["certificate_pass"]
    return cols + ["error"]


def run_sweep(config: dict, out_path: str, meta: bool = False) -> None:
    """Run a sweep config and write the CSV; grid order is lexicographic
    over the axes in declaration order."""
    from .eigensolver import Backend, SolverConfig

    axis_values, fixed, outputs, solver = _parse_sweep_config(config)
    solver_kwargs = dict(solver)
    if "backend" in solver_kwargs:
        solver_kwargs["backend"] = Backend(solver_kwargs["backend"])
    cfg = SolverConfig(**solver_kwargs)
    names = [name for name, _ in axis_values]
    grids = [vals for _, vals in axis_values]
    points = [
        {**fixed, **dict(zip(names, combo))}
        for combo in itertools.product(*grids)
    ] or [dict(fixed)]
    env_cap = os.environ.get("SPECTRAL_GAP_THREADS")
    workers = max(1, min(len(points), int(env_cap) if env_cap else (os.cpu_count() or 1)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(lambda pt: _sweep_row(pt, outputs, cfg), points))
    else:
        rows = [_sweep_row(pt, outputs, cfg) for pt in points]
    cols = _sweep_columns(outputs)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_fmt(row.get(c)) for c in cols])
    if meta:
        import platform
        import time

        with open(out_path + ".meta.json", "w") as fh:
            json.dump(
                {"generated_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
                 "platform": platform.platform()},
                fh,
                indent=2,
            )


def cmd_sweep(args) -> int:
    try:
        with open(args.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(f"cannot read sweep config: {exc}")
    try:
        run_sweep(config, args.out, meta=args.meta)
    except (DomainError, TypeError, KeyError, ValueError) as exc:
        return _fail(f"invalid sweep config: {exc}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def _add_kahler_flags(sp, required=True):
    sp.add_argument("--m", type=int, required=required, help="complex dimension (>= 1)")
    sp.add_argument("--kappa1", type=float, required=required,
                    help="holomorphic sectional curvature normalization")
    sp.add_argument("--kappa2", type=float, required=required,
                    help="orthogonal Ricci curvature normalization")
    sp.add_argument("--diameter", type=float, required=True, help="diameter D > 0")


def _add_solver_flags(sp):
    sp.add_argument("--mesh", type=int, help="mesh points (default 1025)")
    sp.add_argument("--tol", type=float, help="relative eigenvalue tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spectral-gap",
        description="Lower bounds for the first nonzero Laplacian eigenvalue "
                    "via one-dimensional comparison problems",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="evaluate the closed-form bounds")
    _add_kahler_flags(b)
    b.add_argument("--with-model", action="store_true",
                   help="also solve the model problem numerically")
    b.add_argument("--n", type=int, help="real dimension for Riemannian comparison bounds")
    b.add_argument("--K", type=float, help="Ricci normalization for Riemannian comparison bounds")
    _add_solver_flags(b)
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("solve", help="solve the one-dimensional model problem")
    s.add_argument("--m", type=int, help="complex dimension (>= 1)")
    s.add_argument("--kappa1", type=float)
    s.add_argument("--kappa2", type=float)
    s.add_argument("--diameter", type=float, required=True)
    s.add_argument("--riemannian", action="store_true",
                   help="solve the Riemannian (n, K) model instead")
    s.add_argument("--n", type=int)
    s.add_argument("--K", type=float)
    s.add_argument("--backend", choices=["fd", "shoot", "both"], default="both")
    _add_solver_flags(s)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="replay the derivation as a certificate")
    _add_kahler_flags(v)
    v.add_argument("--a", type=float, action="append",
                   help="power-trick exponent a > 1 (repeatable; default 2)")
    v.add_argument("--panels", type=int, help="quadrature panels (even, >= 8)")
    _add_solver_flags(v)
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("sweep", help="sweep a parameter grid to CSV")
    w.add_argument("config", help="JSON sweep configuration file")
    w.add_argument("--out", required=True, help="output CSV path")
    w.add_argument("--meta", action="store_true",
                   help="write a .meta.json sidecar with run metadata")
    w.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "solve" and not args.riemannian:
        if args.m is None or args.kappa1 is None or args.kappa2 is None:
            return _fail("solve requires --m/--kappa1/--kappa2 or --riemannian --n --K")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
