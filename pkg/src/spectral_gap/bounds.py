"""Closed-form lower bounds for the first nonzero eigenvalue.

The main bound for the Kahler hypothesis set is

    sup over s in (0,1) of  4 s (1-s) pi^2/D^2 + 2 s (kappa2 (m-1) + 2 kappa1)

optimized analytically: with q = 4 pi^2/D^2 and c = kappa2 (m-1) + 2 kappa1
the objective is the downward parabola -q s^2 + (q + 2c) s with vertex
s* = 1/2 + c D^2 / (4 pi^2).  When the vertex leaves (0, 1) the supremum is
a boundary limit and is not attained.

Classical evaluators (Lichnerowicz, Kahler Lichnerowicz, Zhong-Yang,
Shi-Zhang) are included for comparison columns.  Deriving Ricci lower
bounds from the Kahler data is out of scope, so the Riemannian bounds are
reported only when (n, K) is supplied directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, HypothesisError, InvalidDiameter
from .model import KahlerParams, RiemannParams, li_wang_problem


class SupResult(NamedTuple):
    """Argmax location (possibly a boundary limit), supremum value, and
    whether the supremum is attained inside (0, 1)."""

    s_star: float
    value: float
    attained: bool


@dataclass(frozen=True)
class BoundReport:
    """All bound values for one parameter set, plus the numeric model
    eigenvalue when requested."""

    main_sup: float
    main_s_star: float
    main_attained: bool
    zhong_yang: float
    lichnerowicz: float | None = None
    kahler_lichnerowicz: float | None = None
    shi_zhang_sup: float | None = None
    shi_zhang_s_star: float | None = None
    model_mu: float | None = None
    model_est_error: float | None = None
    model_backend_delta: float | None = None
    warnings: tuple[str, ...] = ()


def _check_d(D: float) -> None:
    if not (math.isfinite(D) and D > 0):
        raise DomainError(f"diameter must be positive and finite, got {D!r}")


def _check_s(s: float) -> None:
    if not (0.0 < s < 1.0):
        raise DomainError(f"s must lie in (0, 1), got {s!r}")


def main_bound_at(p: KahlerParams, D: float, s: float) -> float:
    """4 s (1-s) pi^2/D^2 + 2 s (kappa2 (m-1) + 2 kappa1)."""
    _check_d(D)
    _check_s(s)
    return 4.0 * s * (1.0 - s) * math.pi ** 2 / D ** 2 + 2.0 * s * p.curvature_combination


def _parabola_sup(q: float, lin: float) -> SupResult:
    """Supremum over s in (0,1) of -q s^2 + (q + lin) s, q > 0."""
    s_star = 0.5 + lin / (2.0 * q)
    if s_star >= 1.0:
        return SupResult(1.0, lin, False)
    if s_star <= 0.0:
        return SupResult(0.0, 0.0, False)
    return SupResult(s_star, (q + lin) ** 2 / (4.0 * q), True)


def main_bound_sup(p: KahlerParams, D: float) -> SupResult:
    """Analytic supremum of main_bound_at over s in (0, 1)."""
    _check_d(D)
    return _parabola_sup(4.0 * math.pi ** 2 / D ** 2, 2.0 * p.curvature_combination)


def shi_zhang_bound(n: int, K: float, D: float, s: float) -> float:
    """4 (s - s^2) pi^2/D^2 + s (n-1) K."""
    RiemannParams(n, K)
    _check_d(D)
    _check_s(s)
    return 4.0 * (s - s * s) * math.pi ** 2 / D ** 2 + s * (n - 1) * K


def shi_zhang_sup(n: int, K: float, D: float) -> SupResult:
    """Analytic supremum of shi_zhang_bound over s in (0, 1)."""
    RiemannParams(n, K)
    _check_d(D)
    return _parabola_sup(4.0 * math.pi ** 2 / D ** 2, (n - 1) * K)


def lichnerowicz_bound(n: int, K: float) -> float:
    """n K, valid for Ric >= (n-1) K > 0."""
    RiemannParams(n, K)
    if K <= 0:
        raise HypothesisError("Lichnerowicz bound requires K > 0")
    return n * K


def kahler_lichnerowicz_bound(n: int, K: float) -> float:
    """2 (n-1) K for closed Kahler manifolds with Ric >= (n-1) K > 0."""
    RiemannParams(n, K)
    if K <= 0:
        raise HypothesisError("Kahler Lichnerowicz bound requires K > 0")
    return 2.0 * (n - 1) * K


def zhong_yang_bound(D: float) -> float:
    """pi^2 / D^2."""
    _check_d(D)
    return math.pi ** 2 / D ** 2


def bound_report(
    p: KahlerParams,
    D: float,
    with_model: bool = False,
    cfg=None,
    riemannian: RiemannParams | None = None,
) -> BoundReport:
    """Aggregate every bound whose hypotheses the inputs directly satisfy.

    Riemannian comparisons (Lichnerowicz, Kahler Lichnerowicz, Shi-Zhang)
    are filled only when ``riemannian`` is supplied; the Lichnerowicz pair
    additionally needs K > 0.  With ``with_model`` the numeric model
    eigenvalue of the drift problem is solved and included.
    """
    _check_d(D)
    main = main_bound_sup(p, D)
    warnings: list[str] = []
    if not main.attained:
        warnings.append("main bound supremum is a boundary limit, not attained")
    from .coeffs import POLE_GUARD, DriftSpec

    drift_spec = DriftSpec([(2.0 * (p.m - 1), p.kappa2), (1.0, 4.0 * p.kappa1)])
    max_d = 2.0 * drift_spec.singular_threshold
    if math.isfinite(max_d):
        if D > (1.0 - POLE_GUARD) * max_d:
            warnings.append(
                f"diameter exceeds the model admissibility limit {max_d!r}; "
                "no model eigenvalue exists for these coefficients"
            )
        elif D > (1.0 - 1e-3) * max_d:
            warnings.append("diameter is at the model admissibility edge")
    lich = klich = None
    sz_sup = sz_star = None
    if riemannian is not None:
        sz = shi_zhang_sup(riemannian.n, riemannian.K, D)
        sz_sup, sz_star = sz.value, sz.s_star
        if riemannian.K > 0:
            lich = lichnerowicz_bound(riemannian.n, riemannian.K)
            klich = kahler_lichnerowicz_bound(riemannian.n, riemannian.K)
    model_mu = model_est = model_delta = None
    if with_model:
        from .eigensolver import SolverConfig, solve_neumann_first

        try:
            problem = li_wang_problem(p, D)
        except InvalidDiameter as exc:
            warnings.append(
                f"model eigenvalue unavailable: {exc} "
                "(bound formula still evaluated)"
            )
        else:
            sol = solve_neumann_first(problem, cfg or SolverConfig())
            model_mu = sol.mu
            model_est = sol.est_error
            model_delta = sol.backend_delta
    return BoundReport(
        main_sup=main.value,
        main_s_star=main.s_star,
        main_attained=main.attained,
        zhong_yang=zhong_yang_bound(D),
        lichnerowicz=lich,
        kahler_lichnerowicz=klich,
        shi_zhang_sup=sz_sup,
        shi_zhang_s_star=sz_star,
        model_mu=model_mu,
        model_est_error=model_est,
        model_backend_delta=model_delta,
        warnings=tuple(warnings),
    )
