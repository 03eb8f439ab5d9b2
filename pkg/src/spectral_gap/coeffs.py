"""Tangent-type comparison coefficients and the self-adjoint weight.

The drift of the one-dimensional comparison problems is a sum of
multiplicity-weighted tangent-type terms ``mult * T_K(x)``.  This module
evaluates T_K, its derivative S_K, the cosine-type antiderivative factor
C_K (with C_K'/C_K = -T_K), the composite drift, and the integrating-factor
weight p(x) = prod C_K(x)^mult that puts the drift ODE in self-adjoint form
(p phi')' = -mu p phi.

All functions are pure and stateless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Relative margin kept away from the tangent pole pi/(2 sqrt(K)); points
# closer than this to the pole are rejected to avoid catastrophic tan blow-up.
POLE_GUARD = 1e-12

# |K| below this is treated as the flat (K = 0) branch.
_FLAT_CUTOFF = 1e-14


def _check_finite_k(K: float) -> None:
    if not math.isfinite(K):
        raise DomainError(f"curvature must be finite, got {K!r}")


def pole_location(K: float) -> float:
    """Distance from 0 to the nearest singularity of T_K; inf if none."""
    _check_finite_k(K)
    if K > _FLAT_CUTOFF:
        return math.pi / (2.0 * math.sqrt(K))
    return math.inf


def _check_admissible(K: float, x: float) -> None:
    pole = pole_location(K)
    if abs(x) > (1.0 - POLE_GUARD) * pole:
        raise DomainError(
            f"x = {x!r} is at or past the tangent pole {pole!r} for curvature {K!r}"
        )


def t_k(K: float, x: float) -> float:
    """Tangent-type coefficient: sqrt(K) tan(sqrt(K) x) / 0 / -sqrt(-K) tanh(sqrt(-K) x).

    Odd in x.  Raises DomainError at or past the pole when K > 0.
    """
    _check_finite_k(K)
    if abs(K) <= _FLAT_CUTOFF:
        return 0.0
    if K > 0.0:
        _check_admissible(K, x)
        r = math.sqrt(K)
        return r * math.tan(r * x)
    r = math.sqrt(-K)
    return -r * math.tanh(r * x)


def s_k(K: float, x: float) -> float:
    """Secant-type derivative of t_k: K sec^2 / 0 / K sech^2.  Even in x,
    and s_k(K, x) >= K wherever defined."""
    _check_finite_k(K)
    if abs(K) <= _FLAT_CUTOFF:
        return 0.0
    if K > 0.0:
        _check_admissible(K, x)
        r = math.sqrt(K)
        return K / math.cos(r * x) ** 2
    r = math.sqrt(-K)
    return K / math.cosh(r * x) ** 2


def c_k(K: float, x: float) -> float:
    """Cosine-type antiderivative factor: cos / 1 / cosh, so that
    (log c_k)' = -t_k.  Even in x, c_k(K, 0) = 1.  Globally defined;
    positivity past the pole is the caller's concern (checked by weight)."""
    _check_finite_k(K)
    if abs(K) <= _FLAT_CUTOFF:
        return 1.0
    if K > 0.0:
        return math.cos(math.sqrt(K) * x)
    return math.cosh(math.sqrt(-K) * x)


@dataclass(frozen=True)
class DriftTerm:
    """One multiplicity-weighted tangent term of the drift."""

    multiplicity: float
    curvature: float

    def __post_init__(self):
        if not (math.isfinite(self.multiplicity) and self.multiplicity > 0):
            raise DomainError(
                f"multiplicity must be positive and finite, got {self.multiplicity!r}"
            )
        _check_finite_k(self.curvature)


@dataclass(frozen=True)
class DriftSpec:
    """Ordered list of drift terms; the empty list is the zero (flat) drift.

    Terms with equal curvature are merged (multiplicities summed); inputs
    with zero multiplicity or zero curvature (inert: T_0 = S_0 = 0, C_0 = 1)
    are dropped at construction, so structural equality matches drift
    equality for like-for-like term sets.
    """

    terms: tuple[DriftTerm, ...]

    def __init__(self, terms=()):
        merged: dict[float, float] = {}
        order: list[float] = []
        for t in terms:
            if not isinstance(t, DriftTerm):
                t = DriftTerm(*t) if t[0] != 0 else None
                if t is None:
                    continue
            if t.curvature == 0.0:
                continue
            if t.curvature not in merged:
                merged[t.curvature] = 0.0
                order.append(t.curvature)
            merged[t.curvature] += t.multiplicity
        object.__setattr__(
            self,
            "terms",
            tuple(DriftTerm(merged[K], K) for K in order if merged[K] != 0.0),
        )

    @property
    def singular_threshold(self) -> float:
        """min over positive-curvature terms of pi/(2 sqrt(K)); inf if none."""
        return min((pole_location(t.curvature) for t in self.terms), default=math.inf)

    @property
    def curvature_scale(self) -> float:
        """Sum of |mult * K|; a rough magnitude of the zeroth-order terms."""
        return sum(abs(t.multiplicity * t.curvature) for t in self.terms)


def drift(spec: DriftSpec, x: float) -> float:
    """Composite drift sum_i mult_i * t_k(K_i, x)."""
    return sum(t.multiplicity * t_k(t.curvature, x) for t in spec.terms)


def weight(spec: DriftSpec, x: float) -> float:
    """Integrating-factor weight p(x) = prod c_k(K_i, x)^mult_i.

    Positive, even, p(0) = 1, and -(log p)' = drift on the admissible
    interval |x| < singular_threshold(spec).
    """
    for t in spec.terms:
        _check_admissible(t.curvature, x)
    out = 1.0
    for t in spec.terms:
        out *= c_k(t.curvature, x) ** t.multiplicity
    return out


def potential(spec: DriftSpec, x: float) -> float:
    """Zeroth-order coefficient sum_i mult_i * s_k(K_i, x) of the
    differentiated (Dirichlet) problem."""
    return sum(t.multiplicity * s_k(t.curvature, x) for t in spec.terms)


# -- vectorized helpers (solver plumbing) -----------------------------------

def t_k_values(K: float, x: np.ndarray) -> np.ndarray:
    """t_k(K, .) over an array of admissible abscissae."""
    x = np.asarray(x, dtype=float)
    _check_finite_k(K)
    if abs(K) <= _FLAT_CUTOFF:
        return np.zeros_like(x)
    if K > 0:
        pole = pole_location(K)
        if np.max(np.abs(x)) > (1.0 - POLE_GUARD) * pole:
            raise DomainError(f"abscissae reach the tangent pole {pole!r}")
        r = math.sqrt(K)
        return r * np.tan(r * x)
    r = math.sqrt(-K)
    return -r * np.tanh(r * x)


def s_k_values(K: float, x: np.ndarray) -> np.ndarray:
    """s_k(K, .) over an array of admissible abscissae."""
    x = np.asarray(x, dtype=float)
    _check_finite_k(K)
    if abs(K) <= _FLAT_CUTOFF:
        return np.zeros_like(x)
    if K > 0:
        pole = pole_location(K)
        if np.max(np.abs(x)) > (1.0 - POLE_GUARD) * pole:
            raise DomainError(f"abscissae reach the tangent pole {pole!r}")
        return K / np.cos(math.sqrt(K) * x) ** 2
    return K / np.cosh(math.sqrt(-K) * x) ** 2


def _guard_array(spec: DriftSpec, x: np.ndarray) -> None:
    thr = spec.singular_threshold
    if math.isfinite(thr) and np.max(np.abs(x)) > (1.0 - POLE_GUARD) * thr:
        raise DomainError(
            f"abscissae reach the singular threshold {thr!r} of the drift"
        )


def drift_values(spec: DriftSpec, x: np.ndarray) -> np.ndarray:
    """drift(spec, .) over an array of admissible abscissae."""
    x = np.asarray(x, dtype=float)
    _guard_array(spec, x)
    out = np.zeros_like(x)
    for t in spec.terms:
        K = t.curvature
        if abs(K) <= _FLAT_CUTOFF:
            continue
        if K > 0:
            r = math.sqrt(K)
            out += t.multiplicity * r * np.tan(r * x)
        else:
            r = math.sqrt(-K)
            out -= t.multiplicity * r * np.tanh(r * x)
    return out


def weight_values(spec: DriftSpec, x: np.ndarray) -> np.ndarray:
    """weight(spec, .) over an array of admissible abscissae."""
    x = np.asarray(x, dtype=float)
    _guard_array(spec, x)
    out = np.ones_like(x)
    for t in spec.terms:
        K = t.curvature
        if abs(K) <= _FLAT_CUTOFF:
            continue
        if K > 0:
            base = np.cos(math.sqrt(K) * x)
        else:
            base = np.cosh(math.sqrt(-K) * x)
        out *= base ** t.multiplicity
    return out


def potential_values(spec: DriftSpec, x: np.ndarray) -> np.ndarray:
    """potential(spec, .) over an array of admissible abscissae."""
    x = np.asarray(x, dtype=float)
    _guard_array(spec, x)
    out = np.zeros_like(x)
    for t in spec.terms:
        K = t.curvature
        if abs(K) <= _FLAT_CUTOFF:
            continue
        if K > 0:
            out += t.multiplicity * K / np.cos(math.sqrt(K) * x) ** 2
        else:
            out += t.multiplicity * K / np.cosh(math.sqrt(-K) * x) ** 2
    return out
