"""One-dimensional comparison eigenvalue problems from scalar hypotheses.

Builds the Neumann drift problem for a Kahler hypothesis set (complex
dimension m, holomorphic sectional curvature >= 4*kappa1, orthogonal Ricci
>= 2(m-1)*kappa2), the analogous Riemannian problem (Ric >= (n-1)K), and
the differentiated Dirichlet problem satisfied by v = phi'.

Admissibility is purely analytic: the drift coefficients must be finite on
[-D/2, D/2].  No geometric diameter theorem is checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .coeffs import POLE_GUARD, DriftSpec, DriftTerm
from .errors import DomainError, InvalidDiameter


class BC(Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class KahlerParams:
    """Scalar hypothesis data: complex dimension and the two curvature
    normalizations kappa1 (holomorphic sectional) and kappa2 (orthogonal
    Ricci)."""

    m: int
    kappa1: float
    kappa2: float

    def __post_init__(self):
        if not (isinstance(self.m, int) and self.m >= 1):
            raise DomainError(f"m must be an integer >= 1, got {self.m!r}")
        if not (math.isfinite(self.kappa1) and math.isfinite(self.kappa2)):
            raise DomainError("kappa1 and kappa2 must be finite")

    @property
    def curvature_combination(self) -> float:
        """The linear coefficient c = kappa2*(m-1) + 2*kappa1 of the
        closed-form bound."""
        return self.kappa2 * (self.m - 1) + 2.0 * self.kappa1


@dataclass(frozen=True)
class RiemannParams:
    """Real dimension n and Ricci normalization K (Ric >= (n-1)K)."""

    n: int
    K: float

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 2):
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        if not math.isfinite(self.K):
            raise DomainError("K must be finite")


@dataclass(frozen=True)
class ModelProblem:
    """A drift eigenvalue problem on [-D/2, D/2].

    ``has_potential`` marks the differentiated (Dirichlet) variant, whose ODE
    carries the zeroth-order coefficient sum_i mult_i * S_{K_i}(x) built from
    the same drift terms.
    """

    spec: DriftSpec
    D: float
    bc: BC = BC.NEUMANN
    has_potential: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.D) and self.D > 0):
            raise DomainError(f"diameter must be positive and finite, got {self.D!r}")
        thr = self.spec.singular_threshold
        if self.D / 2.0 > (1.0 - POLE_GUARD) * thr:
            raise InvalidDiameter(
                f"D = {self.D!r} reaches a drift singularity; "
                f"maximal admissible diameter is {2.0 * thr!r}",
                max_diameter=2.0 * thr,
            )

    @property
    def half_length(self) -> float:
        return self.D / 2.0

    @property
    def near_singular(self) -> bool:
        """True when D is within 1e-3 (relative) of the singular limit."""
        thr = self.spec.singular_threshold
        return math.isfinite(thr) and self.D / 2.0 > (1.0 - 1e-3) * thr


def max_admissible_diameter(spec: DriftSpec) -> float:
    """Largest D with all drift coefficients finite on [-D/2, D/2]."""
    return 2.0 * spec.singular_threshold


def li_wang_problem(p: KahlerParams, D: float) -> ModelProblem:
    """Neumann problem with drift 2(m-1) T_{kappa2} + T_{4 kappa1}.

    The zero-multiplicity kappa2 term is dropped when m = 1.
    """
    spec = DriftSpec([(2.0 * (p.m - 1), p.kappa2), (1.0, 4.0 * p.kappa1)])
    return ModelProblem(spec=spec, D=D, bc=BC.NEUMANN)


def kroger_problem(p: RiemannParams, D: float) -> ModelProblem:
    """Neumann problem with drift (n-1) T_K."""
    spec = DriftSpec([(float(p.n - 1), p.K)])
    return ModelProblem(spec=spec, D=D, bc=BC.NEUMANN)


def differentiated_problem(p: ModelProblem) -> ModelProblem:
    """Dirichlet problem satisfied by v = phi' of a Neumann problem.

    Same drift terms and diameter; the zeroth-order coefficient
    sum_i mult_i * S_{K_i} is switched on for residual checks.
    """
    if p.bc is not BC.NEUMANN:
        raise DomainError("differentiated_problem expects a Neumann problem")
    return ModelProblem(spec=p.spec, D=p.D, bc=BC.DIRICHLET, has_potential=True)
