"""Rigorous lower bounds for the first nonzero Laplacian eigenvalue via
one-dimensional comparison eigenvalue problems."""

from .bounds import (
    BoundReport,
    SupResult,
    bound_report,
    kahler_lichnerowicz_bound,
    lichnerowicz_bound,
    main_bound_at,
    main_bound_sup,
    shi_zhang_bound,
    shi_zhang_sup,
    zhong_yang_bound,
)
from .coeffs import DriftSpec, DriftTerm, c_k, drift, potential, s_k, t_k, weight
from .eigensolver import (
    Backend,
    EigenSolution,
    SolverConfig,
    refine,
    shooting_eigenvalue,
    solve_dirichlet_first,
    solve_neumann_first,
)
from .errors import (
    BracketFailure,
    CertificateFailure,
    DomainError,
    HypothesisError,
    InvalidDiameter,
    NoConvergence,
    PreconditionError,
    SpectralGapError,
)
from .model import (
    BC,
    KahlerParams,
    ModelProblem,
    RiemannParams,
    differentiated_problem,
    kroger_problem,
    li_wang_problem,
    max_admissible_diameter,
)
from .verify import (
    ProofCertificate,
    ProofStep,
    QuadratureRule,
    check_int_part,
    check_sk_lower,
    check_wirtinger,
    replay_proof,
    require_pass,
)

__version__ = "0.1.0"
