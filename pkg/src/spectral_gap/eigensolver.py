"""First-eigenvalue solvers for the one-dimensional comparison problems.

Two independent backends:

* finite differences on the self-adjoint form (p phi')' = -mu p phi
  (finite-volume midpoint fluxes, symmetric tridiagonal generalized pencil
  A w = mu B w with B diagonal positive), eigenvalue located by
  Sturm-sequence inertia counts and bisection, error controlled by mesh
  doubling with Richardson extrapolation;

* shooting with classical fixed-step RK4 on the drift form, first sign
  change of the endpoint mismatch bracketed and bisected in mu.

The Neumann first nonzero eigenvalue is the second eigenvalue of the pencil
in inertia order (the constant mode gives mu = 0 exactly).  Near-singular
diameters (within 1e-3 of the tangent pole) switch the finite-difference
backend to a smooth endpoint-clustered mesh; the shooting backend is skipped
in the cross-check there because the drift blows up at the endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from numba import njit
from scipy.linalg import solve_banded

from .coeffs import drift_values, potential_values, weight_values
from .errors import BracketFailure, DomainError, NoConvergence
from .model import BC, ModelProblem


class Backend(Enum):
    FINITE_DIFFERENCE = "fd"
    SHOOTING = "shoot"
    BOTH = "both"


@dataclass(frozen=True)
class SolverConfig:
    """Mesh size, target relative accuracy, and backend selection.

    ``max_refinements`` counts mesh doublings beyond the first pair of
    solves (the first doubling is always performed to obtain a Richardson
    error estimate).
    """

    mesh_points: int = 1025
    rel_tol: float = 1e-7
    max_refinements: int = 6
    backend: Backend = Backend.BOTH

    def __post_init__(self):
        if self.mesh_points < 16:
            raise DomainError("mesh_points must be >= 16")
        if not (0.0 < self.rel_tol < 1.0):
            raise DomainError("rel_tol must lie in (0, 1)")
        if self.max_refinements < 0:
            raise DomainError("max_refinements must be >= 0")


@dataclass(frozen=True)
class EigenSolution:
    """First-eigenvalue result with diagnostics.

    ``mu`` is the Richardson-extrapolated eigenvalue; ``mu_raw`` the plain
    discrete eigenvalue on the finest mesh.  ``phi`` is normalized to
    max |phi| = 1 with its largest-magnitude sample positive.
    """

    mu: float
    nodes: np.ndarray
    phi: np.ndarray
    residual: float
    est_error: float
    backend_used: Backend
    mu_raw: float
    backend_delta: float | None = None


# -- meshes ------------------------------------------------------------------

def build_mesh(p: ModelProblem, n_cells: int) -> np.ndarray:
    """Uniform mesh on [-D/2, D/2]; smooth sine-stretched mesh clustering
    nodes at the endpoints when D is near the singular threshold."""
    hl = p.half_length
    if p.near_singular:
        t = np.linspace(-1.0, 1.0, n_cells + 1)
        x = hl * np.sin(0.5 * math.pi * t)
        x[0], x[-1] = -hl, hl
        return x
    return np.linspace(-hl, hl, n_cells + 1)


# -- finite-difference pencil ------------------------------------------------

def _assemble(p: ModelProblem, nodes: np.ndarray):
    """Symmetric tridiagonal pencil (diag, off, b) for A w = mu B w."""
    h = np.diff(nodes)
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    p_mid = weight_values(p.spec, mid)
    p_node = weight_values(p.spec, nodes)
    flux = p_mid / h
    ell = np.empty(nodes.size)
    ell[1:-1] = 0.5 * (h[:-1] + h[1:])
    ell[0] = 0.5 * h[0]
    ell[-1] = 0.5 * h[-1]
    if p.bc is BC.NEUMANN:
        diag = np.empty(nodes.size)
        diag[0] = flux[0]
        diag[-1] = flux[-1]
        diag[1:-1] = flux[:-1] + flux[1:]
        off = -flux
        b = p_node * ell
    else:
        diag = flux[:-1] + flux[1:]
        off = -flux[1:-1]
        b = (p_node * ell)[1:-1]
        if p.has_potential:
            diag = diag + potential_values(p.spec, nodes[1:-1]) * b
    return diag, off, b


@njit(cache=True)
def _sturm_count(diag, off, b, sigma):
    """Number of eigenvalues of the pencil (A, B) strictly below sigma,
    via the sign count of the LDL^T pivots of A - sigma B."""
    cnt = 0
    d = diag[0] - sigma * b[0]
    if d == 0.0:
        d = -1e-300
    if d < 0.0:
        cnt += 1
    for i in range(1, diag.shape[0]):
        d = diag[i] - sigma * b[i] - off[i - 1] * off[i - 1] / d
        if d == 0.0:
            d = -1e-300
        if d < 0.0:
            cnt += 1
    return cnt


def _gershgorin(diag, off, b):
    r = np.zeros_like(diag)
    r[:-1] += np.abs(off)
    r[1:] += np.abs(off)
    lo = float(np.min((diag - r) / b))
    hi = float(np.max((diag + r) / b))
    pad = 1e-10 * (1.0 + abs(lo) + abs(hi))
    return lo - pad, hi + pad


def _bisect_kth(diag, off, b, k, lo, hi):
    """k-th (0-based) eigenvalue of the pencil by inertia bisection."""
    if _sturm_count(diag, off, b, lo) > k or _sturm_count(diag, off, b, hi) < k + 1:
        lo, hi = _gershgorin(diag, off, b)
    for _ in range(250):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        if _sturm_count(diag, off, b, mid) >= k + 1:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


def _eigenvector(diag, off, b, mu, seed_profile):
    """Inverse iteration on A - mu B (banded LU with pivoting)."""
    n = diag.size
    shift = mu
    v = seed_profile / np.max(np.abs(seed_profile))
    for attempt in range(4):
        ab = np.zeros((3, n))
        ab[0, 1:] = off
        ab[1, :] = diag - shift * b
        ab[2, :-1] = off
        try:
            for _ in range(3):
                v = solve_banded((1, 1), ab, b * v)
                v = v / np.max(np.abs(v))
        except np.linalg.LinAlgError:
            pass
        r = np.empty(n)
        r[:] = (diag - mu * b) * v
        r[:-1] += off * v[1:]
        r[1:] += off * v[:-1]
        residual = float(
            np.max(np.abs(r)) / (np.max(np.abs(diag)) * np.max(np.abs(v)))
        )
        if residual < 1e-6 or attempt == 3:
            break
        shift = mu * (1.0 + 1e-10 * (attempt + 1)) + 1e-13 * (attempt + 1)
    imax = int(np.argmax(np.abs(v)))
    if v[imax] < 0:
        v = -v
    return v / np.abs(v[imax]), residual


def _seed_profile(p: ModelProblem, nodes: np.ndarray):
    if p.bc is BC.NEUMANN:
        return nodes.copy()  # odd ramp overlaps the first nonconstant mode
    return np.cos(math.pi * nodes[1:-1] / p.D)  # positive bump profile


def _rayleigh_quotient(p, nodes, vec, pencil):
    """Eigenvalue from the assembled bilinear forms.

    Plain inertia bisection carries an absolute error ~ eps * ||A||, which
    ruins relative accuracy on fine meshes; the Rayleigh quotient of the
    bisection eigenvector is assembled from nonnegative flux terms and has
    full relative accuracy.
    """
    diag, off, b = pencil
    h = np.diff(nodes)
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    flux = weight_values(p.spec, mid) / h
    if p.bc is BC.NEUMANN:
        v = vec
        num = float(np.dot(flux, (v[:-1] - v[1:]) ** 2))
    else:
        v = np.zeros(nodes.size)
        v[1:-1] = vec
        num = float(np.dot(flux, (v[:-1] - v[1:]) ** 2))
        if p.has_potential:
            q = potential_values(p.spec, nodes[1:-1])
            num += float(np.dot(q * b, vec ** 2))
    den = float(np.dot(b, vec ** 2))
    return num / den


def _fd_discrete_mu(p, nodes, k, bracket):
    """Discrete k-th eigenvalue (Rayleigh-refined), eigenvector, residual."""
    diag, off, b = _assemble(p, nodes)
    lo, hi = bracket if bracket is not None else _gershgorin(diag, off, b)
    mu_bis = _bisect_kth(diag, off, b, k, lo, hi)
    vec, residual = _eigenvector(diag, off, b, mu_bis, _seed_profile(p, nodes))
    mu = _rayleigh_quotient(p, nodes, vec, (diag, off, b))
    return mu, vec, residual, (diag, off, b)


def _embed_phi(p: ModelProblem, nodes, vec):
    if p.bc is BC.DIRICHLET:
        phi = np.zeros(nodes.size)
        phi[1:-1] = vec
        return phi / np.max(np.abs(phi))
    return vec


def _fd_solve(p: ModelProblem, cfg: SolverConfig, k: int) -> EigenSolution:
    n_cells = cfg.mesh_points - 1
    mu_prev = None
    bracket = None
    last = None
    for level in range(cfg.max_refinements + 2):
        nodes = build_mesh(p, n_cells * 2 ** level)
        mu_h, vec, residual, _ = _fd_discrete_mu(p, nodes, k, bracket)
        if mu_prev is not None:
            est = abs(mu_h - mu_prev) / 3.0
            mu_ex = mu_h + (mu_h - mu_prev) / 3.0
            last = (nodes, mu_h, mu_ex, est, vec, residual)
            if est <= cfg.rel_tol * max(abs(mu_ex), 1e-300):
                break
        mu_prev = mu_h
        width = 1e-3 * (1.0 + abs(mu_h))
        bracket = (mu_h - width, mu_h + width)
    else:
        if last is None:
            raise NoConvergence("refinement budget exhausted with no error estimate")
        nodes, mu_h, mu_ex, est, vec, residual = last
        raise NoConvergence(
            f"est_error {est:.3e} above rel_tol*mu = {cfg.rel_tol * abs(mu_ex):.3e} "
            f"after {cfg.max_refinements} refinements (mu ~ {mu_ex!r})"
        )
    nodes, mu_h, mu_ex, est, vec, residual = last
    return EigenSolution(
        mu=mu_ex,
        nodes=nodes,
        phi=_embed_phi(p, nodes, vec),
        residual=residual,
        est_error=est,
        backend_used=Backend.FINITE_DIFFERENCE,
        mu_raw=mu_h,
    )


# -- shooting ----------------------------------------------------------------

@njit(cache=True)
def _rk4_endpoint(mu, h, w_node, w_mid, q_node, q_mid, dirichlet):
    """Integrate y'' = w(x) y' + (q(x) - mu) y across the interval and
    return the endpoint mismatch: y'(end) for Neumann ICs, y(end) for
    Dirichlet ICs.  Coefficients are precomputed at nodes and midpoints."""
    if dirichlet:
        y1, y2 = 0.0, 1.0
    else:
        y1, y2 = 1.0, 0.0
    n = w_mid.shape[0]
    for i in range(n):
        k1a = y2
        k1b = w_node[i] * y2 + (q_node[i] - mu) * y1
        k2a = y2 + 0.5 * h * k1b
        k2b = w_mid[i] * k2a + (q_mid[i] - mu) * (y1 + 0.5 * h * k1a)
        k3a = y2 + 0.5 * h * k2b
        k3b = w_mid[i] * k3a + (q_mid[i] - mu) * (y1 + 0.5 * h * k2a)
        k4a = y2 + h * k3b
        k4b = w_node[i + 1] * k4a + (q_node[i + 1] - mu) * (y1 + h * k3a)
        y1 += h * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
        y2 += h * (k1b + 2.0 * k2b + 2.0 * k3b + k4b) / 6.0
    if dirichlet:
        return y1
    return y2


@njit(cache=True)
def _rk4_trajectory(mu, h, w_node, w_mid, q_node, q_mid, dirichlet):
    n = w_mid.shape[0]
    out = np.empty(n + 1)
    if dirichlet:
        y1, y2 = 0.0, 1.0
    else:
        y1, y2 = 1.0, 0.0
    out[0] = y1
    for i in range(n):
        k1a = y2
        k1b = w_node[i] * y2 + (q_node[i] - mu) * y1
        k2a = y2 + 0.5 * h * k1b
        k2b = w_mid[i] * k2a + (q_mid[i] - mu) * (y1 + 0.5 * h * k1a)
        k3a = y2 + 0.5 * h * k2b
        k3b = w_mid[i] * k3a + (q_mid[i] - mu) * (y1 + 0.5 * h * k2a)
        k4a = y2 + h * k3b
        k4b = w_node[i + 1] * k4a + (q_node[i + 1] - mu) * (y1 + h * k3a)
        y1 += h * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
        y2 += h * (k1b + 2.0 * k2b + 2.0 * k3b + k4b) / 6.0
        out[i + 1] = y1
    return out


N_PROBES = 64
CEILING_FACTOR = 100.0


def _shoot_coeffs(p: ModelProblem, n_steps: int):
    nodes = np.linspace(-p.half_length, p.half_length, n_steps + 1)
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    w_node = drift_values(p.spec, nodes)
    w_mid = drift_values(p.spec, mid)
    if p.has_potential:
        q_node = potential_values(p.spec, nodes)
        q_mid = potential_values(p.spec, mid)
    else:
        q_node = np.zeros(nodes.size)
        q_mid = np.zeros(mid.size)
    return nodes, float(nodes[1] - nodes[0]), w_node, w_mid, q_node, q_mid


def _shoot_mu(p: ModelProblem, n_steps: int, bracket=None):
    _, h, wn, wm, qn, qm = _shoot_coeffs(p, n_steps)
    dirichlet = p.bc is BC.DIRICHLET
    F = lambda mu: _rk4_endpoint(mu, h, wn, wm, qn, qm, dirichlet)
    if bracket is None:
        scale = p.spec.curvature_scale
        mu_floor = 1e-10 * (1.0 + scale)
        ceiling = CEILING_FACTOR * math.pi ** 2 / p.D ** 2 + 10.0 * scale
        base = 0.0
        if p.has_potential:
            base = min(0.0, float(np.min(qn)))
        probes = base + np.geomspace(mu_floor, ceiling - base, N_PROBES)
        f_prev = F(probes[0])
        lo = hi = None
        for j in range(1, N_PROBES):
            f = F(probes[j])
            if f == 0.0:
                return float(probes[j])
            if f_prev * f < 0.0:
                lo, hi = float(probes[j - 1]), float(probes[j])
                break
            f_prev = f
        if lo is None:
            raise BracketFailure(
                f"no sign change of the shooting mismatch below mu = {ceiling!r}"
            )
    else:
        lo, hi = bracket
        f_lo, f_hi = F(lo), F(hi)
        attempts = 0
        while f_lo * f_hi > 0.0 and attempts < 60:
            lo -= 0.5 * (hi - lo)
            hi += 0.5 * (hi - lo)
            f_lo, f_hi = F(lo), F(hi)
            attempts += 1
        if f_lo * f_hi > 0.0:
            raise BracketFailure("could not re-bracket on the refined step size")
    f_lo = F(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        f_mid = F(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
        if hi - lo <= 1e-14 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


def shooting_eigenvalue(p: ModelProblem, cfg: SolverConfig | None = None) -> EigenSolution:
    """Shooting-method first eigenvalue (first nonzero for Neumann ICs,
    first for Dirichlet), with a step-halving error estimate (RK4 is
    fourth order, so est = |mu_h - mu_h/2| / 15)."""
    cfg = cfg or SolverConfig()
    n = cfg.mesh_points - 1
    mu_h = _shoot_mu(p, n)
    width = 1e-5 * (1.0 + abs(mu_h))
    mu_h2 = _shoot_mu(p, 2 * n, bracket=(mu_h - width, mu_h + width))
    est = abs(mu_h2 - mu_h) / 15.0
    mu = mu_h2 + (mu_h2 - mu_h) / 15.0
    nodes, h, wn, wm, qn, qm = _shoot_coeffs(p, 2 * n)
    dirichlet = p.bc is BC.DIRICHLET
    phi = _rk4_trajectory(mu_h2, h, wn, wm, qn, qm, dirichlet)
    mismatch = abs(_rk4_endpoint(mu_h2, h, wn, wm, qn, qm, dirichlet))
    imax = int(np.argmax(np.abs(phi)))
    phi = phi / phi[imax] if phi[imax] != 0 else phi
    return EigenSolution(
        mu=mu,
        nodes=nodes,
        phi=phi,
        residual=float(mismatch / max(1.0, np.max(np.abs(phi)))),
        est_error=est,
        backend_used=Backend.SHOOTING,
        mu_raw=mu_h2,
    )


# -- public solves -----------------------------------------------------------

def _dispatch(p: ModelProblem, cfg: SolverConfig, k: int) -> EigenSolution:
    if cfg.backend is Backend.SHOOTING:
        return shooting_eigenvalue(p, cfg)
    sol = _fd_solve(p, cfg, k)
    if cfg.backend is Backend.BOTH and not p.near_singular:
        sh = shooting_eigenvalue(p, cfg)
        sol = replace(
            sol,
            backend_used=Backend.BOTH,
            backend_delta=abs(sol.mu - sh.mu),
        )
    return sol


def solve_neumann_first(p: ModelProblem, cfg: SolverConfig | None = None) -> EigenSolution:
    """First nonzero Neumann eigenvalue of (p phi')' = -mu p phi."""
    if p.bc is not BC.NEUMANN:
        raise DomainError("solve_neumann_first expects a Neumann problem")
    return _dispatch(p, cfg or SolverConfig(), k=1)


def solve_dirichlet_first(p: ModelProblem, cfg: SolverConfig | None = None) -> EigenSolution:
    """First Dirichlet eigenvalue (including the zeroth-order coefficient
    when the problem is a differentiated one)."""
    if p.bc is not BC.DIRICHLET:
        raise DomainError("solve_dirichlet_first expects a Dirichlet problem")
    return _dispatch(p, cfg or SolverConfig(), k=0)


def refine(solution: EigenSolution, p: ModelProblem, cfg: SolverConfig | None = None) -> EigenSolution:
    """Halve the mesh width of a finite-difference solution, re-solve, and
    Richardson-extrapolate (second-order scheme: est = (mu_h - mu_h/2)/3)."""
    cfg = cfg or SolverConfig()
    k = 1 if p.bc is BC.NEUMANN else 0
    n_cells = 2 * (solution.nodes.size - 1)
    nodes = build_mesh(p, n_cells)
    width = 1e-3 * (1.0 + abs(solution.mu_raw))
    mu_h, vec, residual, _ = _fd_discrete_mu(
        p, nodes, k, (solution.mu_raw - width, solution.mu_raw + width)
    )
    est = abs(mu_h - solution.mu_raw) / 3.0
    mu_ex = mu_h + (mu_h - solution.mu_raw) / 3.0
    return EigenSolution(
        mu=mu_ex,
        nodes=nodes,
        phi=_embed_phi(p, nodes, vec),
        residual=residual,
        est_error=est,
        backend_used=Backend.FINITE_DIFFERENCE,
        mu_raw=mu_h,
    )
