import math

import numpy as np
import pytest

from spectral_gap.eigensolver import (
    Backend,
    SolverConfig,
    build_mesh,
    refine,
    shooting_eigenvalue,
    solve_dirichlet_first,
    solve_neumann_first,
)
from spectral_gap.errors import DomainError, NoConvergence
from spectral_gap.model import (
    KahlerParams,
    RiemannParams,
    differentiated_problem,
    kroger_problem,
    li_wang_problem,
)

FD = SolverConfig(backend=Backend.FINITE_DIFFERENCE)
SHOOT = SolverConfig(backend=Backend.SHOOTING)


def flat_problem(D):
    return li_wang_problem(KahlerParams(m=1, kappa1=0.0, kappa2=0.0), D)


class TestConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            SolverConfig(mesh_points=8)
        with pytest.raises(DomainError):
            SolverConfig(rel_tol=0.0)
        with pytest.raises(DomainError):
            SolverConfig(max_refinements=-1)


class TestMesh:
    def test_uniform(self):
        nodes = build_mesh(flat_problem(2.0), 10)
        assert nodes.size == 11
        assert np.allclose(np.diff(nodes), 0.2)

    def test_stretched_near_singular(self):
        p = kroger_problem(RiemannParams(n=2, K=1.0), math.pi * (1 - 1e-6))
        nodes = build_mesh(p, 64)
        h = np.diff(nodes)
        assert nodes[0] == -p.half_length and nodes[-1] == p.half_length
        # endpoint cells much smaller than interior cells
        assert h[0] < 0.05 * h[32]


class TestFlatNeumann:
    @pytest.mark.parametrize("D", [0.5, 1.0, math.pi, 5.0])
    def test_pi2_over_d2(self, D):
        sol = solve_neumann_first(flat_problem(D), FD)
        exact = math.pi ** 2 / D ** 2
        assert abs(sol.mu - exact) <= 1e-8 * exact
        assert sol.est_error <= 1e-7 * sol.mu
        assert sol.residual < 1e-6

    def test_eigenfunction_shape(self):
        sol = solve_neumann_first(flat_problem(2.0), FD)
        # cos(pi(x + 1)/2) profile: odd, max |phi| = 1 at an endpoint
        assert np.max(np.abs(sol.phi)) == pytest.approx(1.0)
        mid = sol.phi.size // 2
        assert abs(sol.phi[mid]) < 1e-3


class TestShooting:
    @pytest.mark.parametrize("D", [0.7, 2.0])
    def test_flat(self, D):
        sol = shooting_eigenvalue(flat_problem(D), SHOOT)
        assert sol.mu == pytest.approx(math.pi ** 2 / D ** 2, rel=1e-10)
        assert sol.backend_used is Backend.SHOOTING

    def test_dirichlet_flat(self):
        from spectral_gap.coeffs import DriftSpec
        from spectral_gap.model import BC, ModelProblem

        p = ModelProblem(spec=DriftSpec([]), D=2.0, bc=BC.DIRICHLET)
        sol = shooting_eigenvalue(p, SHOOT)
        assert sol.mu == pytest.approx(math.pi ** 2 / 4.0, rel=1e-10)


class TestBackendAgreement:
    @pytest.mark.parametrize(
        "m,k1,k2,D",
        [
            (1, 0.0, 0.0, 1.5),
            (2, 1.0, 1.0, 1.2),
            (2, -0.5, 0.3, 2.0),
            (3, 0.2, -1.0, 1.0),
        ],
    )
    def test_both_backends_agree(self, m, k1, k2, D):
        prob = li_wang_problem(KahlerParams(m=m, kappa1=k1, kappa2=k2), D)
        sol = solve_neumann_first(prob, SolverConfig(backend=Backend.BOTH))
        assert sol.backend_used is Backend.BOTH
        assert sol.backend_delta is not None
        assert sol.backend_delta <= 1e-7 * max(1.0, sol.mu)


class TestKroger:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_near_singular_limit_nk(self, n):
        prob = kroger_problem(RiemannParams(n=n, K=1.0), math.pi * (1 - 1e-6))
        sol = solve_neumann_first(prob, FD)
        assert abs(sol.mu - n) <= 1e-5 * n
        # shooting cross-check is skipped near the singular limit
        both = solve_neumann_first(prob, SolverConfig(backend=Backend.BOTH))
        assert both.backend_delta is None

    def test_monotone_in_diameter(self):
        r = RiemannParams(n=3, K=1.0)
        mus = [
            solve_neumann_first(kroger_problem(r, D), FD).mu
            for D in (1.0, 2.0, 3.0)
        ]
        assert mus[0] > mus[1] > mus[2]


class TestDifferentiated:
    def test_dirichlet_matches_neumann(self):
        # v = phi' satisfies the differentiated Dirichlet problem with the
        # same eigenvalue.
        p = KahlerParams(m=2, kappa1=0.25, kappa2=1.0)
        neu = li_wang_problem(p, 1.4)
        mu_n = solve_neumann_first(neu, FD).mu
        mu_d = solve_dirichlet_first(differentiated_problem(neu), FD).mu
        assert mu_d == pytest.approx(mu_n, rel=1e-8)

    def test_dirichlet_eigenfunction_positive(self):
        p = KahlerParams(m=2, kappa1=0.25, kappa2=1.0)
        sol = solve_dirichlet_first(differentiated_problem(li_wang_problem(p, 1.4)), FD)
        assert np.min(sol.phi) >= -1e-7


class TestRefine:
    def test_richardson_order(self):
        prob = flat_problem(1.0)
        cfg = SolverConfig(mesh_points=65, rel_tol=0.9, max_refinements=0,
                           backend=Backend.FINITE_DIFFERENCE)
        sol = solve_neumann_first(prob, cfg)
        ests = [sol.est_error]
        for _ in range(2):
            sol = refine(sol, prob, cfg)
            ests.append(sol.est_error)
        for a, b in zip(ests, ests[1:]):
            assert 3.2 <= a / b <= 4.8

    def test_refine_improves(self):
        prob = li_wang_problem(KahlerParams(m=2, kappa1=0.5, kappa2=0.5), 1.2)
        cfg = SolverConfig(mesh_points=129, rel_tol=0.9, max_refinements=0,
                           backend=Backend.FINITE_DIFFERENCE)
        sol = solve_neumann_first(prob, cfg)
        ref = refine(sol, prob, cfg)
        assert ref.est_error < sol.est_error


class TestErrors:
    def test_wrong_bc(self):
        prob = flat_problem(1.0)
        with pytest.raises(DomainError):
            solve_dirichlet_first(prob, FD)
        with pytest.raises(DomainError):
            solve_neumann_first(differentiated_problem(prob), FD)

    def test_no_convergence(self):
        cfg = SolverConfig(mesh_points=17, rel_tol=1e-14, max_refinements=0,
                           backend=Backend.FINITE_DIFFERENCE)
        with pytest.raises(NoConvergence):
            solve_neumann_first(flat_problem(1.0), cfg)
