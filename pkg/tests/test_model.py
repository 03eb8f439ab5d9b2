import math

import pytest

from spectral_gap.coeffs import DriftSpec
from spectral_gap.errors import DomainError, InvalidDiameter
from spectral_gap.model import (
    BC,
    KahlerParams,
    ModelProblem,
    RiemannParams,
    differentiated_problem,
    kroger_problem,
    li_wang_problem,
    max_admissible_diameter,
)


class TestParams:
    def test_kahler_validation(self):
        with pytest.raises(DomainError):
            KahlerParams(m=0, kappa1=0.0, kappa2=0.0)
        with pytest.raises(DomainError):
            KahlerParams(m=2, kappa1=math.inf, kappa2=0.0)

    def test_curvature_combination(self):
        p = KahlerParams(m=3, kappa1=0.5, kappa2=-1.0)
        assert p.curvature_combination == pytest.approx(-1.0)

    def test_riemann_validation(self):
        with pytest.raises(DomainError):
            RiemannParams(n=1, K=1.0)
        RiemannParams(n=2, K=-1.0)


class TestLiWang:
    def test_drift_spec(self):
        p = KahlerParams(m=2, kappa1=0.25, kappa2=1.0)
        prob = li_wang_problem(p, 1.0)
        assert prob.bc is BC.NEUMANN
        assert not prob.has_potential
        assert prob.spec == DriftSpec([(2.0, 1.0), (1.0, 1.0)])

    def test_m1_drops_kappa2_term(self):
        p = KahlerParams(m=1, kappa1=0.0, kappa2=7.0)
        assert li_wang_problem(p, 1.0).spec == DriftSpec([])

    def test_matches_kroger_after_merge(self):
        # m=2, kappa1 = kappa2/4 merges into a single 3*T_{kappa2} term,
        # identical to the Riemannian spec with n=4, K=kappa2.
        p = KahlerParams(m=2, kappa1=0.25, kappa2=1.0)
        r = RiemannParams(n=4, K=1.0)
        assert li_wang_problem(p, 1.0).spec == kroger_problem(r, 1.0).spec

    def test_admissibility_threshold(self):
        p = KahlerParams(m=2, kappa1=1.0, kappa2=1.0)
        with pytest.raises(InvalidDiameter) as exc:
            li_wang_problem(p, math.pi / 2)
        assert exc.value.max_diameter == pytest.approx(math.pi / 2)
        li_wang_problem(p, 0.99 * math.pi / 2)

    def test_negative_curvature_always_admissible(self):
        p = KahlerParams(m=3, kappa1=-2.0, kappa2=-1.0)
        prob = li_wang_problem(p, 50.0)
        assert not prob.near_singular
        assert max_admissible_diameter(prob.spec) == math.inf


class TestKroger:
    def test_drift_spec(self):
        prob = kroger_problem(RiemannParams(n=3, K=1.0), 2.0)
        assert prob.spec == DriftSpec([(2.0, 1.0)])
        assert max_admissible_diameter(prob.spec) == pytest.approx(math.pi)

    def test_near_singular_flag(self):
        r = RiemannParams(n=3, K=1.0)
        assert kroger_problem(r, math.pi * (1 - 1e-6)).near_singular
        assert not kroger_problem(r, math.pi * 0.9).near_singular


class TestDifferentiated:
    def test_flips_bc_and_adds_potential(self):
        p = KahlerParams(m=2, kappa1=0.25, kappa2=1.0)
        neu = li_wang_problem(p, 1.2)
        dir_ = differentiated_problem(neu)
        assert dir_.bc is BC.DIRICHLET
        assert dir_.has_potential
        assert dir_.spec == neu.spec
        assert dir_.D == neu.D

    def test_zeroth_order_coefficient_at_center(self):
        from spectral_gap.coeffs import potential

        p = KahlerParams(m=2, kappa1=0.25, kappa2=1.0)
        dir_ = differentiated_problem(li_wang_problem(p, 1.2))
        # sum_i mult_i * K_i = 2*1 + 1*1 at x = 0 after merging (3, 1.0)
        assert potential(dir_.spec, 0.0) == pytest.approx(3.0)

    def test_rejects_dirichlet_input(self):
        prob = ModelProblem(spec=DriftSpec([]), D=1.0, bc=BC.DIRICHLET)
        with pytest.raises(DomainError):
            differentiated_problem(prob)


class TestModelProblem:
    def test_bad_diameter(self):
        with pytest.raises(DomainError):
            ModelProblem(spec=DriftSpec([]), D=-1.0)
        with pytest.raises(DomainError):
            ModelProblem(spec=DriftSpec([]), D=math.nan)

    def test_half_length(self):
        assert ModelProblem(spec=DriftSpec([]), D=3.0).half_length == 1.5
