import math

import numpy as np
import pytest

from spectral_gap.errors import CertificateFailure, DomainError, PreconditionError
from spectral_gap.model import KahlerParams
from spectral_gap.verify import (
    QuadratureRule,
    check_int_part,
    check_sk_lower,
    check_wirtinger,
    replay_proof,
    require_pass,
    _simpson,
)

RULE_512 = QuadratureRule(panels=512)


def grid(D, panels):
    return np.linspace(-D / 2, D / 2, panels + 1)


class TestQuadratureRule:
    def test_validation(self):
        with pytest.raises(DomainError):
            QuadratureRule(kind="Trapezoid")
        with pytest.raises(DomainError):
            QuadratureRule(panels=513)
        with pytest.raises(DomainError):
            QuadratureRule(panels=4)

    def test_simpson_exact_on_cubics(self):
        x = np.linspace(0, 1, 9)
        assert _simpson(x ** 3, 0.125) == pytest.approx(0.25, rel=1e-14)

    def test_simpson_convergence_order(self):
        # error must drop by a factor >= 8 when doubling the panel count
        f = lambda x: np.exp(np.sin(x))
        exact, _ = _integral_ref(f, 0.0, 2.0)
        e_coarse = abs(_simpson(f(np.linspace(0, 2, 65)), 2 / 64) - exact)
        e_fine = abs(_simpson(f(np.linspace(0, 2, 129)), 2 / 128) - exact)
        assert e_coarse / e_fine >= 8.0


def _integral_ref(f, lo, hi):
    from scipy.integrate import quad

    return quad(f, lo, hi, epsabs=1e-13, epsrel=1e-13)


class TestIntPart:
    def test_flat_parabola(self):
        # K = 0: both sides vanish identically
        D = 2.0
        x = grid(D, 512)
        v = D ** 2 / 4 - x ** 2
        assert check_int_part(v, D, 0.0, 2.0, RULE_512) <= 1e-6

    def test_negative_curvature_cosine(self):
        D = 2.0
        x = grid(D, 512)
        v = np.cos(math.pi * x / D)
        assert check_int_part(v, D, -1.0, 2.0, RULE_512) <= 1e-6

    def test_positive_curvature_quartic(self):
        D = 2.0
        x = grid(D, 512)
        v = (D ** 2 / 4 - x ** 2) ** 2
        assert check_int_part(v, D, 1.0, 3.0, RULE_512) <= 1e-6

    def test_rejects_nonvanishing_boundary(self):
        x = grid(2.0, 512)
        with pytest.raises(PreconditionError):
            check_int_part(np.ones_like(x), 2.0, 0.0, 2.0, RULE_512)

    def test_rejects_bad_exponent(self):
        x = grid(2.0, 512)
        v = 1.0 - x ** 2
        with pytest.raises(DomainError):
            check_int_part(v, 2.0, 0.0, 1.0, RULE_512)

    def test_rejects_wrong_sample_count(self):
        with pytest.raises(DomainError):
            check_int_part(np.zeros(100), 2.0, 0.0, 2.0, RULE_512)


class TestSkLower:
    @pytest.mark.parametrize("K,D", [(-2.0, 4.0), (-1.0, 4.0), (0.0, 4.0),
                                     (1.0, 3.0), (4.0, 1.5)])
    def test_nonnegative(self, K, D):
        assert check_sk_lower(K, D, RULE_512) >= -1e-12

    def test_zero_at_center_flat(self):
        assert check_sk_lower(0.0, 2.0, RULE_512) == 0.0


class TestWirtinger:
    def test_equality_case(self):
        # f = sin(pi x / L) on [0, L] saturates the inequality
        L = 2.0
        x = np.linspace(0, L, 513)
        slack = check_wirtinger(np.sin(math.pi * x / L), L, RULE_512)
        assert abs(slack) <= 1e-9 * L

    def test_strict_case(self):
        # f = sin(2 pi x / L): slack = (L^2/pi^2)(4 pi^2/L^2)(L/2) - L/2 = 3L/2
        L = 2.0
        x = np.linspace(0, L, 513)
        slack = check_wirtinger(np.sin(2 * math.pi * x / L), L, RULE_512)
        assert slack == pytest.approx(1.5 * L, rel=1e-6)

    def test_rejects_nonvanishing_boundary(self):
        with pytest.raises(PreconditionError):
            check_wirtinger(np.ones(513), 2.0, RULE_512)


class TestReplay:
    @pytest.mark.parametrize("a", [1.5, 2.0, 8.0])
    def test_flat_passes(self, a):
        cert = replay_proof(KahlerParams(m=1, kappa1=0.0, kappa2=0.0), 2.0, a)
        assert cert.passed
        assert cert.s == pytest.approx(1.0 - 1.0 / a)
        require_pass(cert)

    def test_positive_curvature_passes(self):
        cert = replay_proof(KahlerParams(m=2, kappa1=1.0, kappa2=1.0), 1.2, 2.0)
        assert cert.passed
        assert cert.mu >= 0.0
        names = [st.name for st in cert.steps]
        assert names == [
            "power_integration_by_parts",
            "integral_balance",
            "rayleigh_inequality",
            "wirtinger_inequality",
            "closed_form_bound",
        ]

    def test_negative_curvature_passes(self):
        cert = replay_proof(KahlerParams(m=3, kappa1=-1.0, kappa2=-0.5), 1.5, 2.0)
        assert cert.passed

    def test_closed_form_step_dominated_by_mu(self):
        cert = replay_proof(KahlerParams(m=2, kappa1=0.5, kappa2=0.5), 1.3, 4.0)
        step = cert.steps[-1]
        assert step.name == "closed_form_bound"
        assert step.lhs <= cert.mu + step.tolerance

    def test_require_pass_raises_on_failure(self):
        # an absurdly tight tolerance forces a failing step
        cert = replay_proof(KahlerParams(m=2, kappa1=1.0, kappa2=1.0), 1.2, 2.0,
                            tol=1e-16)
        assert not cert.passed
        with pytest.raises(CertificateFailure) as exc:
            require_pass(cert)
        assert exc.value.step_name == cert.first_failure.name

    def test_rejects_bad_exponent(self):
        with pytest.raises(DomainError):
            replay_proof(KahlerParams(m=1, kappa1=0.0, kappa2=0.0), 2.0, 1.0)
