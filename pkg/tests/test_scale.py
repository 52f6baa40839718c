"""Closed-form scale functions: boundary values, identities, calculus."""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from phscale.errors import DomainError
from phscale.models import EXP1, SnLevyModel, builtin_model
from phscale.scale import ExpPolySum, boundary_identities, build_scale

Q = 0.05


class TestExpPolySum:
    @pytest.fixture()
    def f(self):
        # (2 + 3x) e^{-x} + (1 - x + x^2) e^{-0.3 x} + 0.5
        return ExpPolySum([
            (1.0, [2.0, 3.0]),
            (0.3, [1.0, -1.0, 1.0]),
            (0.0, [0.5]),
        ])

    def test_evaluation(self, f):
        x = 1.7
        expected = (
            (2 + 3 * x) * math.exp(-x)
            + (1 - x + x**2) * math.exp(-0.3 * x)
            + 0.5
        )
        assert f.eval_real(x) == pytest.approx(expected, rel=1e-14)

    def test_derivative_vs_finite_difference(self, f):
        g = f.derivative()
        h = 1e-6
        for x in (0.1, 1.0, 3.0):
            fd = (f.eval_real(x + h) - f.eval_real(x - h)) / (2 * h)
            assert g.eval_real(x) == pytest.approx(fd, rel=1e-8)

    def test_integral_vs_quadrature(self, f):
        for x in (0.5, 2.0, 7.0):
            ref, _ = quad(f.eval_real, 0.0, x)
            assert complex(f.integral0(x)).real == pytest.approx(ref, rel=1e-10)

    def test_integral_at_zero(self, f):
        assert complex(f.integral0(0.0)) == pytest.approx(0.0, abs=1e-15)

    def test_conjugate_pair_is_real(self):
        f = ExpPolySum([(1 + 2j, [0.5 - 0.25j]), (1 - 2j, [0.5 + 0.25j])])
        for x in (0.0, 0.7, 3.0):
            v = f.eval_real(x)  # would raise on an imaginary residue
            assert np.isfinite(v)


class TestBoundaryValues:
    def test_case2_exact(self):
        sf = build_scale(builtin_model("exp1", sigma=0.0), Q)
        assert sf.w0 == pytest.approx(0.2, abs=1e-12)
        assert sf.wp0 == pytest.approx(0.202, abs=1e-12)
        assert sf.w(0.0) == pytest.approx(0.2, abs=1e-9)

    def test_case1_exact(self):
        sf = build_scale(builtin_model("exp1", sigma=1.0), Q)
        assert sf.w0 == pytest.approx(0.0, abs=1e-12)
        assert sf.wp0 == pytest.approx(2.0, abs=1e-12)
        assert sf.w(0.0) == pytest.approx(0.0, abs=1e-9)

    def test_wp0_is_small_x_limit(self, scales):
        for sf in scales.values():
            assert sf.w_prime(1e-9) == pytest.approx(sf.wp0, rel=1e-6)


class TestEvaluation:
    def test_zero_below_origin(self, scales):
        for sf in scales.values():
            assert sf.w(-1.0) == 0.0
            assert sf.z(-1.0) == 1.0
            assert sf.z(0.0) == 1.0

    def test_w_nondecreasing(self, scales):
        grid = np.linspace(0.0, 10.0, 400)
        for sf in scales.values():
            vals = [sf.w(float(x)) for x in grid]
            assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_tilted_monotone_and_bounded(self, scales):
        grid = np.linspace(0.0, 30.0, 500)
        for sf in scales.values():
            vals = [sf.w_tilted(float(x)) for x in grid]
            limit = 1.0 / sf.psi_prime_zeta
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
            assert all(v <= limit * (1 + 1e-10) for v in vals)

    def test_asymptotics(self, scales):
        # the approach speed is e^{-(zeta+xi_1)x}; the Pareto fit's smallest
        # root ~6.6e-5 needs a larger x to damp below 1e-6
        for (name, sigma), sf in scales.items():
            x = 400.0 if name == "pareto-fit" else 200.0
            assert sf.w_tilted(x) * sf.psi_prime_zeta == pytest.approx(
                1.0, abs=1e-6
            )

    def test_w_prime_finite_difference(self, scales):
        h = 1e-6
        for sf in scales.values():
            for x in np.linspace(0.1, 5.0, 12):
                fd = (sf.w(float(x) + h) - sf.w(float(x) - h)) / (2 * h)
                assert sf.w_prime(float(x)) == pytest.approx(fd, rel=1e-6)

    def test_z_prime_is_q_w(self, scales):
        h = 1e-6
        for sf in scales.values():
            for x in (0.5, 2.0, 4.0):
                fd = (sf.z(x + h) - sf.z(x - h)) / (2 * h)
                assert fd == pytest.approx(Q * sf.w(x), rel=1e-6)

    def test_z_quadrature(self, scales):
        sf = scales[("weibull-fit", 1.0)]
        ref, _ = quad(sf.w, 0.0, 3.0)
        assert sf.z(3.0) == pytest.approx(1.0 + Q * ref, rel=1e-8)

    def test_log_w_overflow_safe(self, scales):
        sf = scales[("exp1", 1.0)]
        x = 10000.0  # e^{zeta x} would overflow
        logw = sf.log_w(x)
        assert logw == pytest.approx(
            sf.zeta * x - math.log(sf.psi_prime_zeta), rel=1e-9
        )
        assert sf.w(x) == math.inf

    def test_domain_errors(self, scales):
        sf = scales[("exp1", 1.0)]
        with pytest.raises(DomainError):
            sf.w_prime(0.0)
        with pytest.raises(DomainError):
            sf.w_tilted(-1.0)


class TestIdentities:
    def test_laplace_transform(self, scales, models):
        for key, sf in scales.items():
            m = models[key]
            for s in np.linspace(sf.zeta + 0.5, sf.zeta + 10.0, 20):
                target = 1.0 / (m.laplace_exponent(float(s)) - Q)
                assert sf.laplace_transform_w(float(s)) == pytest.approx(
                    target, rel=1e-8
                )

    def test_transform_domain(self, scales):
        sf = scales[("exp1", 1.0)]
        with pytest.raises(DomainError):
            sf.laplace_transform_w(sf.zeta)

    def test_sum_c(self, scales):
        for sf in scales.values():
            assert sf.sum_c_residual() < 1e-8

    def test_zeta_identity(self, scales):
        for sf in scales.values():
            rep = boundary_identities(sf)
            assert rep["zeta_identity_rel_err"] < 1e-8

    def test_complete_monotonicity_surrogate(self, scales):
        # distinct real roots: the tilted derivative is a positive mixture of
        # decaying exponentials, i.e. every C weight is nonnegative
        for sf in scales.values():
            assert sf.C is not None
            assert all(c >= 0 for c in sf.C)

    def test_w_prime_convex(self, scales):
        grid = np.linspace(0.05, 5.0, 200)
        for sf in scales.values():
            vals = np.array([sf.w_prime(float(x)) for x in grid])
            assert np.all(np.diff(vals, 2) >= -1e-9 * np.max(vals))

    def test_no_jump_diffusion(self):
        # lam = 0 degenerate: Brownian motion with drift still assembles
        m = SnLevyModel(mu=1.0, sigma=1.0, lam=0.0, jumps=EXP1)
        sf = build_scale(m, Q)
        rep = boundary_identities(sf)
        assert rep["zeta_identity_rel_err"] < 1e-8
        for s in (sf.zeta + 1.0, sf.zeta + 5.0):
            assert sf.laplace_transform_w(s) == pytest.approx(
                1.0 / (m.laplace_exponent(s) - Q), rel=1e-8
            )


def test_build_scale_rejects_nonpositive_q():
    with pytest.raises(DomainError):
        build_scale(builtin_model("exp1"), 0.0)
