"""Monte Carlo first-passage oracle: determinism, exactness, coverage."""
import math

import numpy as np
import pytest

from phscale.errors import DomainError
from phscale.fluctuation import down_exit, down_exit_unbounded, up_exit
from phscale.mc import (
    HistogramEstimate,
    SimulationEstimate,
    simulate_overshoot_undershoot,
    simulate_two_sided_exit,
)
from phscale.models import EXP1, SnLevyModel, WEIBULL_FIT, builtin_model
from phscale.scale import build_scale

Q = 0.05


class TestEstimate:
    def test_from_sums(self):
        est = SimulationEstimate.from_sums(50.0, 30.0, 100, seed=7)
        assert est.value == pytest.approx(0.5)
        var = 30.0 / 100 - 0.25
        assert est.stderr == pytest.approx(math.sqrt(var / 100))
        assert est.ci95 == pytest.approx(
            (est.value - 1.96 * est.stderr, est.value + 1.96 * est.stderr)
        )

    def test_histogram_centers(self):
        h = HistogramEstimate(
            edges=np.array([0.0, 0.1, 0.2]),
            density=np.zeros(2), stderr=np.zeros(2), n_paths=1, seed=0,
        )
        assert h.centers == pytest.approx([0.05, 0.15])


class TestDeterminism:
    def test_bit_identical(self):
        m = builtin_model("exp1", sigma=1.0)
        a = simulate_two_sided_exit(m, Q, 2.0, 5.0, 30_000, seed=42)
        b = simulate_two_sided_exit(m, Q, 2.0, 5.0, 30_000, seed=42)
        assert a[0].value == b[0].value and a[1].value == b[1].value
        c = simulate_two_sided_exit(m, Q, 2.0, 5.0, 30_000, seed=43)
        assert c[0].value != a[0].value

    def test_batching_invariant(self):
        # the batch size is pinned, so total path count only appends batches:
        # the first-batch contribution is unchanged
        m = builtin_model("exp1", sigma=0.0)
        small, _ = simulate_two_sided_exit(m, Q, 2.0, 5.0, 20_000, seed=1)
        large, _ = simulate_two_sided_exit(m, Q, 2.0, 5.0, 40_000, seed=1)
        assert small.value != large.value  # second batch actually contributes
        assert abs(small.value - large.value) < 5 * small.stderr


class TestExactCases:
    def test_pure_drift(self):
        m = SnLevyModel(mu=1.0, sigma=0.0, lam=0.0, jumps=EXP1)
        up, down = simulate_two_sided_exit(m, Q, 2.0, 5.0, 1000, seed=0)
        assert up.value == pytest.approx(math.exp(-Q * 3.0), rel=1e-14)
        # stderr is zero up to rounding in the sum-of-squares accumulator
        assert up.stderr == pytest.approx(0.0, abs=1e-8)
        assert down.value == 0.0

    def test_start_at_barrier(self):
        m = builtin_model("exp1", sigma=1.0)
        up, down = simulate_two_sided_exit(m, Q, 5.0, 5.0, 100, seed=0)
        assert up.value == 1.0 and down.value == 0.0


class TestAgainstClosedForm:
    @pytest.mark.parametrize("sigma", [0.0, 1.0])
    def test_exit_ci_contains_analytic(self, sigma, scales):
        sf = scales[("exp1", sigma)]
        m = builtin_model("exp1", sigma=sigma)
        up, down = simulate_two_sided_exit(m, Q, 2.0, 5.0, 100_000, seed=3)
        lo, hi = up.ci95
        assert lo <= up_exit(sf, 2.0, 5.0) <= hi
        lo, hi = down.ci95
        assert lo <= down_exit(sf, 2.0, 5.0) <= hi

    def test_ci_coverage(self, scales):
        """95% CIs over 100 independent seeds cover the analytic value at
        least 88 times (binomial slack below the nominal 95)."""
        sf = scales[("exp1", 0.0)]
        target = up_exit(sf, 2.0, 5.0)
        m = builtin_model("exp1", sigma=0.0)
        hits = 0
        for seed in range(100):
            up, _ = simulate_two_sided_exit(m, Q, 2.0, 5.0, 20_000, seed=seed)
            if up.ci95[0] <= target <= up.ci95[1]:
                hits += 1
        assert hits >= 88

    def test_discretization_sensitivity(self, scales):
        # halving the time step moves the sigma = 1 estimate by < 2 stderr
        m = builtin_model("exp1", sigma=1.0)
        coarse, _ = simulate_two_sided_exit(m, Q, 2.0, 5.0, 100_000, seed=5)
        fine, _ = simulate_two_sided_exit(
            m, Q, 2.0, 5.0, 100_000, seed=5, substeps=200
        )
        assert abs(coarse.value - fine.value) < 2 * coarse.stderr


@pytest.fixture(scope="module")
def hists():
    m = builtin_model("exp1", sigma=0.0, mu=1.0, lam=10.0)
    return simulate_overshoot_undershoot(m, Q, 5.0, 0.1, 100_000, seed=11)


class TestHistograms:
    def test_total_mass_identity(self, hists):
        # sigma = 0: total discounted overshoot mass = Z(x) - (q/zeta) W(x)
        m = builtin_model("exp1", sigma=0.0, mu=1.0, lam=10.0)
        sf = build_scale(m, Q)
        target = down_exit_unbounded(sf, 5.0)
        oh, _ = hists
        mass = float(np.sum(oh.density)) * 0.1
        se = math.sqrt(float(np.sum(oh.stderr**2))) * 0.1
        assert abs(mass - target) < 4 * se + 1e-3  # a_max tail truncation

    def test_undershoot_jump_at_x(self, hists):
        # sigma = 0: visible density jump at the starting level x = 5
        _, uh = hists
        centers = uh.centers
        below = float(uh.density[np.argmin(np.abs(centers - 4.85))])
        above = float(uh.density[np.argmin(np.abs(centers - 5.15))])
        assert above > 1.5 * below

    def test_determinism(self):
        m = builtin_model("exp1", sigma=0.0, mu=1.0, lam=10.0)
        a = simulate_overshoot_undershoot(m, Q, 5.0, 0.1, 20_000, seed=2)
        b = simulate_overshoot_undershoot(m, Q, 5.0, 0.1, 20_000, seed=2)
        assert np.array_equal(a[0].density, b[0].density)
        assert np.array_equal(a[1].density, b[1].density)

    def test_ph_jump_sampling(self):
        # phase-type sampler: same law as the hyperexponential one
        m_he = builtin_model("exp1", sigma=0.0)
        m_ph = SnLevyModel(mu=5.0, sigma=0.0, lam=5.0, jumps=EXP1.as_phase_type())
        a, _ = simulate_two_sided_exit(m_he, Q, 2.0, 5.0, 50_000, seed=9)
        b, _ = simulate_two_sided_exit(m_ph, Q, 2.0, 5.0, 50_000, seed=9)
        assert abs(a.value - b.value) < 3 * math.hypot(a.stderr, b.stderr)


class TestDomainChecks:
    def test_exit_domain(self):
        m = builtin_model("exp1")
        with pytest.raises(DomainError):
            simulate_two_sided_exit(m, Q, 6.0, 5.0, 10, seed=0)
        with pytest.raises(DomainError):
            simulate_two_sided_exit(m, Q, 1.0, 5.0, 0, seed=0)
        with pytest.raises(DomainError):
            simulate_two_sided_exit(m, 0.0, 1.0, 5.0, 10, seed=0)

    def test_histogram_domain(self):
        m = builtin_model("exp1")
        with pytest.raises(DomainError):
            simulate_overshoot_undershoot(m, Q, 0.0, 0.1, 10, seed=0)
        with pytest.raises(DomainError):
            simulate_overshoot_undershoot(m, Q, 1.0, 0.0, 10, seed=0)
