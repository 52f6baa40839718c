"""Model validation, Laplace exponents, and jump densities."""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from phscale.errors import (
    DomainError,
    NegativeSubordinator,
    NonIncreasingRates,
    PoleEvaluation,
    SimplexViolation,
    SingularGenerator,
)
from phscale.models import (
    CASE1,
    CASE2,
    EXP1,
    HyperExpDist,
    PARETO_FIT,
    PhaseTypeRepr,
    SnLevyModel,
    WEIBULL_FIT,
    builtin_model,
    load_model_file,
    validate_model,
)


# The single-rate benchmark: mu=5, sigma=0, lambda=5, Exp(1) jumps gives
# psi(s) = 5s - 5s/(1+s), so psi(1) = 2.5 and psi'(1) = 5 - 5/4 = 3.75.
M1 = SnLevyModel(mu=5.0, sigma=0.0, lam=5.0, jumps=EXP1)


class TestValidation:
    def test_case1_classification(self):
        m = validate_model(
            {"drift": 5, "sigma": 1, "lambda": 5,
             "jump": {"type": "hyperexp", "p": [1.0], "eta": [1.0]}}
        )
        assert m.case == CASE1

    def test_case2_classification(self):
        m = SnLevyModel(mu=5.0, sigma=0.0, lam=5.0, jumps=EXP1)
        assert m.case == CASE2

    def test_negative_subordinator_rejected(self):
        with pytest.raises(NegativeSubordinator):
            SnLevyModel(mu=-1.0, sigma=0.0, lam=5.0, jumps=EXP1)
        with pytest.raises(NegativeSubordinator):
            SnLevyModel(mu=1.0, sigma=-0.5, lam=5.0, jumps=EXP1)

    def test_simplex_violation(self):
        with pytest.raises(SimplexViolation):
            HyperExpDist(p=(0.5, 0.3), eta=(1.0, 2.0))

    def test_nonincreasing_rates(self):
        with pytest.raises(NonIncreasingRates):
            HyperExpDist(p=(0.5, 0.5), eta=(2.0, 1.0))

    def test_singular_generator(self):
        with pytest.raises(SingularGenerator):
            PhaseTypeRepr(alpha=(1.0, 0.0), T=((-1.0, 1.0), (0.0, 1.0)))

    def test_ph_alpha_simplex(self):
        with pytest.raises(SimplexViolation):
            PhaseTypeRepr(alpha=(0.5, 0.2), T=((-1.0, 0.0), (0.0, -2.0)))

    def test_unknown_jump_type(self):
        with pytest.raises(DomainError):
            validate_model(
                {"drift": 1, "sigma": 1, "lambda": 1, "jump": {"type": "gamma"}}
            )

    def test_missing_field(self):
        with pytest.raises(DomainError):
            validate_model({"drift": 1, "sigma": 1})

    def test_fitted_weights_accepted_verbatim(self):
        # the fitted weight vectors sum to 1 only to ~6 decimals
        assert WEIBULL_FIT.m == 6
        assert PARETO_FIT.m == 14

    def test_load_model_file(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(
            '{"drift": 5, "sigma": 0, "lambda": 5,'
            ' "jump": {"type": "hyperexp", "p": [1.0], "eta": [1.0]}}'
        )
        m = load_model_file(str(path))
        assert m.case == CASE2
        assert m.jumps == EXP1


class TestJumpDensity:
    def test_exp1_ph_density_at_zero(self):
        ph = PhaseTypeRepr(alpha=(1.0,), T=((-1.0,),))
        assert ph.density(0.0) == pytest.approx(1.0)

    def test_weibull_density_at_zero(self):
        expected = sum(p * e for p, e in zip(WEIBULL_FIT.p, WEIBULL_FIT.eta))
        assert WEIBULL_FIT.density(0.0) == pytest.approx(expected, rel=1e-12)

    def test_negative_argument(self):
        assert WEIBULL_FIT.density(-1.0) == 0.0
        ph = PhaseTypeRepr(alpha=(1.0,), T=((-1.0,),))
        assert ph.density(-1.0) == 0.0

    @pytest.mark.parametrize("jumps", [EXP1, WEIBULL_FIT, PARETO_FIT])
    def test_density_integrates_to_one(self, jumps):
        # the slowest Pareto-fit rate is 8.3e-9, so split the integral
        total, _ = quad(jumps.density, 0.0, np.inf, limit=400)
        mass = sum(jumps.p)  # fitted tables are not exactly normalized
        assert total == pytest.approx(mass, abs=1e-6)

    def test_ph_density_matches_hyperexp(self):
        ph = WEIBULL_FIT.as_phase_type()
        for z in (0.0, 0.1, 1.0, 5.0):
            assert ph.density(z) == pytest.approx(WEIBULL_FIT.density(z), rel=1e-10)

    def test_means_agree(self):
        assert WEIBULL_FIT.as_phase_type().mean() == pytest.approx(
            WEIBULL_FIT.mean(), rel=1e-10
        )


class TestLaplaceExponent:
    def test_psi_zero_is_zero(self, models):
        for m in models.values():
            assert m.laplace_exponent(0.0) == pytest.approx(0.0, abs=1e-14)

    def test_hand_value(self):
        assert M1.laplace_exponent(1.0) == pytest.approx(2.5, rel=1e-14)

    def test_pole_rejected(self):
        with pytest.raises(PoleEvaluation):
            M1.laplace_exponent(-1.0)

    def test_convexity(self, models):
        grid = np.linspace(0.0, 4.0, 60)
        for m in models.values():
            vals = np.array([m.laplace_exponent(float(s)) for s in grid])
            assert np.all(np.diff(vals, 2) > 0)

    def test_ph_equals_hyperexp(self):
        he = builtin_model("weibull-fit", sigma=1.0)
        ph = SnLevyModel(mu=5.0, sigma=1.0, lam=5.0,
                         jumps=WEIBULL_FIT.as_phase_type())
        for s in np.linspace(0.1, 10.0, 25):
            a = he.laplace_exponent(float(s))
            b = ph.laplace_exponent(float(s))
            assert b == pytest.approx(a, rel=1e-12)

    def test_no_jumps(self):
        m = SnLevyModel(mu=2.0, sigma=1.0, lam=0.0, jumps=EXP1)
        assert m.laplace_exponent(3.0) == pytest.approx(2 * 3 + 0.5 * 9)
        assert m.levy_mass == 0.0
        with pytest.raises(DomainError):
            m.jump_density(1.0)


class TestDerivative:
    def test_pure_drift(self):
        m = SnLevyModel(mu=2.0, sigma=0.0, lam=0.0, jumps=EXP1)
        assert m.laplace_exponent_derivative(3.0) == pytest.approx(2.0)

    def test_hand_value(self):
        assert M1.laplace_exponent_derivative(1.0) == pytest.approx(3.75, rel=1e-14)

    def test_finite_difference(self, models):
        h = 1e-6
        for m in models.values():
            for s in (0.5, 1.0, 2.0, 5.0):
                fd = (m.laplace_exponent(s + h) - m.laplace_exponent(s - h)) / (2 * h)
                assert m.laplace_exponent_derivative(s) == pytest.approx(
                    fd, rel=1e-5, abs=1e-6
                )

    def test_ph_derivative_matches_hyperexp(self):
        he = builtin_model("exp1", sigma=1.0)
        ph = SnLevyModel(mu=5.0, sigma=1.0, lam=5.0, jumps=EXP1.as_phase_type())
        for s in (0.3, 1.0, 4.0):
            assert ph.laplace_exponent_derivative(s) == pytest.approx(
                he.laplace_exponent_derivative(s), rel=1e-12
            )


def test_builtin_unknown_name():
    with pytest.raises(DomainError):
        builtin_model("cauchy")


def test_levy_mass_tracks_weight_deficit():
    m = builtin_model("pareto-fit", sigma=0.0)
    assert m.levy_mass == pytest.approx(5.0 * sum(PARETO_FIT.p), rel=1e-14)
    assert m.levy_mass < 5.0  # the fitted weights sum to slightly less than 1
