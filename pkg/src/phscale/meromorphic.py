"""Scale-function bounds for the meromorphic beta-family.

The Laplace exponent is ``psi(z) = mu_hat*z + sigma^2 z^2/2
+ (c/beta) { B(alpha + z/beta, 1-lam) - B(alpha, 1-lam) }`` with beta function
B.  Its poles sit at -eta_k with eta_k = beta*(alpha + k - 1), the negative
roots of psi(s) = q interlace them, and the scale function is a countable
exponential sum which we sandwich between finite-sum bounds with an explicit
truncation gap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import digamma, gammaln, gammasgn

from .errors import (
    BracketingFailure,
    DomainError,
    NegativeSubordinator,
    PoleEvaluation,
    UnsupportedRegime,
)

_POLE_TOL = 1e-12
_BRENTQ_RTOL = 4 * np.finfo(float).eps


def _signed_log_beta(x: float, y: float) -> Tuple[float, float]:
    """(sign, log|B(x, y)|) valid for any real non-pole arguments."""
    for arg in (x, y):
        if arg <= 0 and abs(arg - round(arg)) < _POLE_TOL * (1.0 + abs(arg)):
            raise PoleEvaluation(f"gamma pole at {arg}")
    sign = gammasgn(x) * gammasgn(y) * gammasgn(x + y)
    return float(sign), float(gammaln(x) + gammaln(y) - gammaln(x + y))


def _beta_fn(x: float, y: float) -> float:
    sign, logb = _signed_log_beta(x, y)
    return sign * math.exp(logb)


@dataclass(frozen=True)
class BetaFamilyParams:
    """Beta-family parameters; ``lam`` is the stability index in (0, 3),
    not a Poisson rate."""

    mu_hat: float
    sigma: float
    alpha_b: float
    beta_b: float
    c: float
    lam: float

    def __post_init__(self):
        if self.sigma < 0:
            raise NegativeSubordinator("sigma must be >= 0")
        if self.alpha_b <= 0 or self.beta_b <= 0 or self.c < 0:
            raise DomainError("need alpha > 0, beta > 0, c >= 0")
        if not (0 < self.lam < 3):
            raise DomainError("stability index must lie in (0, 3)")

    def levy_density(self, x: float) -> float:
        """c e^{alpha beta x} / (1 - e^{beta x})^lam for x < 0."""
        if x >= 0:
            return 0.0
        a, b = self.alpha_b, self.beta_b
        return self.c * math.exp(a * b * x) / (1.0 - math.exp(b * x)) ** self.lam


def cgmy_levy_density(tilde_c: float, tilde_alpha: float, lam: float, x: float) -> float:
    """Spectrally negative tempered-stable density c~ e^{alpha~ x}/|x|^lam, x < 0."""
    if x >= 0:
        return 0.0
    return tilde_c * math.exp(tilde_alpha * x) / abs(x) ** lam


def beta_psi(params: BetaFamilyParams, s: float) -> float:
    """Laplace exponent of the beta-family at real s."""
    p = params
    base = p.mu_hat * s + 0.5 * p.sigma**2 * s**2
    if p.c == 0:
        return base
    b1 = _beta_fn(p.alpha_b + s / p.beta_b, 1.0 - p.lam)
    b0 = _beta_fn(p.alpha_b, 1.0 - p.lam)
    return base + (p.c / p.beta_b) * (b1 - b0)


def beta_psi_derivative(params: BetaFamilyParams, s: float) -> float:
    """psi'(s) via digamma differentiation of the beta term."""
    p = params
    base = p.mu_hat + p.sigma**2 * s
    if p.c == 0:
        return base
    x = p.alpha_b + s / p.beta_b
    y = 1.0 - p.lam
    b1 = _beta_fn(x, y)
    return base + (p.c / p.beta_b**2) * b1 * (digamma(x) - digamma(x + y))


def beta_poles(params: BetaFamilyParams, k: int) -> float:
    """eta_k = beta*(alpha + k - 1), the k-th pole magnitude (k >= 1)."""
    if k < 1:
        raise DomainError("pole index starts at 1")
    return params.beta_b * (params.alpha_b + k - 1)


def _find_zeta_beta(params: BetaFamilyParams, q: float) -> float:
    psi = lambda s: beta_psi(params, s) - q
    hi = 1.0
    for _ in range(200):
        if psi(hi) > 0:
            break
        hi *= 2.0
    else:
        raise BracketingFailure("could not bracket the positive root")
    zeta = brentq(psi, 0.0, hi, xtol=1e-14, rtol=_BRENTQ_RTOL)
    return float(zeta)


def _bisect_in(params: BetaFamilyParams, q: float, lo: float, hi: float) -> float:
    """Root of psi(-s) = q inside the pole gap (lo, hi), creeping toward the
    endpoints until a sign change appears."""
    f = lambda s: beta_psi(params, -s) - q
    width = hi - lo
    d = 0.25 * width
    for _ in range(60):
        a, b = lo + d, hi - d
        if a < b and np.sign(f(a)) != np.sign(f(b)):
            return float(brentq(f, a, b, xtol=1e-30, rtol=_BRENTQ_RTOL))
        d /= 8.0
        if d < 8 * np.finfo(float).eps * hi:
            break
    raise BracketingFailure(f"no sign change in ({lo}, {hi})")


def mero_roots(params: BetaFamilyParams, q: float, m: int) -> Tuple[float, np.ndarray]:
    """(zeta_q, xi_{1..m+1}) with xi_k bracketed in (eta_{k-1}, eta_k)."""
    if q <= 0:
        raise DomainError("q must be > 0")
    if m < 1:
        raise DomainError("m must be >= 1")
    zeta = _find_zeta_beta(params, q)
    etas = [beta_poles(params, k) for k in range(1, m + 2)]
    xis = []
    lo = 0.0
    for eta in etas:
        xis.append(_bisect_in(params, q, lo, eta))
        lo = eta
    xis = np.asarray(xis)
    for k in range(m + 1):
        lo_pole = etas[k - 1] if k > 0 else 0.0
        if not (lo_pole < xis[k] < etas[k]):
            raise BracketingFailure("interlacing violated")
    return zeta, xis


@dataclass(frozen=True)
class TruncatedMero:
    """m-truncated root/coefficient system with the truncation gaps that
    control every bound: delta for W/Z, epsilon for the derivative refinement."""

    params: BetaFamilyParams
    q: float
    m: int
    zeta: float
    xi: Tuple[float, ...]  # xi_1 .. xi_{m+1}
    eta: Tuple[float, ...]  # eta_1 .. eta_m
    A_trunc: Tuple[float, ...]
    C_trunc: Tuple[float, ...]
    psi_prime_zeta: float
    w0: float
    gamma: float
    delta: float
    theta: Optional[float]
    epsilon: Optional[float]


def _w_zero(params: BetaFamilyParams) -> float:
    """W^{(q)}(0) = W_{zeta}(0) from the small-scale behavior of the process."""
    if params.sigma > 0:
        return 0.0
    if params.lam >= 2:
        raise UnsupportedRegime(
            "sigma = 0 with stability index >= 2 (unbounded variation) unsupported"
        )
    if params.mu_hat <= 0:
        raise NegativeSubordinator("sigma = 0 requires positive drift")
    return 1.0 / params.mu_hat


def truncated_coefficients(params: BetaFamilyParams, q: float, m: int) -> TruncatedMero:
    """Finite-product coefficients A^{(m)}, C^{(m)} and the gaps delta_m,
    epsilon_m."""
    w0 = _w_zero(params)  # validates the sigma = 0 regime before root search
    zeta, xis = mero_roots(params, q, m)
    etas = np.array([beta_poles(params, k) for k in range(1, m + 1)])
    A = np.empty(m)
    for i in range(m):
        xi = xis[i]
        val = 1.0 - xi / etas[i]
        for j in range(m):
            if j == i:
                continue
            val *= (1.0 - xi / etas[j]) / (1.0 - xi / xis[j])
        A[i] = val
    C = (zeta / q) * xis[:m] * A / (zeta + xis[:m])
    ppz = beta_psi_derivative(params, zeta)
    gamma = 1.0 / ppz - w0
    delta = gamma - float(C.sum())
    if params.sigma > 0:
        theta: Optional[float] = 2.0 / params.sigma**2
    elif params.lam < 1:
        # finite total jump mass: (c/beta) B(alpha, 1-lam)
        mass = (params.c / params.beta_b) * _beta_fn(params.alpha_b, 1.0 - params.lam)
        theta = -zeta / params.mu_hat + (q + mass) / params.mu_hat**2
    else:
        theta = None  # infinite jump measure, sum A_i xi_i diverges
    epsilon = None
    if theta is not None:
        epsilon = theta - (zeta / q) * float(np.sum(xis[:m] * A))
    return TruncatedMero(
        params=params,
        q=q,
        m=m,
        zeta=zeta,
        xi=tuple(xis),
        eta=tuple(etas),
        A_trunc=tuple(A),
        C_trunc=tuple(C),
        psi_prime_zeta=ppz,
        w0=w0,
        gamma=gamma,
        delta=delta,
        theta=theta,
        epsilon=epsilon,
    )


def w_bounds(tm: TruncatedMero, x: float) -> Tuple[float, float]:
    """(lower, upper) sandwich of W^{(q)}(x); gap = delta_m (1 + e^{-xi_{m+1} x})."""
    if x < 0:
        raise DomainError("x must be >= 0")
    xi = np.asarray(tm.xi[: tm.m])
    C = np.asarray(tm.C_trunc)
    upper = math.exp(tm.zeta * x) / tm.psi_prime_zeta - float(
        np.sum(C * np.exp(-xi * x))
    )
    lower = upper - tm.delta * (1.0 + math.exp(-tm.xi[tm.m] * x))
    return lower, upper


def w_tilted_bounds(tm: TruncatedMero, x: float) -> Tuple[float, float]:
    """Bounds on the tilted scale function e^{-zeta x} W^{(q)}(x)."""
    lo, hi = w_bounds(tm, x)
    damp = math.exp(-tm.zeta * x)
    return lo * damp, hi * damp


def z_bounds(tm: TruncatedMero, x: float) -> Tuple[float, float]:
    """(lower, upper) for Z^{(q)}(x) by exact integration of the W bounds."""
    if x < 0:
        raise DomainError("x must be >= 0")
    if x == 0:
        return 1.0, 1.0
    xi = np.asarray(tm.xi[: tm.m])
    C = np.asarray(tm.C_trunc)
    int_upper = math.expm1(tm.zeta * x) / (tm.zeta * tm.psi_prime_zeta) - float(
        np.sum(C * (1.0 - np.exp(-xi * x)) / xi)
    )
    upper = 1.0 + tm.q * int_upper
    xm1 = tm.xi[tm.m]
    gap = tm.q * tm.delta * (x + (1.0 - math.exp(-xm1 * x)) / xm1)
    return upper - gap, upper


def _tail_sup(xi_next: float, x: float) -> float:
    """sup over k >= m+1 of xi_k e^{-xi_k x} given the smallest tail root."""
    if xi_next <= 1.0 / x:
        return 1.0 / (math.e * x)
    return xi_next * math.exp(-xi_next * x)


def w_prime_bounds(tm: TruncatedMero, x: float) -> Tuple[float, float]:
    """(lower, upper) for the derivative of the scale function at x > 0."""
    if x <= 0:
        raise DomainError("x must be > 0")
    xi = np.asarray(tm.xi[: tm.m])
    C = np.asarray(tm.C_trunc)
    lower = tm.zeta * math.exp(tm.zeta * x) / tm.psi_prime_zeta + float(
        np.sum(C * xi * np.exp(-xi * x))
    )
    head_sup = float(np.max(xi * np.exp(-xi * x)))
    upper = lower + (head_sup + _tail_sup(tm.xi[tm.m], x)) * tm.delta
    if tm.epsilon is not None:
        refined = lower + head_sup * tm.delta + math.exp(-tm.xi[tm.m] * x) * tm.epsilon
        upper = min(upper, refined)
    return lower, upper


def cgmy_params(
    base: BetaFamilyParams, tilde_alpha: float, tilde_c: float, beta: float
) -> BetaFamilyParams:
    """Beta-family member approximating the tempered-stable target:
    c = c~ beta^lam, alpha = alpha~ / beta."""
    return BetaFamilyParams(
        mu_hat=base.mu_hat,
        sigma=base.sigma,
        alpha_b=tilde_alpha / beta,
        beta_b=beta,
        c=tilde_c * beta**base.lam,
        lam=base.lam,
    )


def cgmy_limit_study(
    base: BetaFamilyParams,
    tilde_alpha: float,
    tilde_c: float,
    betas: Sequence[float],
    q: float,
    m: int,
    grid: Sequence[float],
) -> dict:
    """Bound curves for a decreasing sequence of beta values plus convergence
    diagnostics (sup-norm differences of successive upper/lower curves)."""
    betas = list(betas)
    if any(b <= 0 for b in betas) or any(
        b2 >= b1 for b1, b2 in zip(betas, betas[1:])
    ):
        raise DomainError("betas must be positive and strictly decreasing")
    grid = np.asarray(list(grid), dtype=float)
    curves = {}
    for beta in betas:
        tm = truncated_coefficients(cgmy_params(base, tilde_alpha, tilde_c, beta), q, m)
        lo_up = np.array([w_bounds(tm, float(x)) for x in grid])
        curves[beta] = {"lower": lo_up[:, 0], "upper": lo_up[:, 1], "delta": tm.delta}
    sup_diffs = []
    for b1, b2 in zip(betas, betas[1:]):
        sup_diffs.append(
            {
                "beta_pair": (b1, b2),
                "upper_sup_diff": float(
                    np.max(np.abs(curves[b1]["upper"] - curves[b2]["upper"]))
                ),
                "lower_sup_diff": float(
                    np.max(np.abs(curves[b1]["lower"] - curves[b2]["lower"]))
                ),
            }
        )
    return {"grid": grid, "curves": curves, "sup_diffs": sup_diffs}


# Benchmark beta-family scenario: infinite-activity, bounded-variation jumps
# with a small Gaussian part.
BETA_BENCHMARK = BetaFamilyParams(mu_hat=0.1, sigma=0.2, alpha_b=3.0, beta_b=1.0, c=0.1, lam=1.5)
BETA_BENCHMARK_Q = 0.03
