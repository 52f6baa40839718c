"""Closed-form scale functions assembled from Wiener-Hopf coefficients.

Everything is represented as a finite sum of polynomial-times-exponential
terms, so differentiation and integration are exact coefficient transforms:
no numerical differentiation or quadrature appears in the public path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, RepeatedRootsDetected
from .models import CASE1, CASE2, SnLevyModel
from .roots import RootDecomposition, find_roots
from .wiener_hopf import WhCoefficients, partial_fraction_coefficients

_IMAG_TOL = 1e-10
_EXP_LOG_GUARD = 700.0


class ExpPolySum:
    """f(x) = sum over terms of poly(x) * exp(-rate * x), complex coefficients."""

    def __init__(self, terms: Sequence[Tuple[complex, np.ndarray]]):
        self.terms = [(complex(r), np.asarray(c, dtype=complex)) for r, c in terms]

    def __call__(self, x: float) -> complex:
        out = 0.0 + 0.0j
        for r, c in self.terms:
            # Horner evaluation of the polynomial factor
            p = 0.0 + 0.0j
            for coef in c[::-1]:
                p = p * x + coef
            out += p * np.exp(-r * x)
        return out

    def eval_real(self, x: float) -> float:
        v = self(x)
        if abs(v.imag) > _IMAG_TOL * (1.0 + abs(v.real)):
            raise RepeatedRootsDetected(f"imaginary residue {v.imag} at x={x}")
        return float(v.real)

    def derivative(self) -> "ExpPolySum":
        out = []
        for r, c in self.terms:
            d = np.zeros(max(len(c), 1), dtype=complex)
            if len(c) > 1:
                d[: len(c) - 1] += np.arange(1, len(c)) * c[1:]
            d[: len(c)] -= r * c
            out.append((r, d))
        return ExpPolySum(out)

    def integral0(self, x: float) -> complex:
        """Exact integral over [0, x]."""
        out = 0.0 + 0.0j
        for r, c in self.terms:
            if r == 0:
                g = np.zeros(len(c) + 1, dtype=complex)
                g[1:] = c / np.arange(1, len(c) + 1)
                p = 0.0 + 0.0j
                for coef in g[::-1]:
                    p = p * x + coef
                out += p
                continue
            # solve g' - r g = c so that (g e^{-rx})' = c e^{-rx}
            g = np.zeros(len(c), dtype=complex)
            g[-1] = -c[-1] / r
            for j in range(len(c) - 2, -1, -1):
                g[j] = ((j + 1) * g[j + 1] - c[j]) / r
            p = 0.0 + 0.0j
            for coef in g[::-1]:
                p = p * x + coef
            out += p * np.exp(-r * x) - g[0]
        return out


@dataclass(frozen=True)
class ScaleFunction:
    """Assembled q-scale function of one model.

    ``terms`` holds (xi_i, k, weight) with weight =
    (zeta/q) A_i^(k) (xi_i/(zeta+xi_i))^k; ``lead`` is the coefficient of
    e^{zeta x} and coincides with 1/psi'(zeta) up to rounding.
    """

    q: float
    zeta: float
    psi_prime_zeta: Optional[float]
    case: str
    w0: float
    wp0: float
    theta: float
    lead: float
    terms: Tuple[Tuple[complex, int, complex], ...]
    C: Optional[Tuple[float, ...]]
    wh: WhCoefficients
    decomp: Optional[RootDecomposition]
    model: Optional[SnLevyModel]
    _tilted: ExpPolySum = field(repr=False, compare=False, default=None)
    _tilted_deriv: ExpPolySum = field(repr=False, compare=False, default=None)
    _untilted: ExpPolySum = field(repr=False, compare=False, default=None)

    # -- evaluation ---------------------------------------------------------

    def w_tilted(self, x: float) -> float:
        """W_{zeta}(x) = e^{-zeta x} W(x); bounded and nondecreasing."""
        if x < 0:
            raise DomainError("x must be >= 0")
        return self._tilted.eval_real(x)

    def w(self, x: float) -> float:
        """W(x); 0 on (-inf, 0)."""
        if x < 0:
            return 0.0
        if self.zeta * x > _EXP_LOG_GUARD:
            return math.inf
        return math.exp(self.zeta * x) * self._tilted.eval_real(x)

    def log_w(self, x: float) -> float:
        """log W(x), safe against overflow of the exponential envelope."""
        if x < 0:
            raise DomainError("x must be > 0")
        return self.zeta * x + math.log(self._tilted.eval_real(x))

    def w_prime(self, x: float) -> float:
        """W'(x) for x > 0 (the x -> 0+ limit is ``wp0``)."""
        if x <= 0:
            raise DomainError("x must be > 0")
        val = self.zeta * self._tilted.eval_real(x) + self._tilted_deriv.eval_real(x)
        if self.zeta * x > _EXP_LOG_GUARD:
            return math.inf
        return math.exp(self.zeta * x) * val

    def z(self, x: float) -> float:
        """Z(x) = 1 + q * integral of W over [0, x]; 1 on (-inf, 0]."""
        if x <= 0:
            return 1.0
        val = 1.0 + self.q * self._untilted.integral0(x)
        if abs(val.imag) > _IMAG_TOL * (1.0 + abs(val.real)):
            raise RepeatedRootsDetected(f"imaginary residue {val.imag} at x={x}")
        return float(val.real)

    def laplace_transform_w(self, s: float) -> float:
        """Analytic Laplace transform of the representation at s > zeta."""
        if s <= self.zeta:
            raise DomainError("transform converges only for s > zeta")
        out = 0.0 + 0.0j
        for r, c in self._untilted.terms:
            # term poly * e^{-r x}: transform of x^j is j!/(s + r)^{j+1}
            for j, coef in enumerate(c):
                out += coef * math.factorial(j) / (s + r) ** (j + 1)
        return float(out.real)

    # -- diagnostics --------------------------------------------------------

    def sum_c_residual(self) -> float:
        """Relative residual of sum(C) against 1/psi'(zeta) (case 2: minus 1/mu)."""
        target = 1.0 / self.psi_prime_zeta
        if self.case == CASE2:
            target -= self.w0  # w0 = 1/mu
        total = sum(w for _, _, w in self.terms)
        return abs(total.real - target) / max(abs(target), 1e-300)


def boundary_identities(sf: ScaleFunction, wh: Optional[WhCoefficients] = None) -> dict:
    """Residuals of the positive-root identity zeta/q = theta/varrho and of
    the coefficient-sum identity."""
    wh = wh or sf.wh
    lhs = sf.zeta / sf.q
    rhs = sf.theta / wh.varrho
    return {
        "zeta_over_q": lhs,
        "theta_over_varrho": rhs,
        "zeta_identity_rel_err": abs(lhs - rhs) / max(abs(lhs), 1e-300),
        "sum_c_rel_err": sf.sum_c_residual(),
    }


def _weights(wh: WhCoefficients, zeta: float, q: float):
    terms = []
    for xi, k, A in wh.entries:
        w = (zeta / q) * A * (xi / (zeta + xi)) ** k
        terms.append((xi, k, w))
    return terms


def _build_sums(terms, zeta: float, w0: float):
    """Tilted and untilted exponential-sum representations from the
    multiplicity-general closed form."""
    lead = w0 + sum(w for _, _, w in terms)
    if abs(lead.imag) > _IMAG_TOL * (1.0 + abs(lead.real)):
        raise RepeatedRootsDetected("leading coefficient not real")
    lead = float(lead.real)
    by_root: dict = {}
    for xi, k, w in terms:
        # e^{-xi x} carries the truncated exponential polynomial
        # sum_{j<k} ((zeta+xi) x)^j / j!
        c = by_root.setdefault(xi, np.zeros(k, dtype=complex))
        if len(c) < k:
            c = np.concatenate([c, np.zeros(k - len(c), dtype=complex)])
            by_root[xi] = c
        rate = zeta + xi
        for j in range(k):
            by_root[xi][j] += -w * rate**j / math.factorial(j)
    tilted_terms = [(0.0, np.array([lead]))]
    untilted_terms = [(-zeta, np.array([lead]))]
    for xi, c in by_root.items():
        tilted_terms.append((zeta + xi, c))
        untilted_terms.append((xi, c))
    return lead, ExpPolySum(tilted_terms), ExpPolySum(untilted_terms)


def assemble(
    wh: WhCoefficients,
    *,
    w0: float,
    wp0: float,
    theta: float,
    psi_prime_zeta: Optional[float] = None,
    case: Optional[str] = None,
    decomp: Optional[RootDecomposition] = None,
    model: Optional[SnLevyModel] = None,
) -> ScaleFunction:
    """Build a ScaleFunction from coefficient data (possibly caller-supplied
    multiplicities)."""
    case = case or wh.case
    terms = _weights(wh, wh.zeta, wh.q)
    lead, tilted, untilted = _build_sums(terms, wh.zeta, w0)
    C = None
    if all(k == 1 for _, k, _ in terms):
        C_vals = []
        ok = True
        for xi, _, w in terms:
            if abs(complex(w).imag) > _IMAG_TOL * (1.0 + abs(complex(w).real)):
                ok = False
                break
            C_vals.append(float(complex(w).real))
        if ok:
            C = tuple(C_vals)
    sf = ScaleFunction(
        q=wh.q,
        zeta=wh.zeta,
        psi_prime_zeta=psi_prime_zeta if psi_prime_zeta is not None else 1.0 / lead,
        case=case,
        w0=w0,
        wp0=wp0,
        theta=theta,
        lead=lead,
        terms=tuple(terms),
        C=C,
        wh=wh,
        decomp=decomp,
        model=model,
    )
    object.__setattr__(sf, "_tilted", tilted)
    object.__setattr__(sf, "_tilted_deriv", tilted.derivative())
    object.__setattr__(sf, "_untilted", untilted)
    return sf


def build_scale(model: SnLevyModel, q: float) -> ScaleFunction:
    """Full pipeline: roots -> partial fractions -> assembled scale function."""
    if q <= 0:
        raise DomainError("q must be > 0")
    decomp = find_roots(model, q)
    wh = partial_fraction_coefficients(decomp)
    zeta = decomp.zeta
    if model.case == CASE1:
        w0 = 0.0
        wp0 = 2.0 / model.sigma**2
        theta = 2.0 / model.sigma**2
    else:
        w0 = 1.0 / model.mu
        wp0 = (q + model.levy_mass) / model.mu**2
        theta = -zeta / model.mu + (q + model.levy_mass) / model.mu**2
    return assemble(
        wh,
        w0=w0,
        wp0=wp0,
        theta=theta,
        psi_prime_zeta=model.laplace_exponent_derivative(zeta),
        case=model.case,
        decomp=decomp,
        model=model,
    )
