"""Negative Wiener-Hopf factor and the running-minimum law at an exponential time.

The factor is the rational function

    phi_q_minus(s) = prod_j (s + eta_j)/eta_j * prod_i xi_i / (s + xi_i),

whose partial-fraction expansion gives the density of the running minimum.
Simple-root residues are computed as exact products; repeated roots (only
reachable with caller-supplied multiplicity data) go through polynomial
quotient differentiation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import PoleEvaluation, RepeatedRootsDetected
from .models import CASE2
from .roots import RootDecomposition

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class WhCoefficients:
    """Partial-fraction data of phi_q_minus.

    ``entries`` holds (xi_i, k, A_i^(k)) for k = 1..multiplicity(i);
    ``varrho`` is sum_i A_i^(1) xi_i and ``atom_mass`` the point mass of the
    running minimum at 0 (compound Poisson case only, else 0).
    """

    entries: Tuple[Tuple[complex, int, complex], ...]
    varrho: float
    atom_mass: float
    zeta: float
    q: float
    case: str

    def first_order(self) -> List[Tuple[complex, complex]]:
        """(xi_i, A_i^(1)) pairs."""
        return [(xi, A) for xi, k, A in self.entries if k == 1]


def wh_factor_minus(decomp: RootDecomposition, s: complex) -> complex:
    """phi_q_minus(s) for Re(s) > 0 (and by continuation off the root set)."""
    out = 1.0 + 0.0j
    for eta in decomp.poles:
        out *= (s + eta) / eta
    for xi, mult in decomp.neg_roots:
        if abs(s + xi) < 1e-12 * (1.0 + abs(s)):
            raise PoleEvaluation(f"s={s} at a pole of phi_q_minus")
        out *= (xi / (s + xi)) ** mult
    if abs(out.imag) < _IMAG_TOL * (1.0 + abs(out.real)) and (
        not isinstance(s, complex) or s.imag == 0
    ):
        return float(out.real)
    return out


def _atom_mass(decomp: RootDecomposition) -> float:
    if decomp.case != CASE2:
        return 0.0
    num = np.prod([complex(xi) ** m for xi, m in decomp.neg_roots])
    den = np.prod([complex(eta) for eta in decomp.poles])
    return float((num / den).real)


def _simple_residues(decomp: RootDecomposition) -> List[Tuple[complex, complex]]:
    xis = decomp.xis
    out = []
    for i, xi in enumerate(xis):
        # A_i = lim_{s->-xi_i} (s+xi_i) phi(s) / xi_i, as exact products
        val = 1.0 + 0.0j
        for eta in decomp.poles:
            val *= (eta - xi) / eta
        for l, other in enumerate(xis):
            if l == i:
                continue
            val *= other / (other - xi)
        out.append((xi, val))
    return out


def _poly_from_roots(roots_mults) -> np.ndarray:
    p = np.array([1.0 + 0.0j])
    for r, m in roots_mults:
        for _ in range(m):
            p = npoly.polymul(p, np.array([r, 1.0], dtype=complex))
    return p


def _rational_derivative(num: np.ndarray, den: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    dn = npoly.polymul(npoly.polyder(num), den)
    nd = npoly.polymul(num, npoly.polyder(den))
    return npoly.polysub(dn, nd), npoly.polymul(den, den)


def _multiplicity_coefficients(decomp: RootDecomposition) -> List[Tuple[complex, int, complex]]:
    """A_i^(k) by differentiating phi(s) (s+xi_i)^{m_i} as a polynomial quotient."""
    scale = np.prod([complex(xi) ** m for xi, m in decomp.neg_roots]) / np.prod(
        [complex(eta) for eta in decomp.poles]
    )
    base_num = scale * _poly_from_roots([(eta, 1) for eta in decomp.poles])
    entries: List[Tuple[complex, int, complex]] = []
    for xi, mi in decomp.neg_roots:
        den_i = _poly_from_roots([(o, m) for o, m in decomp.neg_roots if o != xi])
        for k in range(1, mi + 1):
            num, den = base_num, den_i
            for _ in range(mi - k):
                num, den = _rational_derivative(num, den)
            val = npoly.polyval(-xi, num) / npoly.polyval(-xi, den)
            val /= math.factorial(mi - k) * complex(xi) ** k
            entries.append((xi, k, val))
    return entries


def partial_fraction_coefficients(decomp: RootDecomposition) -> WhCoefficients:
    """Partial-fraction coefficients of phi_q_minus.

    Simple roots use closed-form residue products; multiplicities (from a
    caller-built decomposition) use the quotient-differentiation path.
    """
    if decomp.all_simple:
        # guard against clustered roots masquerading as simple
        xis = decomp.xis
        for i in range(len(xis)):
            for j in range(i + 1, len(xis)):
                if abs(xis[i] - xis[j]) < 1e-8 * (1.0 + abs(xis[i])):
                    raise RepeatedRootsDetected("clustered roots in simple-root path")
        entries = [(xi, 1, A) for xi, A in _simple_residues(decomp)]
    else:
        entries = _multiplicity_coefficients(decomp)
    varrho = sum(A * xi for xi, k, A in entries if k == 1)
    if abs(varrho.imag) > _IMAG_TOL * (1.0 + abs(varrho.real)):
        raise RepeatedRootsDetected(f"varrho has imaginary part {varrho.imag}")
    return WhCoefficients(
        entries=tuple(entries),
        varrho=float(varrho.real),
        atom_mass=_atom_mass(decomp),
        zeta=decomp.zeta,
        q=decomp.q,
        case=decomp.case,
    )


def running_min_density(coeffs: WhCoefficients, x: float) -> float:
    """Density of -(running minimum at an exponential q-time) at x > 0."""
    total = 0.0 + 0.0j
    for xi, k, A in coeffs.entries:
        total += A * xi * (xi * x) ** (k - 1) / math.factorial(k - 1) * np.exp(-xi * x)
    if abs(total.imag) > _IMAG_TOL * (1.0 + abs(total.real)):
        raise RepeatedRootsDetected(f"density imaginary part {total.imag} at x={x}")
    return float(total.real)


def reconstruct_factor(coeffs: WhCoefficients, s: complex) -> complex:
    """phi_q_minus(s) rebuilt from atom + partial fractions (Laplace form)."""
    out: complex = coeffs.atom_mass
    for xi, k, A in coeffs.entries:
        out += A * (xi / (s + xi)) ** k
    if isinstance(out, complex) and abs(out.imag) < _IMAG_TOL * (1 + abs(out.real)):
        return float(out.real)
    return out
