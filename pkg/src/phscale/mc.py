"""Monte Carlo first-passage oracle.

Paths follow the validation protocol used to cross-check the closed forms:
exponential interarrival times at the jump rate, Brownian segments advanced on
a 100-point random-walk subgrid of each interarrival (crossings tested at grid
points only, no bridge correction -- a deliberately simple, slightly biased
detector), drift-only segments crossed exactly, and a discount horizon at
e^{-q t} < 1e-8.  Fixed (seed, batch) RNG streams make every estimate
bit-reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError
from .models import HyperExpDist, PhaseTypeRepr, SnLevyModel

_HORIZON_EPS = 1e-8
_SUBSTEPS = 100
_BATCH = 20_000  # fixed so that results are independent of total path count


@dataclass(frozen=True)
class SimulationEstimate:
    """Point estimate with standard error and normal 95% CI."""

    value: float
    stderr: float
    ci95: Tuple[float, float]
    n_paths: int
    seed: int

    @staticmethod
    def from_sums(s: float, s2: float, n: int, seed: int) -> "SimulationEstimate":
        mean = s / n
        var = max(s2 / n - mean**2, 0.0)
        se = math.sqrt(var / n)
        return SimulationEstimate(
            value=mean, stderr=se, ci95=(mean - 1.96 * se, mean + 1.96 * se),
            n_paths=n, seed=seed,
        )


@dataclass(frozen=True)
class HistogramEstimate:
    """Binned discounted-indicator density estimate (per unit level)."""

    edges: np.ndarray
    density: np.ndarray
    stderr: np.ndarray
    n_paths: int
    seed: int

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


def _sample_jumps(jumps, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n i.i.d. jump sizes."""
    if isinstance(jumps, HyperExpDist):
        p = np.asarray(jumps.p)
        comp = rng.choice(len(p), size=n, p=p / p.sum())
        return rng.exponential(1.0 / np.asarray(jumps.eta)[comp])
    if isinstance(jumps, PhaseTypeRepr):
        # CTMC absorption time, vectorized over the surviving samples
        T = np.asarray(jumps.T)
        m = T.shape[0]
        exit_rates = jumps.exit_rates
        total = -np.diag(T)
        # transition probabilities out of each state (to states, then absorb)
        probs = np.zeros((m, m + 1))
        for i in range(m):
            probs[i, :m] = T[i] / total[i]
            probs[i, i] = 0.0
            probs[i, m] = exit_rates[i] / total[i]
        state = rng.choice(m, size=n, p=np.asarray(jumps.alpha))
        time = np.zeros(n)
        alive = np.ones(n, dtype=bool)
        while alive.any():
            idx = np.flatnonzero(alive)
            s = state[idx]
            time[idx] += rng.exponential(1.0 / total[s])
            u = rng.random(len(idx))
            cum = np.cumsum(probs[s], axis=1)
            nxt = (u[:, None] > cum).sum(axis=1)
            absorbed = nxt == m
            alive[idx[absorbed]] = False
            state[idx[~absorbed]] = nxt[~absorbed]
        return time
    raise DomainError("unknown jump distribution type")


def _run_batch(
    model: SnLevyModel,
    q: float,
    x: float,
    b: Optional[float],
    n: int,
    rng: np.random.Generator,
    collect_crossing: bool,
    substeps: int = _SUBSTEPS,
):
    """Advance n paths from x until exit or horizon.

    Returns (up_discounts, down_discounts, overshoot, undershoot) arrays of
    length n; non-exiting entries are 0 discounts / NaN levels.
    """
    t_max = math.log(1.0 / _HORIZON_EPS) / q
    pos = np.full(n, float(x))
    t = np.zeros(n)
    active = np.ones(n, dtype=bool)
    up = np.zeros(n)
    down = np.zeros(n)
    over = np.full(n, np.nan)
    under = np.full(n, np.nan)
    mu, sigma, lam = model.mu, model.sigma, model.lam

    # immediate exits at the start position
    if b is not None:
        at_top = pos >= b
        up[at_top] = 1.0
        active &= ~at_top

    while active.any():
        idx = np.flatnonzero(active)
        k = len(idx)
        if lam > 0:
            T = rng.exponential(1.0 / lam, size=k)
        else:
            T = np.full(k, 1.0)  # driftless chunking for jump-free models
        p0 = pos[idx]
        t0 = t[idx]

        if sigma > 0:
            dt = T / substeps
            steps = (
                mu * dt[:, None] * np.arange(1, substeps + 1)
                + sigma * np.sqrt(dt)[:, None]
                * np.cumsum(rng.standard_normal((k, substeps)), axis=1)
            )
            path = p0[:, None] + steps
            hit_dn = path < 0.0
            hit_up = path >= b if b is not None else np.zeros_like(hit_dn)
            hit = hit_dn | hit_up
            any_hit = hit.any(axis=1)
            first = np.argmax(hit, axis=1)
            rows = np.flatnonzero(any_hit)
            cols = first[rows]
            t_hit = t0[rows] + dt[rows] * (cols + 1)
            val = np.exp(-q * t_hit)
            is_dn = hit_dn[rows, cols]
            gidx = idx[rows]
            down[gidx[is_dn]] = val[is_dn]
            up[gidx[~is_dn]] = val[~is_dn]
            if collect_crossing:
                over[gidx[is_dn]] = -path[rows[is_dn], cols[is_dn]]
                prev = np.where(
                    cols[is_dn] > 0,
                    path[rows[is_dn], np.maximum(cols[is_dn] - 1, 0)],
                    p0[rows[is_dn]],
                )
                under[gidx[is_dn]] = prev
            active[gidx] = False
            survivors = np.flatnonzero(~any_hit)
            pos[idx[survivors]] = path[survivors, -1]
        else:
            # exact drift crossing of the upper barrier
            if b is not None:
                reach = p0 + mu * T >= b
                t_up = t0 + (b - p0) / mu
                gup = idx[reach]
                up[gup] = np.exp(-q * t_up[reach])
                active[gup] = False
                survivors = np.flatnonzero(~reach)
            else:
                survivors = np.arange(k)
            pos[idx[survivors]] += mu * T[survivors]

        if lam > 0:
            live = idx[survivors]
            t[live] += T[survivors]
            if len(live):
                z = _sample_jumps(model.jumps, rng, len(live))
                before = pos[live]
                after = before - z
                crossed = after < 0.0
                gdn = live[crossed]
                down[gdn] = np.exp(-q * t[gdn])
                if collect_crossing:
                    over[gdn] = -after[crossed]
                    under[gdn] = before[crossed]
                active[gdn] = False
                pos[live[~crossed]] = after[~crossed]
        else:
            live = idx[survivors]
            t[live] += T[survivors]

        expired = active & (t > t_max)
        active &= ~expired
    return up, down, over, under


def simulate_two_sided_exit(
    model: SnLevyModel,
    q: float,
    x: float,
    b: float,
    n_paths: int,
    seed: int,
    substeps: int = _SUBSTEPS,
) -> Tuple[SimulationEstimate, SimulationEstimate]:
    """(up, down) estimates of the discounted two-sided exit probabilities."""
    if not (0 <= x <= b) or b <= 0:
        raise DomainError("need 0 <= x <= b, b > 0")
    if n_paths < 1:
        raise DomainError("n_paths must be >= 1")
    if q <= 0:
        raise DomainError("q must be > 0")
    su = su2 = sd = sd2 = 0.0
    done = 0
    batch_idx = 0
    while done < n_paths:
        n = min(_BATCH, n_paths - done)
        rng = np.random.default_rng([seed, batch_idx])
        u, d, _, _ = _run_batch(model, q, x, b, n, rng, collect_crossing=False,
                                substeps=substeps)
        su += u.sum()
        su2 += (u**2).sum()
        sd += d.sum()
        sd2 += (d**2).sum()
        done += n
        batch_idx += 1
    return (
        SimulationEstimate.from_sums(su, su2, n_paths, seed),
        SimulationEstimate.from_sums(sd, sd2, n_paths, seed),
    )


def simulate_overshoot_undershoot(
    model: SnLevyModel,
    q: float,
    x: float,
    window_width: float,
    n_paths: int,
    seed: int,
    a_max: float = 10.0,
    b_max: Optional[float] = None,
) -> Tuple[HistogramEstimate, HistogramEstimate]:
    """Binned discounted overshoot/undershoot laws at the first down-crossing.

    Returns (overshoot_hist, undershoot_hist); densities are per unit level so
    they compare directly against the closed-form densities at bin centers.
    """
    if x <= 0:
        raise DomainError("x must be > 0")
    if window_width <= 0:
        raise DomainError("window_width must be > 0")
    if b_max is None:
        b_max = 2.0 * x
    edges_a = np.arange(0.0, a_max + window_width / 2, window_width)
    edges_b = np.arange(0.0, b_max + window_width / 2, window_width)
    sums_a = np.zeros(len(edges_a) - 1)
    sq_a = np.zeros_like(sums_a)
    sums_b = np.zeros(len(edges_b) - 1)
    sq_b = np.zeros_like(sums_b)
    done = 0
    batch_idx = 0
    while done < n_paths:
        n = min(_BATCH, n_paths - done)
        rng = np.random.default_rng([seed, batch_idx])
        _, d, over, under = _run_batch(model, q, x, None, n, rng, collect_crossing=True)
        mask = d > 0
        sums_a += np.histogram(over[mask], bins=edges_a, weights=d[mask])[0]
        sq_a += np.histogram(over[mask], bins=edges_a, weights=d[mask] ** 2)[0]
        sums_b += np.histogram(under[mask], bins=edges_b, weights=d[mask])[0]
        sq_b += np.histogram(under[mask], bins=edges_b, weights=d[mask] ** 2)[0]
        done += n
        batch_idx += 1

    def finish(s, s2, edges):
        mean = s / n_paths
        var = np.maximum(s2 / n_paths - mean**2, 0.0)
        se = np.sqrt(var / n_paths)
        return HistogramEstimate(
            edges=edges,
            density=mean / window_width,
            stderr=se / window_width,
            n_paths=n_paths,
            seed=seed,
        )

    return finish(sums_a, sq_a, edges_a), finish(sums_b, sq_b, edges_b)
