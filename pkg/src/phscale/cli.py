"""Command-line front end.

Subcommands evaluate scale functions, exit probabilities, overshoot and
undershoot laws, meromorphic bounds, and the Monte Carlo oracle, emitting CSV
(with ``#`` metadata headers) or JSON.  Exit codes: 0 success, 2 validation
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .errors import DomainError, ModelValidationError, NumericalFailure, UnsupportedRegime
from .fluctuation import (
    IntervalPair,
    conjecture_residuals,
    down_exit,
    joint_overshoot_undershoot,
    overshoot_density,
    undershoot_density,
    up_exit,
)
from .meromorphic import (
    BETA_BENCHMARK,
    BETA_BENCHMARK_Q,
    cgmy_limit_study,
    truncated_coefficients,
    w_bounds,
    w_prime_bounds,
    z_bounds,
)
from .mc import simulate_overshoot_undershoot, simulate_two_sided_exit
from .models import BUILTIN_JUMPS, SnLevyModel, builtin_model, load_model_file
from .roots import find_roots
from .scale import boundary_identities, build_scale
from .wiener_hopf import wh_factor_minus


def _parse_grid(spec: str) -> np.ndarray:
    try:
        start, stop, count = spec.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise DomainError(f"grid spec must be start:stop:count, got {spec!r}")
    if stop < start or count < 2:
        raise DomainError("grid requires start <= stop and count >= 2")
    return np.linspace(start, stop, count)


def _parse_window(spec: str) -> Tuple[float, float]:
    try:
        lo, hi = spec.split(":")
        return float(lo), float(hi)  # 'inf' accepted by float()
    except ValueError:
        raise DomainError(f"window must be lo:hi, got {spec!r}")


def _resolve_model(args) -> SnLevyModel:
    name = args.model
    if name in BUILTIN_JUMPS:
        return builtin_model(name, sigma=args.sigma, mu=args.mu, lam=args.lam)
    if name == "beta-benchmark":
        raise DomainError("beta-benchmark is only valid for mero-bounds/cgmy-limit")
    return load_model_file(name)


def _emit(args, columns: Sequence[str], rows: List[Sequence], meta: dict) -> None:
    meta = {"version": __version__, **meta}
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        if args.format == "json":
            json.dump(
                {
                    "config": meta,
                    "columns": list(columns),
                    "rows": [list(map(_jsonable, r)) for r in rows],
                },
                out,
                indent=2,
            )
            out.write("\n")
        else:
            for k, v in meta.items():
                out.write(f"# {k}={v}\n")
            out.write(",".join(columns) + "\n")
            for r in rows:
                out.write(",".join(_fmt(v) for v in r) + "\n")
    finally:
        if args.output:
            out.close()


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _fmt(v) -> str:
    if isinstance(v, float) or isinstance(v, np.floating):
        return f"{float(v):.12g}"
    return str(v)


def _add_common(p: argparse.ArgumentParser, *, model: bool = True) -> None:
    if model:
        p.add_argument("--model", required=True, help="built-in name or model file path")
        p.add_argument("--sigma", type=float, default=1.0)
        p.add_argument("--mu", type=float, default=5.0)
        p.add_argument("--lam", type=float, default=5.0)
    p.add_argument("--q", type=float, default=0.05, help="discount rate > 0")
    p.add_argument("--output", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="phscale",
        description="Scale functions and fluctuation identities for spectrally "
        "negative Levy processes with phase-type jumps.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scale-eval", help="W, W', Z on a grid")
    _add_common(p)
    p.add_argument("--grid", required=True, help="start:stop:count")

    p = sub.add_parser("exit-prob", help="two-sided exit probabilities")
    _add_common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--b", type=float, required=True)

    p = sub.add_parser("overshoot", help="overshoot density on a grid")
    _add_common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--grid", required=True)

    p = sub.add_parser("undershoot", help="undershoot density on a grid")
    _add_common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--grid", required=True)

    p = sub.add_parser("joint", help="joint overshoot/undershoot window probability")
    _add_common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--a-window", required=True, help="lo:hi (overshoot magnitudes)")
    p.add_argument("--b-window", required=True, help="lo:hi (undershoot positions)")

    p = sub.add_parser("mero-bounds", help="truncated bounds for the beta-family")
    _add_common(p, model=False)
    p.add_argument("--model", default="beta-benchmark")
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--grid", required=True)
    p.set_defaults(q=BETA_BENCHMARK_Q)

    p = sub.add_parser("cgmy-limit", help="beta -> 0 convergence study")
    _add_common(p, model=False)
    p.add_argument("--tilde-alpha", type=float, default=3.0)
    p.add_argument("--tilde-c", type=float, default=0.1)
    p.add_argument("--betas", default="1,0.5,0.1", help="comma-separated decreasing")
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--grid", required=True)
    p.set_defaults(q=BETA_BENCHMARK_Q)

    p = sub.add_parser("simulate", help="Monte Carlo first-passage oracle")
    _add_common(p)
    p.add_argument("--mode", choices=("exit", "histogram"), default="exit")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--n-paths", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bin-width", type=float, default=0.1)

    p = sub.add_parser("identities", help="identity residual report")
    _add_common(p)

    return ap


def _cmd_scale_eval(args) -> None:
    model = _resolve_model(args)
    sf = build_scale(model, args.q)
    rows = [(x, sf.w(x), sf.w_prime(x) if x > 0 else sf.wp0, sf.z(x))
            for x in _parse_grid(args.grid)]
    _emit(args, ("x", "w", "w_prime", "z"),
          rows, {"command": "scale-eval", "model": args.model, "q": args.q,
                 "sigma": model.sigma, "mu": model.mu, "lam": model.lam})


def _cmd_exit_prob(args) -> None:
    model = _resolve_model(args)
    sf = build_scale(model, args.q)
    u = up_exit(sf, args.x, args.b)
    d = down_exit(sf, args.x, args.b)
    _emit(args, ("x", "b", "up_exit", "down_exit"), [(args.x, args.b, u, d)],
          {"command": "exit-prob", "model": args.model, "q": args.q,
           "sigma": model.sigma, "mu": model.mu, "lam": model.lam})


def _cmd_density(args, kind: str) -> None:
    model = _resolve_model(args)
    sf = build_scale(model, args.q)
    fn = overshoot_density if kind == "overshoot" else undershoot_density
    rows = [(v, fn(sf, args.x, float(v))) for v in _parse_grid(args.grid) if v > 0]
    _emit(args, ("level", "density"), rows,
          {"command": kind, "model": args.model, "q": args.q, "x": args.x,
           "sigma": model.sigma, "mu": model.mu, "lam": model.lam})


def _cmd_joint(args) -> None:
    model = _resolve_model(args)
    sf = build_scale(model, args.q)
    a_lo, a_hi = _parse_window(args.a_window)
    b_lo, b_hi = _parse_window(args.b_window)
    val = joint_overshoot_undershoot(sf, args.x, IntervalPair(a_lo, a_hi, b_lo, b_hi))
    _emit(args, ("a_lo", "a_hi", "b_lo", "b_hi", "value"),
          [(a_lo, a_hi, b_lo, b_hi, val)],
          {"command": "joint", "model": args.model, "q": args.q, "x": args.x})


def _cmd_mero_bounds(args) -> None:
    if args.model != "beta-benchmark":
        raise DomainError("mero-bounds currently supports the beta-benchmark model only")
    tm = truncated_coefficients(BETA_BENCHMARK, args.q, args.m)
    rows = []
    for x in _parse_grid(args.grid):
        wl, wu = w_bounds(tm, float(x))
        zl, zu = z_bounds(tm, float(x))
        if x > 0:
            pl, pu = w_prime_bounds(tm, float(x))
        else:
            pl = pu = float("nan")
        rows.append((x, wl, wu, zl, zu, pl, pu))
    _emit(args, ("x", "w_lower", "w_upper", "z_lower", "z_upper",
                 "wp_lower", "wp_upper"), rows,
          {"command": "mero-bounds", "model": args.model, "q": args.q,
           "m": args.m, "delta_m": tm.delta})


def _cmd_cgmy(args) -> None:
    betas = [float(v) for v in args.betas.split(",")]
    grid = _parse_grid(args.grid)
    study = cgmy_limit_study(BETA_BENCHMARK, args.tilde_alpha, args.tilde_c,
                             betas, args.q, args.m, grid)
    rows = []
    for beta in betas:
        c = study["curves"][beta]
        for x, lo, hi in zip(grid, c["lower"], c["upper"]):
            rows.append((beta, x, lo, hi))
    diag = {f"sup_diff_{d['beta_pair'][0]}_{d['beta_pair'][1]}": d["upper_sup_diff"]
            for d in study["sup_diffs"]}
    _emit(args, ("beta", "x", "lower", "upper"), rows,
          {"command": "cgmy-limit", "q": args.q, "m": args.m,
           "tilde_alpha": args.tilde_alpha, "tilde_c": args.tilde_c, **diag})


def _cmd_simulate(args) -> None:
    model = _resolve_model(args)
    meta = {"command": "simulate", "mode": args.mode, "model": args.model,
            "q": args.q, "x": args.x, "n_paths": args.n_paths, "seed": args.seed,
            "sigma": model.sigma, "mu": model.mu, "lam": model.lam}
    if args.mode == "exit":
        if args.b is None:
            raise DomainError("--b is required for exit simulation")
        u, d = simulate_two_sided_exit(model, args.q, args.x, args.b,
                                       args.n_paths, args.seed)
        rows = [("up", u.value, u.stderr, u.ci95[0], u.ci95[1]),
                ("down", d.value, d.stderr, d.ci95[0], d.ci95[1])]
        _emit(args, ("kind", "value", "stderr", "ci_low", "ci_high"), rows,
              {**meta, "b": args.b})
    else:
        oh, uh = simulate_overshoot_undershoot(model, args.q, args.x,
                                               args.bin_width, args.n_paths,
                                               args.seed)
        rows = []
        for tag, h in (("overshoot", oh), ("undershoot", uh)):
            for c, v, se in zip(h.centers, h.density, h.stderr):
                rows.append((tag, c, v, se))
        _emit(args, ("kind", "bin_center", "density", "stderr"), rows,
              {**meta, "bin_width": args.bin_width})


def _cmd_identities(args) -> None:
    model = _resolve_model(args)
    report = identities_report(model, args.q)
    rows = [(k, v, "info" if ok is None else ("pass" if ok else "FAIL"))
            for k, (v, ok) in report.items()]
    _emit(args, ("identity", "residual", "status"), rows,
          {"command": "identities", "model": args.model, "q": args.q,
           "sigma": model.sigma, "mu": model.mu, "lam": model.lam})


def identities_report(model: SnLevyModel, q: float) -> dict:
    """Residuals of the structural identities, as {name: (residual, pass)}.

    The residue-sum conjecture is reported but never gated.
    """
    decomp = find_roots(model, q)
    sf = build_scale(model, q)
    out = {}
    res = abs(model.laplace_exponent(sf.zeta) - q)
    out["psi_zeta_minus_q"] = (res, res < 1e-10 * max(1.0, q))
    b = boundary_identities(sf)
    out["sum_c"] = (b["sum_c_rel_err"], b["sum_c_rel_err"] < 1e-8)
    out["zeta_over_q"] = (b["zeta_identity_rel_err"], b["zeta_identity_rel_err"] < 1e-8)
    phi0 = abs(wh_factor_minus(decomp, 0.0) - 1.0)
    out["wh_factor_at_zero"] = (phi0, phi0 < 1e-10)
    lt_err = 0.0
    for s in np.linspace(sf.zeta + 0.5, sf.zeta + 10.0, 20):
        target = 1.0 / (model.laplace_exponent(float(s)) - q)
        lt_err = max(lt_err, abs(sf.laplace_transform_w(float(s)) - target) / abs(target))
    out["laplace_transform"] = (lt_err, lt_err < 1e-8)
    if sf.C is not None and model.is_hyperexp:
        out["conjecture_max_residual"] = (max(conjecture_residuals(sf)), None)
    return out


_DISPATCH = {
    "scale-eval": _cmd_scale_eval,
    "exit-prob": _cmd_exit_prob,
    "overshoot": lambda a: _cmd_density(a, "overshoot"),
    "undershoot": lambda a: _cmd_density(a, "undershoot"),
    "joint": _cmd_joint,
    "mero-bounds": _cmd_mero_bounds,
    "cgmy-limit": _cmd_cgmy,
    "simulate": _cmd_simulate,
    "identities": _cmd_identities,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _DISPATCH[args.command](args)
    except (ModelValidationError, DomainError, FileNotFoundError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, UnsupportedRegime) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
