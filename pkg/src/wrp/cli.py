"""Command line front end.

Subcommands mirror the library: ``symmetry`` and ``hedge`` evaluate the
mapped payoff, ``joint`` and ``density`` query the law of the process
and its running maximum, ``mc`` runs the path sampler, and ``verify``
runs the named identity suite.  Data outputs are deterministic for a
fixed configuration and seed: CSV cells carry 17 significant digits
with '.' decimal, JSON numbers are emitted as plain shortest-round-trip
decimals, and thread counts never enter a payload (verify reports carry
wall-clock runtimes and are the one exception to byte identity).

Exit codes: 0 on success, 1 when a check or numerical certificate
fails, 2 on usage errors.  Failures print a single JSON object to
stderr with ``error`` and ``hint`` keys.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys

import numpy as np

from .config import load_model, load_payoff, parse_grid_spec
from .density import density
from .errors import UsageError, WrpError
from .joint import joint_surface
from .mc import (
    SimConfig,
    estimate_barrier_price,
    estimate_european,
    estimate_joint,
    simulate,
    write_batch,
)
from .symmetry import ContourParams, compute_g_curve, static_hedge_payoff
from .verify import run_suite

__all__ = ["main", "RunConfig"]

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Common plumbing shared by every subcommand."""

    out: str | None
    format: str
    threads: int
    log_level: str

    def __post_init__(self):
        if self.out is not None:
            parent = os.path.dirname(self.out) or "."
            if not os.path.isdir(parent):
                raise UsageError(
                    f"output directory {parent!r} does not exist",
                    hint="create it first or pass a different --out",
                )
        if self.threads < 1:
            raise UsageError(f"threads must be >= 1, got {self.threads}")


class _Parser(argparse.ArgumentParser):
    """argparse that surfaces grammar violations as usage errors
    instead of calling sys.exit."""

    def error(self, message):
        raise UsageError(message, hint=f"see `{self.prog} --help`")


def _fmt(value: float) -> str:
    return f"{float(value):.17g}"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _run_config(args) -> RunConfig:
    cfg = RunConfig(
        out=args.out,
        format=args.format,
        threads=getattr(args, "threads", 1),
        log_level=args.log_level,
    )
    logging.basicConfig(level=cfg.log_level.upper())
    return cfg


def _count(text: str) -> int:
    """Integer flag that accepts scientific notation like 1e6."""
    value = float(text)
    if value != int(value) or value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(value)


def _contour(args) -> ContourParams | None:
    if args.r is None and args.R is None:
        return None
    r = args.r if args.r is not None else args.R
    R = args.R if args.R is not None else args.r
    return ContourParams(gamma=args.gamma, r=r, R=R, method=args.method)


def _cmd_symmetry(args) -> int:
    cfg = _run_config(args)
    triplet = load_model(args.model)
    payoff = load_payoff(args.payoff)
    x = parse_grid_spec(args.x_grid)
    params = _contour(args)
    if params is not None:
        image = compute_g_curve(triplet, payoff, x, params=params)
    else:
        image = compute_g_curve(triplet, payoff, x, target_err=args.target_err)
    rows = zip(image.x_grid, image.g_values, image.error_bounds, image.im_residuals)
    if cfg.format == "csv":
        _emit(_csv(["x", "g", "err_bound", "im_residual"], rows), cfg.out)
    else:
        _emit(
            _json(
                {
                    "schema_version": 1,
                    "x": image.x_grid.tolist(),
                    "g": image.g_values.tolist(),
                    "err_bound": image.error_bounds.tolist(),
                    "im_residual": image.im_residuals.tolist(),
                }
            ),
            cfg.out,
        )
    return 0


def _cmd_hedge(args) -> int:
    cfg = _run_config(args)
    triplet = load_model(args.model)
    payoff = load_payoff(args.payoff)
    x = parse_grid_spec(args.x_grid)
    params = _contour(args)
    if params is not None:
        curve = static_hedge_payoff(triplet, payoff, x, params=params)
    else:
        curve = static_hedge_payoff(triplet, payoff, x, target_err=args.target_err)
    if cfg.format == "csv":
        _emit(_csv(["x", "hedge"], zip(curve.x_grid, curve.values)), cfg.out)
    else:
        _emit(
            _json(
                {
                    "schema_version": 1,
                    "x": curve.x_grid.tolist(),
                    "hedge": curve.values.tolist(),
                }
            ),
            cfg.out,
        )
    return 0


def _cmd_joint(args) -> int:
    cfg = _run_config(args)
    triplet = load_model(args.model)
    x_grid = parse_grid_spec(args.x)
    T_grid = parse_grid_spec(args.T)
    surface = joint_surface(triplet, args.K, x_grid, T_grid, threads=cfg.threads)
    if cfg.format == "csv":
        rows = (
            (x, T, surface.values[i, j])
            for i, x in enumerate(surface.x_grid)
            for j, T in enumerate(surface.T_grid)
        )
        _emit(_csv(["x", "T", "prob"], rows), cfg.out)
    else:
        _emit(
            _json(
                {
                    "schema_version": 1,
                    "K": args.K,
                    "x": surface.x_grid.tolist(),
                    "T": surface.T_grid.tolist(),
                    "prob": surface.values.tolist(),
                }
            ),
            cfg.out,
        )
    return 0


def _cmd_density(args) -> int:
    cfg = _run_config(args)
    triplet = load_model(args.model)
    x_grid = parse_grid_spec(args.x) if args.x is not None else None
    slice_ = density(triplet, args.t, x_grid)
    if cfg.format == "csv":
        _emit(_csv(["x", "p"], zip(slice_.x_grid, slice_.p_values)), cfg.out)
    else:
        _emit(
            _json(
                {
                    "schema_version": 1,
                    "t": slice_.t,
                    "x": slice_.x_grid.tolist(),
                    "p": slice_.p_values.tolist(),
                    "normalization_defect": slice_.normalization_defect,
                }
            ),
            cfg.out,
        )
    return 0


def _cmd_mc(args) -> int:
    cfg = _run_config(args)
    triplet = load_model(args.model)
    config = SimConfig(
        n_paths=args.paths,
        n_steps=args.steps,
        T=args.T,
        seed=args.seed,
        bridge_correction=not args.no_bridge,
    )
    batch = simulate(triplet, config, threads=cfg.threads)
    if args.save_paths is not None:
        write_batch(args.save_paths, batch)
    payload = {
        "schema_version": 1,
        "estimator": args.estimate,
        "n_paths": config.n_paths,
        "n_steps": config.n_steps,
        "T": config.T,
        "seed": config.seed,
        "bridge_correction": config.bridge_correction,
    }
    if args.estimate == "joint":
        if args.K is None or args.x is None:
            raise UsageError("--estimate joint needs --K and --x")
        value, se = estimate_joint(batch, args.K, args.x)
        payload.update({"K": args.K, "x": args.x})
    elif args.estimate == "barrier":
        if args.payoff is None:
            raise UsageError("--estimate barrier needs --payoff")
        payoff = load_payoff(args.payoff)
        value, se = estimate_barrier_price(batch, payoff, x0=args.x0)
        payload.update({"x0": args.x0})
    else:
        if args.payoff is None:
            raise UsageError("--estimate european needs --payoff")
        payoff = load_payoff(args.payoff)
        value, se = estimate_european(batch, payoff.h, x0=args.x0)
        payload.update({"x0": args.x0})
    payload.update({"estimate": value, "se": se})
    _emit(_json(payload), cfg.out)
    return 0


def _cmd_verify(args) -> int:
    cfg = _run_config(args)
    report = run_suite(args.suite, seed=args.seed, threads=cfg.threads)
    _emit(_json(report.as_dict()), cfg.out)
    return 0 if report.overall_pass else 1


def _add_common(sub, threads: bool = True) -> None:
    sub.add_argument("--out", default=None, help="output file (default stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    if threads:
        sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--log-level", default="warning")


def _add_contour(sub) -> None:
    sub.add_argument("--target-err", type=float, default=1e-4, help="certified error target")
    sub.add_argument("--gamma", type=float, default=4.0, help="contour real part")
    sub.add_argument("--r", type=float, default=None, help="outer truncation (overrides --target-err)")
    sub.add_argument("--R", type=float, default=None, help="inner truncation (overrides --target-err)")
    sub.add_argument("--method", choices=("auto", "dense", "split"), default="auto")


def _build_parser() -> _Parser:
    parser = _Parser(prog="wrp", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    sym = commands.add_parser("symmetry", help="mapped payoff g on a grid")
    sym.add_argument("--model", required=True)
    sym.add_argument("--payoff", required=True)
    sym.add_argument("--x-grid", default="0.05:2:40", help="grid spec a:b:n")
    _add_contour(sym)
    _add_common(sym, threads=False)
    sym.set_defaults(func=_cmd_symmetry)

    hedge = commands.add_parser("hedge", help="static hedge payoff across the barrier")
    hedge.add_argument("--model", required=True)
    hedge.add_argument("--payoff", required=True)
    hedge.add_argument("--x-grid", default="-2:2:161", help="grid spec a:b:n")
    _add_contour(hedge)
    _add_common(hedge, threads=False)
    hedge.set_defaults(func=_cmd_hedge)

    joint = commands.add_parser("joint", help="P(X_T <= K, max < x) on a product grid")
    joint.add_argument("--model", required=True)
    joint.add_argument("--K", type=float, required=True)
    joint.add_argument("--x", default="0:0.5:26", help="barrier grid spec")
    joint.add_argument("--T", default="0.25:4:16", help="horizon grid spec")
    _add_common(joint)
    joint.set_defaults(func=_cmd_joint)

    dens = commands.add_parser("density", help="transition density slice")
    dens.add_argument("--model", required=True)
    dens.add_argument("--t", type=float, required=True)
    dens.add_argument("--x", default=None, help="grid spec (default sized from moments)")
    _add_common(dens, threads=False)
    dens.set_defaults(func=_cmd_density)

    mc = commands.add_parser("mc", help="Monte Carlo estimate from exact-increment paths")
    mc.add_argument("--model", required=True)
    mc.add_argument("--T", type=float, default=1.0)
    mc.add_argument("--paths", type=_count, default=100_000)
    mc.add_argument("--steps", type=_count, default=1000)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--no-bridge", action="store_true", help="sample the max at grid nodes only")
    mc.add_argument("--estimate", choices=("joint", "barrier", "european"), required=True)
    mc.add_argument("--K", type=float, default=None, help="terminal level for --estimate joint")
    mc.add_argument("--x", type=float, default=None, help="barrier level for --estimate joint")
    mc.add_argument("--x0", type=float, default=0.0, help="start relative to the barrier")
    mc.add_argument("--payoff", default=None, help="payoff file for barrier/european")
    mc.add_argument("--save-paths", default=None, help="write the batch as WRPB binary")
    _add_common(mc)
    mc.set_defaults(func=_cmd_mc, format="json")

    verify = commands.add_parser("verify", help="run the named identity checks")
    verify.add_argument("--suite", choices=("quick", "full"), default="quick")
    verify.add_argument("--seed", type=int, default=1729)
    _add_common(verify)
    verify.set_defaults(func=_cmd_verify, format="json")

    return parser


def _absorb_negatives(argv: list[str]) -> list[str]:
    """Join ``--flag -5:5:9`` into ``--flag=-5:5:9`` so grid specs and
    numbers that open with a minus survive argparse's option scan."""
    merged = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if (
            tok.startswith("--")
            and "=" not in tok
            and len(nxt) > 1
            and nxt[0] == "-"
            and nxt[1].isdigit()
        ):
            merged.append(f"{tok}={nxt}")
            i += 2
        else:
            merged.append(tok)
            i += 1
    return merged


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_absorb_negatives(list(argv)))
        return args.func(args)
    except UsageError as exc:
        _fail(exc)
        return 2
    except WrpError as exc:
        _fail(exc)
        return 1


def _fail(exc: WrpError) -> None:
    payload = {
        "error": f"{type(exc).__name__}: {exc}",
        "hint": exc.hint or "",
    }
    sys.stderr.write(json.dumps(payload) + "\n")


if __name__ == "__main__":
    sys.exit(main())
