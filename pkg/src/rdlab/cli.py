"""``rd-lab``: command-line front end.

Exit codes: 0 success, 1 a checked contract failed, 2 bad usage,
configuration or budget.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from rdlab import __version__
from rdlab.analysis import (DEFAULT_MAX_POINTS, SAMPLER_ALIASES, SAMPLERS, Cube, Polynomial,
                            counterexample_demo, rapid_expansion_check, rd_scan)
from rdlab.centroid import (RC_MODES, graph_product_rc_map, median_map, product_centroid,
                            verify_c1, verify_c2, verify_c3, verify_rc, verify_rc4)
from rdlab.convolution import SparseFunction, convolve, l2_norm, operator_norm_estimate, rd_ratio
from rdlab.enumeration import DEFAULT_CAP, ball, sphere
from rdlab.errors import BudgetExceeded, ConfigError, ContractError, RDLabError
from rdlab.groups import FreeGroup, GraphProduct, Group, WeightedAbelianGroup
from rdlab.groups.base import as_weight, exact
from rdlab.groups.config import config_digest, load_group
from rdlab import reports

EXIT_OK, EXIT_CONTRACT, EXIT_USAGE = 0, 1, 2
THREADS_ENV = "RD_LAB_THREADS"


class UsageError(RDLabError):
    pass


@dataclass
class RunConfig:
    """A validated group config plus the command it is used for."""

    group_path: Path | None
    group: Group | None
    digest: str | None
    command: str | None = None
    params: dict = field(default_factory=dict)


def validate_config(path: str | Path) -> RunConfig:
    """Load and fully validate a group config; ConfigError lists every issue."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError([f"{p}: no such file"])
    group = load_group(p)
    return RunConfig(p, group, config_digest(group))


def threads_from_env(environ=os.environ) -> int | None:
    raw = environ.get(THREADS_ENV)
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


# ------------------------------------------------------------ parsing

def _radius(text: str):
    try:
        r = exact(as_weight(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if r < 0:
        raise argparse.ArgumentTypeError("radius must be nonnegative")
    return r


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _poly(text: str) -> Polynomial:
    try:
        return Polynomial.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _elements(group: Group, text: str):
    items = [group.parse(t) for t in text.split(";") if t.strip()]
    if not items:
        raise UsageError("elements: needs at least one element")
    return items


def parse_set(group: Group, text: str, cap: int):
    """``ball:R``, ``sphere:R``, ``cube:M`` or ``elements:g1;g2;...``."""
    kind, sep, arg = text.partition(":")
    if not sep:
        raise UsageError(f"set {text!r} must look like ball:R, sphere:R, cube:M or elements:...")
    if kind == "ball":
        return list(ball(group, _radius(arg), cap))
    if kind == "sphere":
        return list(sphere(group, _radius(arg), cap))
    if kind == "cube":
        if not isinstance(group, WeightedAbelianGroup):
            raise UsageError("cube sets need a weighted_abelian group")
        return Cube(group, int(arg))
    if kind == "elements":
        return _elements(group, arg)
    raise UsageError(f"unknown set kind {kind!r}")


def parse_function(group: Group, text: str, cap: int) -> SparseFunction:
    """A set description (its indicator), ``delta:g``, or a path to a SparseFunction JSON file."""
    kind, sep, arg = text.partition(":")
    if sep and kind == "delta":
        return SparseFunction.delta(group.parse(arg))
    if sep and kind in ("ball", "sphere", "elements"):
        return SparseFunction.indicator(group, parse_set(group, text, cap))
    p = Path(text)
    try:
        obj = json.loads(p.read_text())
    except OSError as exc:
        raise UsageError(f"{p}: cannot read function ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{p}: invalid JSON ({exc.msg})") from exc
    return SparseFunction.from_json(group, obj)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rd-lab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"rd-lab {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name, help_, group=True, fmt="csv"):
        p = sub.add_parser(name, help=help_)
        if group:
            p.add_argument("--group", required=True, help="group config JSON")
        p.add_argument("--out", default="-", help="output path, - for stdout")
        p.add_argument("--format", choices=("csv", "json"), default=fmt)
        p.add_argument("--cap", type=_positive, default=DEFAULT_CAP,
                       help="enumeration cap (elements)")
        return p

    p = command("ball", "enumerate a ball or sphere")
    p.add_argument("--radius", type=_radius, required=True)
    p.add_argument("--sphere", action="store_true", help="only elements of length exactly R")

    p = command("conv", "convolve two functions", fmt="json")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)

    p = command("rd-scan", "largest rd ratios per radius and sampler")
    p.add_argument("--rmax", type=_radius, required=True)
    p.add_argument("--sampler", action="append",
                   choices=SAMPLERS + tuple(SAMPLER_ALIASES), help="repeatable")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--psi-radius", type=_radius)
    p.add_argument("--poly", type=_poly, help="comparison bound, coefficients lowest first")

    p = command("centroid-check", "centroid counts against a polynomial bound")
    p.add_argument("--elements-radius", type=_radius, required=True,
                   help="fixed elements range over this ball")
    p.add_argument("--radius", type=_radius, required=True, help="counting radius for c1 and c3")
    p.add_argument("--truncation", type=_radius, required=True, help="truncation radius for c2")
    p.add_argument("--poly", type=_poly,
                   help="bound P; default r+1 for free groups, (r+1)^m for m free factors")

    p = command("rc-check", "relative-centroid counts and rc4 on random pairs")
    p.add_argument("--elements-radius", type=_radius, required=True)
    p.add_argument("--radius", type=_radius, required=True)
    p.add_argument("--mode", action="append", choices=RC_MODES, help="repeatable; default all")
    p.add_argument("--pairs", type=int, default=1000, help="random pairs for rc4")
    p.add_argument("--seed", type=int, default=0)

    p = command("expansion", "Rapid Expansion inequality for two sets", fmt="json")
    p.add_argument("--S", dest="S", required=True, help="ball:R, sphere:R, cube:M or elements:...")
    p.add_argument("--X", dest="X", required=True)
    p.add_argument("--poly", type=_poly, required=True)
    p.add_argument("--max-points", type=_positive, default=DEFAULT_MAX_POINTS)

    p = command("counterexample", "finite witness against a polynomial", group=False, fmt="json")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--poly", type=_poly, required=True)
    p.add_argument("--max-points", type=_positive, default=DEFAULT_MAX_POINTS)
    p.add_argument("--m-max", type=_positive, default=10_000)

    p = command("opnorm", "power-iteration lower bounds for the convolution norm")
    p.add_argument("--phi", required=True)
    p.add_argument("--window", type=_radius, action="append", required=True,
                   help="window radius, repeatable")
    p.add_argument("--max-iters", type=_positive, default=1000)
    p.add_argument("--tol", type=float, default=1e-12)
    return ap


# ----------------------------------------------------------- commands

def _meta(cfg: RunConfig, args, **extra) -> dict:
    meta = {"rd_lab": __version__, "command": cfg.command,
            "config_digest": cfg.digest or "none"}
    meta.update(extra)
    meta["cap"] = args.cap
    return meta


def _cmd_ball(cfg, args):
    b = (sphere if args.sphere else ball)(cfg.group, args.radius, args.cap)
    return b, _meta(cfg, args, radius=args.radius, sphere=str(args.sphere).lower()), EXIT_OK


def _cmd_conv(cfg, args):
    g = cfg.group
    phi = parse_function(g, args.phi, args.cap)
    psi = parse_function(g, args.psi, args.cap)
    out = convolve(phi, psi)
    body = out.to_json() | {"l2_norm": l2_norm(out), "rd_ratio": rd_ratio(phi, psi)}
    if args.format == "csv":
        body = out
    return body, _meta(cfg, args, phi=args.phi, psi=args.psi), EXIT_OK


def _cmd_rd_scan(cfg, args):
    samplers = args.sampler or ["ball", "sphere"]
    rep = rd_scan(cfg.group, args.rmax, samplers, args.seed, trials=args.trials,
                  psi_radius=args.psi_radius, bound=args.poly, cap=args.cap)
    meta = _meta(cfg, args, seed=args.seed, trials=args.trials,
                 psi_radius="none" if args.psi_radius is None else args.psi_radius,
                 poly="none" if args.poly is None else ",".join(map(str, args.poly.to_json())))
    return rep, meta, EXIT_OK if rep.passed else EXIT_CONTRACT


def _default_centroid(group: Group):
    if isinstance(group, FreeGroup):
        return median_map(group), Polynomial((1, 1))
    if (isinstance(group, GraphProduct) and group.is_clique(range(group.n_vertices))
            and all(isinstance(v, FreeGroup) for v in group.vertex_groups)):
        m = group.n_vertices
        coeffs = [math.comb(m, i) for i in range(m + 1)]
        return product_centroid(*(median_map(v) for v in group.vertex_groups)), Polynomial(tuple(coeffs))
    raise UsageError("centroid-check needs a free group or a complete-graph product of free groups")


def _cmd_centroid(cfg, args):
    g = cfg.group
    co, default = _default_centroid(g)
    P = args.poly or default
    elems = ball(g, args.elements_radius, args.cap)
    header = ("mode", "fixed_element", "radius", "count", "stabilized", "bound", "pass")
    rows, ok = [], True
    for x in elems:
        for rep, bound in ((verify_c1(g, co, x, args.radius, args.cap), P(args.radius)),
                           (verify_c2(g, co, x, args.truncation, args.cap), P(x.length)),
                           (verify_c3(g, co, x, args.radius, args.cap), P(args.radius))):
            good = rep.count <= bound
            ok &= good
            r = rep.row()
            rows.append([r["mode"], r["fixed_element"], r["radius"], r["count"],
                         r["stabilized"], str(bound), str(good).lower()])
    meta = _meta(cfg, args, map=co.name, poly=",".join(map(str, P.to_json())),
                 elements_radius=args.elements_radius, radius=args.radius,
                 truncation=args.truncation)
    return (header, rows), meta, EXIT_OK if ok else EXIT_CONTRACT


def _cmd_rc(cfg, args):
    import numpy as np

    g = cfg.group
    if not isinstance(g, GraphProduct):
        raise UsageError("rc-check needs a graph_product group")
    rc = graph_product_rc_map(g)
    elems = ball(g, args.elements_radius, args.cap)
    header = ("mode", "fixed_element", "radius", "count", "stabilized")
    rows = []
    for mode in args.mode or RC_MODES:
        for x in elems:
            r = verify_rc(g, rc, mode, x, args.radius, args.cap).row()
            rows.append([r[k] for k in header])
    rng = np.random.default_rng(args.seed)
    idx = rng.integers(0, len(elems), size=(max(args.pairs, 0), 2))
    bad = sum(not verify_rc4(g, rc, elems.elements[i], elems.elements[j]) for i, j in idx)
    rows.append(["rc4", f"{args.pairs} random pairs", args.elements_radius, bad, ""])
    meta = _meta(cfg, args, seed=args.seed, elements_radius=args.elements_radius,
                 radius=args.radius, rc4_pairs=args.pairs, rc4_failures=bad)
    return (header, rows), meta, EXIT_OK if bad == 0 else EXIT_CONTRACT


def _cmd_expansion(cfg, args):
    g = cfg.group
    S = parse_set(g, args.S, args.cap)
    X = parse_set(g, args.X, args.cap)
    rep = rapid_expansion_check(S, X, args.poly, max_points=args.max_points)
    return rep, _meta(cfg, args, S=args.S, X=args.X, max_points=args.max_points), EXIT_OK


def _cmd_counterexample(cfg, args):
    rep = counterexample_demo(args.n, args.poly, max_points=args.max_points, m_max=args.m_max)
    meta = _meta(cfg, args, n=args.n, max_points=args.max_points, m_max=args.m_max)
    return rep, meta, EXIT_OK


def _cmd_opnorm(cfg, args):
    g = cfg.group
    phi = parse_function(g, args.phi, args.cap)
    header = ("window_radius", "window_size", "estimate", "iterations", "converged")
    rows = []
    for w in args.window:
        est = operator_norm_estimate(phi, w, args.max_iters, args.tol, args.cap)
        rows.append([w, est.window_size, repr(est.value), est.iterations,
                     str(est.converged).lower()])
    meta = _meta(cfg, args, phi=args.phi, max_iters=args.max_iters, tol=args.tol)
    return (header, rows), meta, EXIT_OK


COMMANDS = {"ball": _cmd_ball, "conv": _cmd_conv, "rd-scan": _cmd_rd_scan,
            "centroid-check": _cmd_centroid, "rc-check": _cmd_rc, "expansion": _cmd_expansion,
            "counterexample": _cmd_counterexample, "opnorm": _cmd_opnorm}


def _fail(code: int, msg: str) -> int:
    print(f"rd-lab: error: {' '.join(msg.split())}", file=sys.stderr)
    return code


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        threads_from_env()
        if getattr(args, "group", None) is not None:
            cfg = validate_config(args.group)
        else:
            cfg = RunConfig(None, None, None)
        cfg.command = args.command
        cfg.params = {k: v for k, v in vars(args).items() if k not in ("command", "group")}
        report, meta, code = COMMANDS[args.command](cfg, args)
        reports.emit_report(report, args.format, args.out, meta)
    except ContractError as exc:
        return _fail(EXIT_CONTRACT, f"contract violated: {exc}")
    except ConfigError as exc:
        return _fail(EXIT_USAGE, f"invalid config: {exc}")
    except BudgetExceeded as exc:
        return _fail(EXIT_USAGE, f"budget exceeded: {exc}")
    except (RDLabError, ValueError, TypeError, OSError) as exc:
        return _fail(EXIT_USAGE, str(exc))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
