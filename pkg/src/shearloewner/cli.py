"""Command line interface.

Exit codes: 0 accept/success, 1 reject/violation found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import plotdata
from .analysis import check_starlike, growth_check, reproduce_theorems
from .loewner import (
    CHAIN_HORIZON,
    DEFAULT_TOL,
    HerglotzField,
    QProfile,
    envelope_bound,
    integrate_transition,
    recover_chain_map,
    shear_coefficient_flow,
)
from .mminus import check_mminus, sharp_shear_bound
from .ode import IntegrationError
from .sampling import SamplingConfig
from .series import PowerSeriesMap2, SeriesError
from .shear import SHARP_CONSTANT, phi_map, shear_field, shear_of, shear_to_series

SUBCOMMANDS = ("check-mminus", "shear", "bound", "evolve", "starlike", "growth", "flow", "reproduce", "plot")


class InputError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="PATH", help="input file (series, or q profile)")
    common.add_argument("--out", dest="output", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="sampling seed")
    common.add_argument("--tol", type=float, default=None, help="defect tolerance or ODE tolerance")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--degree", type=int, default=None, help="truncation / stencil degree")
    common.add_argument("--s", type=float, default=None, help="start time")
    common.add_argument("--t", type=float, default=None, help="end time")
    common.add_argument("--a", type=float, nargs=2, metavar=("RE", "IM"), default=None,
                        help="shear coefficient used instead of an input file")
    common.add_argument("--samples", type=int, default=None, help="random samples for membership checks")
    common.add_argument("--z", type=float, nargs=4, metavar=("RE1", "IM1", "RE2", "IM2"), default=None,
                        help="initial point for evolve / flow-trajectory")

    parser = argparse.ArgumentParser(prog="shearloewner", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "check-mminus": "sample Re<H(z), z> <= 0 over the ball",
        "shear": "replace a map by its shearing",
        "bound": "compute the sharp bound for the z2^2 coefficient",
        "evolve": "recover a chain map (or a transition point with --z) from a field",
        "starlike": "sample the starlikeness criterion",
        "growth": "screen the growth estimate |f(z)| <= |z|/(1-|z|)^2",
        "flow": "compute the z2^2 coefficient a(s,t) of a shear transition map",
        "reproduce": "run all extremality checks for the shear map",
        "plot": "emit CSV plot data",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "plot":
            p.add_argument("--kind", choices=plotdata.KINDS, required=True)
            p.add_argument("--r", type=float, default=0.999, help="sphere radius for defect-slice")
            p.add_argument("--step", type=float, default=0.01, help="time step for envelope")
            p.add_argument("--points", type=int, default=201, help="rows for defect-slice / flow-trajectory")
    return parser


def _complex_a(args, default=None):
    if args.a is None:
        return default
    return complex(args.a[0], args.a[1])


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def _load_series(args, from_a=None, required=True) -> PowerSeriesMap2 | None:
    if args.input:
        data = _read_json(args.input)
        if not isinstance(data, dict):
            raise InputError(f"{args.input}: expected a series object")
        return PowerSeriesMap2.from_dict(data)
    a = _complex_a(args)
    if a is not None and from_a is not None:
        return from_a(a)
    if required:
        raise InputError("need --in PATH or --a RE IM")
    return None


def _load_field(args) -> tuple[HerglotzField, object]:
    """A Herglotz field from a series file, a q-profile file, or ``--a``."""
    if args.input:
        data = _read_json(args.input)
        if isinstance(data, list):
            q = QProfile.from_list(data)
            return HerglotzField.from_profile(q, max(args.degree or 2, 2)), q
        if isinstance(data, dict):
            return HerglotzField.constant(PowerSeriesMap2.from_dict(data)), None
        raise InputError(f"{args.input}: expected a series object or a q-profile array")
    a = _complex_a(args, SHARP_CONSTANT)
    return HerglotzField.constant(shear_field(a, max(args.degree or 2, 2))), QProfile.constant(a)


def _sampling(args) -> SamplingConfig:
    kw = {"rng_seed": args.seed}
    if args.tol is not None:
        kw["defect_tolerance"] = args.tol
    if args.samples is not None:
        kw["random_samples"] = args.samples
    return SamplingConfig(**kw)


def _effective_config(args) -> dict:
    cfg = {
        "subcommand": args.subcommand,
        "input": args.input,
        "seed": args.seed,
        "tol": args.tol,
        "format": args.format,
        "degree": args.degree,
        "s": args.s,
        "t": args.t,
        "a": list(args.a) if args.a else None,
    }
    if args.subcommand in ("check-mminus", "starlike", "growth", "reproduce"):
        cfg["sampling"] = _sampling(args).to_dict()
    return cfg


def _c(v) -> list:
    v = complex(v)
    return [v.real, v.imag]


def _report_text(d: dict, prefix: str = "") -> str:
    lines = []
    for k, v in d.items():
        if isinstance(v, dict):
            lines.append(f"{prefix}{k}:")
            lines.append(_report_text(v, prefix + "  "))
        else:
            lines.append(f"{prefix}{k}: {v}")
    return "\n".join(lines)


def _run(args) -> tuple[str, int]:
    """Execute the subcommand; returns (output text, exit code)."""
    cmd = args.subcommand
    cfg = _effective_config(args)
    code = 0
    text = None

    if cmd == "check-mminus":
        H = _load_series(args, lambda a: shear_field(a, max(args.degree or 2, 2)))
        rep = check_mminus(H, _sampling(args))
        body, code = rep.to_dict(), int(not rep.accepted)
    elif cmd == "shear":
        f = _load_series(args, lambda a: phi_map(a, max(args.degree or 2, 2)))
        sh = shear_of(f)
        out = shear_to_series(sh, max(f.trunc_degree, 2))
        if args.format == "text":
            return f"lambda={sh.lam} mu={sh.mu} A={sh.A}\n", 0
        return out.dumps() + "\n", 0
    elif cmd == "bound":
        b = sharp_shear_bound()
        body = b.to_dict()
        text = f"sharp bound {b.value!r} attained in direction {b.direction}"
    elif cmd == "evolve":
        G, _ = _load_field(args)
        s = 0.0 if args.s is None else args.s
        tol = args.tol or DEFAULT_TOL
        if args.z is not None:
            t = s + 1.0 if args.t is None else args.t
            z = (complex(args.z[0], args.z[1]), complex(args.z[2], args.z[3]))
            w = integrate_transition(G, s, t, z, tol)
            body = {"s": s, "t": t, "z": [_c(z[0]), _c(z[1])], "phi": [_c(w[0]), _c(w[1])]}
        else:
            T = s + CHAIN_HORIZON if args.t is None else args.t
            degree = args.degree or min(4, G.trunc_degree)
            f = recover_chain_map(G, s, T, degree, tol=tol)
            return f.dumps() + "\n", 0
    elif cmd == "starlike":
        f = _load_series(args, lambda a: phi_map(a, max(args.degree or 2, 2)))
        rep = check_starlike(f, _sampling(args))
        body, code = rep.to_dict(), int(not rep.accepted)
    elif cmd == "growth":
        f = _load_series(args, lambda a: phi_map(a, max(args.degree or 2, 2)))
        rep = growth_check(f, _sampling(args))
        body, code = rep.to_dict(), int(not rep.accepted)
    elif cmd == "flow":
        if args.input:
            data = _read_json(args.input)
            if not isinstance(data, list):
                raise InputError(f"{args.input}: expected a q-profile array")
            q = QProfile.from_list(data)
        else:
            q = QProfile.constant(_complex_a(args, SHARP_CONSTANT))
        s = 0.0 if args.s is None else args.s
        t = s + 1.0 if args.t is None else args.t
        flow = shear_coefficient_flow(q, s, t)
        body = flow.to_dict()
        body["scaled"] = _c(math.exp(t) * flow.a_st)
        if q.sup_abs <= SHARP_CONSTANT and abs(flow.a_st) > envelope_bound(s, t) + 1e-9:
            code = 1
    elif cmd == "reproduce":
        rep = reproduce_theorems(_sampling(args), _complex_a(args, SHARP_CONSTANT))
        body, code = rep.to_dict(), int(not rep.all_passed)
        text = rep.render_text()
    elif cmd == "plot":
        if args.kind == "envelope":
            s = 0.0 if args.s is None else args.s
            header, rows = plotdata.envelope_table(s, 10.0 if args.t is None else args.t, args.step)
        elif args.kind == "defect-slice":
            header, rows = plotdata.defect_slice_table(_complex_a(args, SHARP_CONSTANT), args.r, args.points)
        else:
            G, _ = _load_field(args)
            z = (0.4, 0.6) if args.z is None else (complex(args.z[0], args.z[1]), complex(args.z[2], args.z[3]))
            s = 0.0 if args.s is None else args.s
            header, rows = plotdata.trajectory_table(G, z, s, s + 5.0 if args.t is None else args.t,
                                                     args.points, args.tol or DEFAULT_TOL)
        return plotdata.to_csv(header, rows), 0
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown subcommand {cmd}")

    if args.format == "text":
        return (text or _report_text(body)) + "\n" + _report_text({"config": cfg}) + "\n", code
    body = dict(body)
    body["config"] = cfg
    return json.dumps(body, indent=2) + "\n", code


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        output, code = _run(args)
    except (InputError, SeriesError, ValueError, IntegrationError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(output)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(output)
    return code


def main() -> None:
    sys.exit(run())
