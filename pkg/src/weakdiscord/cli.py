"""Command-line front end.

Usage:
    weakdiscord compute STATE.json --strength 1.0
    weakdiscord bell 0.1 0.2 0.3 --strength 1.0
    weakdiscord chain STATE.json --strength 0.1 --steps 50 --out chain.csv
    weakdiscord verify 1 --trials 200 --seed 1 --tolerance 1e-6
    weakdiscord sweep STATE.json --x-min 0 --x-max 5 --points 11
    weakdiscord superdiscord STATE.json --strength 0

Exit codes: 0 success, 1 verification failed, 2 unreadable state file,
3 invalid state, 4 optimizer did not converge, 64 usage error.  Errors are
written to stderr as one JSON object per line.
"""

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, bell, discord, linalg, states, theorems
from .errors import ConvergenceFailure, InvalidDensityMatrix, WeakDiscordError
from .measurement import overlap_factor
from .search import SearchConfig

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_INVALID_STATE = 3
EXIT_CONVERGENCE = 4
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class StateFileError(Exception):
    pass


def _strength(text):
    if text.strip().lower() in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"strength must be a number or 'inf', got {text!r}")
    if not x >= 0:
        raise argparse.ArgumentTypeError(f"strength must be >= 0, got {text!r}")
    return x


def _grid(text):
    try:
        return SearchConfig.parse_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _metadata(args, tolerances):
    cfg = args.grid
    return {
        "tool_version": __version__,
        "seed": args.seed,
        "prng_algorithm": states.PRNG_ALGORITHM,
        "grid_spec": [cfg.n_theta, cfg.n_phi],
        "tolerances": dict(tolerances, optimizer_step=cfg.step_tol,
                           hermitian=linalg.HERMITIAN_TOL, trace=linalg.TRACE_TOL,
                           psd=linalg.PSD_TOL),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.floating):
        return _json_safe(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = " ".join(_fmt(i) for i in v)
        else:
            out[key] = v
    return out


def _csv_text(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _emit(args, payload, rows=None, columns=None):
    """Write a JSON document or CSV table to --out or stdout."""
    if args.format == "csv":
        if rows is None:
            flat = _flatten({k: v for k, v in payload.items() if k != "metadata"})
            rows, columns = [flat], list(flat)
        text = _csv_text(rows, columns)
    else:
        text = json.dumps(_json_safe(payload), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        if not args.quiet:
            print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _load_state(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"cannot read state file {path}: {exc}") from exc
    try:
        return states.from_json_dict(data)
    except WeakDiscordError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise StateFileError(f"malformed state file {path}: {exc}") from exc


def cmd_compute(args):
    rho = _load_state(args.state)
    report = discord.correlation_report(rho, args.strength, args.grid)
    payload = {"strength": args.strength, "dimB": rho.dim_b, **report.as_dict(),
               "metadata": _metadata(args, {})}
    _emit(args, payload)
    return EXIT_OK


def cmd_bell(args):
    p = states.BellDiagonalParams(args.c1, args.c2, args.c3)
    x = args.strength
    closed = {
        "tqd": bell.bell_tqd(p),
        "qcc": bell.bell_qcc(p, x),
    }
    closed["residual"] = closed["tqd"] - closed["qcc"]
    post = bell.bell_post_weak(p, x)
    rho = states.bell_diagonal(p)
    rep = discord.correlation_report(rho, x, args.grid)
    numeric = {"tqd": rep.tqd, "qcc": rep.qcc, "residual": rep.residual}
    payload = {
        "params": {"c1": p.c1, "c2": p.c2, "c3": p.c3},
        "strength": x,
        "overlap_factor": rep.overlap_factor,
        "closed_form": closed,
        "numeric": numeric,
        "abs_diff": {k: abs(closed[k] - numeric[k]) for k in closed},
        "post_weak_params": {"c1": post.c1, "c2": post.c2, "c3": post.c3},
        "basis_tqd": rep.basis_tqd.as_dict(),
        "basis_qcc": rep.basis_qcc.as_dict(),
        "metadata": _metadata(args, {}),
    }
    _emit(args, payload)
    return EXIT_OK


CHAIN_COLUMNS = ["n", "tqd_n", "qcc_n", "partial_sum", "predicted_tqd_n", "predicted_qcc_n"]


def cmd_chain(args):
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if not args.strength > 0:
        raise UsageError("chain strength must be > 0")
    rho = _load_state(args.state)
    report = theorems.run_chain(rho, args.strength, args.steps, args.grid)
    rows = [{"n": st.n, "tqd_n": st.tqd_n, "qcc_n": st.qcc_n, "partial_sum": st.partial_sum,
             "predicted_tqd_n": report.predicted_tqd(st.n),
             "predicted_qcc_n": report.predicted_qcc(st.n)} for st in report.steps]
    payload = {"strength": report.strength, "predicted_decay": report.predicted_decay,
               "initial_tqd": report.initial_tqd, "max_deviation": report.max_deviation,
               "law_holds": report.law_holds, "steps": rows,
               "metadata": _metadata(args, {"law": 1e-6})}
    _emit(args, payload, rows, CHAIN_COLUMNS)
    return EXIT_OK


VERIFY_DEFAULTS = {
    "1": (theorems.verify_theorem1, 200, 1e-6),
    "2": (theorems.verify_theorem2, 200, 1e-6),
    "3": (theorems.verify_theorem3, 100, 1e-7),
    "4": (theorems.verify_theorem4, 50, 1e-6),
}


def cmd_verify(args):
    seed = 1 if args.seed is None else args.seed
    if args.theorem == "corollary":
        tol = 1e-6 if args.tolerance is None else args.tolerance
        rho = _load_state(args.state) if args.state else states.random_state(2, 4, seed)
        report = theorems.verify_corollary_sum(rho, tol=tol, config=args.grid)
    else:
        func, trials, tol = VERIFY_DEFAULTS[args.theorem]
        trials = trials if args.trials is None else args.trials
        if trials < 1:
            raise UsageError("--trials must be >= 1")
        tol = tol if args.tolerance is None else args.tolerance
        report = func(trials=trials, seed=seed, tol=tol, dim_b=args.dim_b, config=args.grid)
    payload = {**report.as_dict(), "metadata": _metadata(args, {"verify": tol})}
    if args.format == "csv":
        row = {k: v for k, v in payload.items() if k not in ("metadata", "details",
                                                             "worst_case")}
        _emit(args, payload, [row], list(row))
    else:
        _emit(args, payload)
    return EXIT_OK if report.passed else EXIT_FAILED


SWEEP_COLUMNS = ["x", "overlap_factor", "tqd", "qcc", "residual"]


def cmd_sweep(args):
    if not 0 <= args.x_min < args.x_max or not math.isfinite(args.x_max):
        raise UsageError("need 0 <= x_min < x_max < inf")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    if args.spacing == "log":
        if args.x_min <= 0:
            raise UsageError("log spacing needs x_min > 0")
        xs = np.geomspace(args.x_min, args.x_max, args.points)
    else:
        xs = np.linspace(args.x_min, args.x_max, args.points)
    rho = _load_state(args.state)
    d = discord.tqd(rho, args.grid).value
    rows = []
    for x in xs:
        w = discord.qcc(rho, float(x), args.grid).value
        rows.append({"x": float(x), "overlap_factor": overlap_factor(float(x)), "tqd": d, "qcc": w,
                     "residual": d - w})
    payload = {"spacing": args.spacing, "rows": rows, "metadata": _metadata(args, {})}
    _emit(args, payload, rows, SWEEP_COLUMNS)
    return EXIT_OK


def cmd_superdiscord(args):
    rho = _load_state(args.state)
    sd = discord.super_quantum_discord(rho, args.strength, args.grid)
    rep = discord.correlation_report(rho, args.strength, args.grid)
    payload = {"strength": args.strength, "super_discord": sd.value,
               "basis": sd.basis.as_dict(), "tqd": rep.tqd, "qcc": rep.qcc,
               "metadata": _metadata(args, {})}
    _emit(args, payload)
    return EXIT_OK


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--grid", type=_grid, default=SearchConfig(),
                        help="optimizer grid as <ntheta>x<nphi> (default 64x128)")
    # per-command default comes from ``default_format``; parent actions are shared
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--quiet", action="store_true")

    parser = _Parser(prog="weakdiscord", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", parents=[common], help="tqd, qcc and residual of a state")
    p.add_argument("state")
    p.add_argument("--strength", type=_strength, default=1.0)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("bell", parents=[common], help="Bell-diagonal closed form vs numeric")
    p.add_argument("c1", type=float)
    p.add_argument("c2", type=float)
    p.add_argument("c3", type=float)
    p.add_argument("--strength", type=_strength, default=1.0)
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("chain", parents=[common], help="repeated weak measurements")
    p.add_argument("state")
    p.add_argument("--strength", type=_strength, default=0.1)
    p.add_argument("--steps", type=int, default=20)
    p.set_defaults(func=cmd_chain, default_format="csv")

    p = sub.add_parser("verify", parents=[common], help="check a theorem on random states")
    p.add_argument("theorem", choices=("1", "2", "3", "4", "corollary"))
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--dim-b", type=int, default=2)
    p.add_argument("--state", default=None, help="state file for the corollary check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="qcc as a function of strength")
    p.add_argument("state")
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--spacing", choices=("lin", "log"), default="lin")
    p.set_defaults(func=cmd_sweep, default_format="csv")

    p = sub.add_parser("superdiscord", parents=[common], help="entropic super discord")
    p.add_argument("state")
    p.add_argument("--strength", type=_strength, default=0.0)
    p.set_defaults(func=cmd_superdiscord)
    return parser


def _fail(code, exc, exit_code):
    ctx = getattr(exc, "context", {}) or {}
    print(json.dumps(_json_safe({"code": code, "message": str(exc), "context": ctx})),
          file=sys.stderr)
    return exit_code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.format is None:
            args.format = getattr(args, "default_format", "json")
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except StateFileError as exc:
        return _fail("parse_error", exc, EXIT_PARSE)
    except InvalidDensityMatrix as exc:
        return _fail(exc.code, exc, EXIT_INVALID_STATE)
    except ConvergenceFailure as exc:
        return _fail(exc.code, exc, EXIT_CONVERGENCE)
    except WeakDiscordError as exc:
        return _fail(exc.code, exc, EXIT_INVALID_STATE)


if __name__ == "__main__":
    sys.exit(main())
